//! Multivariate gcd by recursive primitive remainder sequences, and
//! squarefree decomposition built on it.

use crate::field::ConstField;
use crate::mpoly::{MPoly, Monomial};
use crate::upoly::UPoly;

fn main_var<F: ConstField>(a: &MPoly<F>, b: &MPoly<F>) -> Option<u32> {
    let mut vs = a.variables();
    vs.extend(b.variables());
    vs.into_iter().min()
}

/// Content with respect to `v`: gcd of the coefficients in `v`.
pub fn content_in<F: ConstField>(p: &MPoly<F>, v: u32) -> MPoly<F> {
    let mut g = MPoly::zero();
    for c in p.coeffs_in(v) {
        if c.is_zero() {
            continue;
        }
        g = gcd(&g, &c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn prem<F: ConstField>(a: &MPoly<F>, b: &MPoly<F>, v: u32) -> MPoly<F> {
    let db = b.degree_in(v);
    let lb = b.lc_in(v);
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(v) >= db {
        let dr = r.degree_in(v);
        let lr = r.lc_in(v);
        let shift = Monomial::var(v, (dr - db) as u32);
        r = r.mul(&lb).sub(&b.mul(&lr).mul_term(&shift, &F::one()));
    }
    r
}

/// Monic (grlex) gcd; `gcd(0, 0) = 0`.
pub fn gcd<F: ConstField>(a: &MPoly<F>, b: &MPoly<F>) -> MPoly<F> {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return MPoly::one();
    }
    let v = main_var(a, b).unwrap();
    let (va, vb) = (a.variables(), b.variables());
    if va.len() == 1 && vb.len() == 1 && va[0] == vb[0] {
        let g = a.to_upoly(v).unwrap().gcd(&b.to_upoly(v).unwrap());
        return MPoly::from_upoly(&g, v);
    }
    if proven_coprime(a, b) {
        return MPoly::one();
    }
    if let Some(g) = F::mpoly_gcd(a, b) {
        return g;
    }
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let cg = gcd(&ca, &cb);
    let mut pa = a.exact_div(&ca).expect("content divides");
    let mut pb = b.exact_div(&cb).expect("content divides");
    if pa.degree_in(v) < pb.degree_in(v) {
        std::mem::swap(&mut pa, &mut pb);
    }
    let g = if pb.degree_in(v) == 0 {
        MPoly::one()
    } else {
        loop {
            let r = prem(&pa, &pb, v);
            if r.is_zero() {
                break pb;
            }
            if r.degree_in(v) == 0 {
                break MPoly::one();
            }
            let c = content_in(&r, v);
            pa = pb;
            pb = r.exact_div(&c).expect("content divides");
        }
    };
    let g = if g.is_constant() { g } else { g.exact_div(&content_in(&g, v)).expect("content divides") };
    g.mul(&cg).monic()
}

/// Image of `p` in `F[v]` after substituting constants for the other variables.
fn image_in<F: ConstField>(p: &MPoly<F>, v: u32, vals: &dyn Fn(u32) -> F) -> UPoly<F> {
    let mut cs = vec![F::zero(); p.degree_in(v).max(0) as usize + 1];
    for (m, c) in p.terms() {
        let mut t = c.clone();
        let mut e = 0;
        for &(u, k) in m.pairs() {
            if u == v {
                e = k as usize;
            } else {
                t = t.mul(&vals(u).pow(k as u64));
            }
        }
        cs[e] = cs[e].add(&t);
    }
    UPoly::from_coeffs(cs)
}

/// Proves `gcd(a, b) = 1` through univariate images: when the images in `v`
/// keep their degree and are coprime, the gcd has degree 0 in `v`.
fn proven_coprime<F: ConstField>(a: &MPoly<F>, b: &MPoly<F>) -> bool {
    let mut vs = a.variables();
    vs.extend(b.variables());
    vs.sort_unstable();
    vs.dedup();
    'vars: for &v in &vs {
        let (da, db) = (a.degree_in(v), b.degree_in(v));
        if da == 0 || db == 0 {
            continue;
        }
        for shift in 0..3i64 {
            let vals = |u: u32| F::from_int(3 + 2 * u as i64 + 5 * shift + (u as i64 * 7 + shift) % 11);
            let (ia, ib) = (image_in(a, v, &vals), image_in(b, v, &vals));
            if ia.deg() != da || ib.deg() != db {
                continue;
            }
            if ia.gcd(&ib).is_constant() {
                continue 'vars;
            }
        }
        return false;
    }
    true
}

pub fn lcm<F: ConstField>(a: &MPoly<F>, b: &MPoly<F>) -> MPoly<F> {
    if a.is_zero() || b.is_zero() {
        return MPoly::zero();
    }
    let g = gcd(a, b);
    a.exact_div(&g).expect("gcd divides").mul(b).monic()
}

/// Squarefree decomposition of a nonzero polynomial: pairwise coprime monic
/// squarefree factors with multiplicities, plus the scalar unit.
pub fn squarefree<F: ConstField>(p: &MPoly<F>) -> (F, Vec<(MPoly<F>, u32)>) {
    let unit = p.lc();
    let mut out = Vec::new();
    sqf_rec(&p.monic(), &mut out);
    out.retain(|(f, _)| !f.is_constant());
    (unit, out)
}

fn sqf_rec<F: ConstField>(p: &MPoly<F>, out: &mut Vec<(MPoly<F>, u32)>) {
    if p.is_constant() {
        return;
    }
    let v = p.variables()[0];
    let cont = content_in(p, v);
    let pp = p.exact_div(&cont).expect("content divides").monic();
    if pp.degree_in(v) > 0 {
        let dp = pp.derivative(v);
        let c = gcd(&pp, &dp);
        let mut w = pp.exact_div(&c).expect("gcd divides");
        let mut y = dp.exact_div(&c).expect("gcd divides");
        let mut z = y.sub(&w.derivative(v));
        let mut i = 1u32;
        while !w.is_constant() {
            let g = gcd(&w, &z);
            if !g.is_constant() {
                out.push((g.clone(), i));
            }
            w = w.exact_div(&g).expect("gcd divides");
            y = z.exact_div(&g).expect("gcd divides");
            z = y.sub(&w.derivative(v));
            i += 1;
        }
    }
    sqf_rec(&cont, out);
}

/// Largest `k` with `q^k` dividing `p` (`p` nonzero, `q` non-constant).
pub fn multiplicity<F: ConstField>(p: &MPoly<F>, q: &MPoly<F>) -> u32 {
    let mut f = p.clone();
    let mut k = 0;
    while let Some(r) = f.exact_div(q) {
        f = r;
        k += 1;
    }
    k
}
