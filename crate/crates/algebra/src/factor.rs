//! Univariate factorization: Zassenhaus over the rationals (modular
//! factorization, quadratic Hensel lifting, subset recombination) and
//! Trager's norm method over quadratic towers.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::AlgebraError;
use crate::field::{ConstField, FieldElement, Rational};
use crate::modgcd::{from_zpoly, to_zpoly, zdiv_exact, zmul, zprimitive, ZPoly};
use crate::tower::{common_tower, Tower, TowerElem};
use crate::upoly::UPoly;
use crate::zp::{self, PolyP};

fn zmod(v: &[BigInt], m: &BigInt) -> ZPoly {
    crate::modgcd::ztrim(v.iter().map(|c| c.mod_floor(m)).collect())
}

fn zsub(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_default();
            let y = b.get(i).cloned().unwrap_or_default();
            x - y
        })
        .collect()
}

fn zadd(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_default();
            let y = b.get(i).cloned().unwrap_or_default();
            x + y
        })
        .collect()
}

/// Division by a monic polynomial modulo `m`.
fn zdivmod_monic(a: &[BigInt], h: &[BigInt], m: &BigInt) -> (ZPoly, ZPoly) {
    let h = zmod(h, m);
    let dh = h.len() - 1;
    let mut r = zmod(a, m);
    if r.len() <= dh {
        return (Vec::new(), r);
    }
    let mut q = vec![BigInt::zero(); r.len() - dh];
    for k in (0..q.len()).rev() {
        let c = r[k + dh].mod_floor(m);
        if !c.is_zero() {
            for (j, hc) in h.iter().enumerate() {
                r[k + j] = (&r[k + j] - &c * hc).mod_floor(m);
            }
        }
        q[k] = c;
    }
    r.truncate(dh);
    (zmod(&q, m), zmod(&r, m))
}

/// One quadratic Hensel step: from `f = g*h mod m` with `h` monic and
/// `s*g + t*h = 1 mod m` to the same relations mod `m^2`.
fn hensel_step(
    f: &[BigInt],
    g: &[BigInt],
    h: &[BigInt],
    s: &[BigInt],
    t: &[BigInt],
    m: &BigInt,
) -> (ZPoly, ZPoly, ZPoly, ZPoly) {
    let m2 = m * m;
    let e = zmod(&zsub(f, &zmul(g, h)), &m2);
    let (q, r) = zdivmod_monic(&zmul(s, &e), h, &m2);
    let g2 = zmod(&zadd(&zadd(g, &zmul(t, &e)), &zmul(&q, g)), &m2);
    let h2 = zmod(&zadd(h, &r), &m2);
    let one = vec![BigInt::one()];
    let b = zmod(&zsub(&zadd(&zmul(s, &g2), &zmul(t, &h2)), &one), &m2);
    let (c, d) = zdivmod_monic(&zmul(s, &b), &h2, &m2);
    let s2 = zmod(&zsub(s, &d), &m2);
    let t2 = zmod(&zsub(&zsub(t, &zmul(t, &b)), &zmul(&c, &g2)), &m2);
    (g2, h2, s2, t2)
}

/// Lifts `f = g*h mod p` (with `h` monic) until the modulus reaches `bound`.
fn hensel_lift(f: &[BigInt], g: &PolyP, h: &PolyP, bound: &BigInt) -> (ZPoly, ZPoly, BigInt) {
    let p = g.p;
    let (one, s, t) = g.ext_gcd(h);
    debug_assert_eq!(one.c, vec![1]);
    let mut m = BigInt::from(p);
    let (mut gz, mut hz, mut sz, mut tz) = (g.to_bigints(), h.to_bigints(), s.to_bigints(), t.to_bigints());
    while &m < bound {
        let (a, b, c, d) = hensel_step(f, &gz, &hz, &sz, &tz, &m);
        gz = a;
        hz = b;
        sz = c;
        tz = d;
        m = &m * &m;
    }
    (gz, hz, m)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(idx.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 && idx[0] == n - k {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn choose_prime(f: &[BigInt]) -> (u64, usize) {
    let lc = f.last().unwrap();
    let mut best: Option<(u64, usize)> = None;
    let mut tried = 0;
    for p in zp::small_primes() {
        if zp::bigint_mod(lc, p) == 0 {
            continue;
        }
        let fp = PolyP::from_bigints(f, p);
        if fp.gcd(&fp.derivative()).deg() > 0 {
            continue;
        }
        let n = zp::count_factors_mod_p(&fp);
        if best.is_none_or(|(_, bn)| n < bn) {
            best = Some((p, n));
        }
        tried += 1;
        if tried >= 6 || n == 1 {
            break;
        }
    }
    best.expect("some prime keeps the polynomial squarefree")
}

/// Monic irreducible factors of a squarefree rational polynomial.
pub fn zassenhaus(f: &UPoly<Rational>) -> Result<Vec<UPoly<Rational>>, AlgebraError> {
    match f.degree() {
        None | Some(0) => return Ok(Vec::new()),
        Some(1) => return Ok(vec![f.monic()]),
        _ => {}
    }
    let fz = zprimitive(&to_zpoly(f).0);
    Ok(zassenhaus_z(&fz).into_iter().map(|g| from_zpoly(&g).monic()).collect())
}

/// Primitive irreducible factors of a squarefree primitive integer polynomial.
pub fn zassenhaus_z(fz: &[BigInt]) -> Vec<ZPoly> {
    let n = fz.len() - 1;
    if n <= 1 {
        return vec![fz.to_vec()];
    }
    let (p, count) = choose_prime(fz);
    if count == 1 {
        return vec![fz.to_vec()];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ p);
    let fp = PolyP::from_bigints(fz, p);
    let modular = zp::factor_squarefree_mod_p(&fp, &mut rng);

    let lc = fz.last().unwrap().abs();
    let maxc = fz.iter().map(|c| c.abs()).max().unwrap();
    let bound: BigInt = BigInt::from(2) * &lc * (BigInt::one() << n) * BigInt::from(n + 1) * &maxc + 1;

    let mut lifted: Vec<ZPoly> = Vec::new();
    let mut rest = fz.to_vec();
    let mut modulus = BigInt::one();
    for (i, u) in modular.iter().enumerate() {
        if i + 1 == modular.len() {
            let lcinv = lc_inverse(&rest, &modulus);
            lifted.push(zmod(&rest.iter().map(|c| c * &lcinv).collect::<Vec<_>>(), &modulus));
            break;
        }
        let rp = PolyP::from_bigints(&rest, p);
        let cof = rp.divmod(u).0;
        let (g, h, m) = hensel_lift(&rest, &cof, u, &bound);
        lifted.push(h);
        rest = g.iter().map(|c| zp::symmetric(c, &m)).collect();
        modulus = m;
    }

    let mut factors = Vec::new();
    let mut remaining = fz.to_vec();
    let mut k = 1;
    while 2 * k <= lifted.len() {
        let mut found = None;
        for subset in combinations(lifted.len(), k) {
            let lcr = remaining.last().unwrap().clone();
            let mut prod = vec![lcr];
            for &i in &subset {
                prod = zmod(&zmul(&prod, &lifted[i]), &modulus);
            }
            let cand = zprimitive(&prod.iter().map(|c| zp::symmetric(c, &modulus)).collect::<Vec<_>>());
            if let Some(q) = zdiv_exact(&remaining, &cand) {
                found = Some((subset, cand, q));
                break;
            }
        }
        match found {
            Some((subset, cand, q)) => {
                factors.push(cand);
                remaining = q;
                let mut i = 0;
                lifted.retain(|_| {
                    let keep = !subset.contains(&i);
                    i += 1;
                    keep
                });
            }
            None => k += 1,
        }
    }
    if remaining.len() > 1 {
        factors.push(zprimitive(&remaining));
    }
    factors
}

fn lc_inverse(f: &[BigInt], m: &BigInt) -> BigInt {
    let lc = f.last().unwrap().mod_floor(m);
    let e = lc.extended_gcd(m);
    assert!(e.gcd.is_one(), "leading coefficient invertible modulo prime power");
    e.x.mod_floor(m)
}

fn map_to_tower(p: &UPoly<TowerElem>, t: &Arc<Tower>) -> UPoly<TowerElem> {
    UPoly::from_coeffs(p.coeffs().iter().map(|c| t.embed(c)).collect())
}

fn coeff_tower(p: &UPoly<TowerElem>) -> Arc<Tower> {
    let mut t = Tower::base();
    for c in p.coeffs() {
        t = common_tower(&t, c.tower());
    }
    t
}

/// Monic irreducible factors of a squarefree polynomial over a quadratic tower.
pub fn trager(f: &UPoly<TowerElem>) -> Result<Vec<UPoly<TowerElem>>, AlgebraError> {
    match f.degree() {
        None | Some(0) => return Ok(Vec::new()),
        Some(1) => return Ok(vec![f.monic()]),
        _ => {}
    }
    let t = coeff_tower(f);
    if t.level() == 0 {
        let fq: UPoly<Rational> = f.map(|c| c.as_rational().expect("base coefficient"));
        return Ok(zassenhaus(&fq)?
            .into_iter()
            .map(|g| g.map(|c| TowerElem::rational(c.clone())))
            .collect());
    }
    let f = map_to_tower(f, &t).monic();
    let parent = t.parent().unwrap().clone();
    let alpha = t.generator();
    for s in 0i64..64 {
        let shift = UPoly::from_coeffs(vec![alpha.mul(&t.from_int(-s)), t.from_int(1)]);
        let g = f.compose(&shift);
        let gbar = UPoly::from_coeffs(g.coeffs().iter().map(|c| c.conjugate_top()).collect());
        let n_full = g.mul(&gbar);
        let norm: UPoly<TowerElem> = UPoly::from_coeffs(
            n_full.coeffs().iter().map(|c| c.split_top().0).collect(),
        );
        let norm = map_to_tower(&norm, &parent);
        if !norm.is_squarefree() {
            continue;
        }
        let parts = trager(&norm)?;
        let back = UPoly::from_coeffs(vec![alpha.mul(&t.from_int(s)), t.from_int(1)]);
        let mut out = Vec::new();
        for h in parts {
            let h = map_to_tower(&h, &t);
            let gi = UPoly::euclid_gcd(&g, &h);
            if gi.deg() > 0 {
                out.push(gi.compose(&back).monic());
            }
        }
        return Ok(out);
    }
    Err(AlgebraError::Unsupported("no squarefree norm shift found".into()))
}

pub fn is_irreducible<F: ConstField>(f: &UPoly<F>, bound: usize) -> Result<bool, AlgebraError> {
    if f.deg() < 1 {
        return Ok(false);
    }
    let (_, fs) = f.factor(bound)?;
    Ok(fs.len() == 1 && fs[0].1 == 1)
}

/// Factorization over the whole of `tower`, regardless of where the coefficients live.
pub fn factor_over(
    f: &UPoly<TowerElem>,
    tower: &Arc<Tower>,
    bound: usize,
) -> Result<(TowerElem, Vec<(UPoly<TowerElem>, u32)>), AlgebraError> {
    f.map(|c| tower.embed(c)).factor(bound)
}
