//! Heuristic multivariate gcd over the integers (evaluation at a large integer
//! and ξ-adic reconstruction), checked by trial division.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::field::Rational;
use crate::modgcd;
use crate::mpoly::{MPoly, Monomial};

type P = MPoly<Rational>;

fn int(c: &Rational) -> &BigInt {
    debug_assert!(c.is_integer());
    c.numer()
}

/// Scales `p` to a primitive integer polynomial with positive leading coefficient.
fn primitive(p: &P) -> (P, Rational) {
    let mut den = BigInt::one();
    for (_, c) in p.terms() {
        den = den.lcm(c.denom());
    }
    let mut g = BigInt::zero();
    for (_, c) in p.terms() {
        g = g.gcd(&(c.numer() * (&den / c.denom())));
    }
    if p.lc().is_negative() {
        g = -g;
    }
    let s = Rational::new(den, g);
    (p.scale(&s), s)
}

fn content(p: &P) -> BigInt {
    p.terms().fold(BigInt::zero(), |g, (_, c)| g.gcd(int(c)))
}

fn max_norm(p: &P) -> BigInt {
    p.terms().map(|(_, c)| int(c).abs()).max().unwrap_or_default()
}

fn eval_at(p: &P, v: u32, xi: &BigInt) -> P {
    let mut pows: Vec<BigInt> = vec![BigInt::one()];
    let mut out = P::zero();
    for (m, c) in p.terms() {
        let e = m.exp(v) as usize;
        while pows.len() <= e {
            let n = pows.last().unwrap() * xi;
            pows.push(n);
        }
        out.add_term(m.without(v), Rational::from_integer(int(c) * &pows[e]));
    }
    out
}

fn reconstruct(g: &P, v: u32, xi: &BigInt) -> P {
    let mut out = P::zero();
    let mut rest = g.clone();
    let mut i = 0u32;
    while !rest.is_zero() {
        let mut digit = P::zero();
        let mut next = P::zero();
        for (m, c) in rest.terms() {
            let d = crate::zp::symmetric(int(c), xi);
            let q = (int(c) - &d) / xi;
            if !d.is_zero() {
                digit.add_term(m.clone(), Rational::from_integer(d));
            }
            if !q.is_zero() {
                next.add_term(m.clone(), Rational::from_integer(q));
            }
        }
        for (m, c) in digit.terms() {
            out.add_term(m.mul(&Monomial::var(v, i)), c.clone());
        }
        rest = next;
        i += 1;
    }
    out
}

fn divides(g: &P, a: &P) -> bool {
    a.exact_div(g).is_some()
}

/// Full integer gcd (content included) of integer polynomials.
fn zgcd(a: &P, b: &P, depth: usize) -> Option<P> {
    if a.is_zero() {
        return Some(b.clone());
    }
    if b.is_zero() {
        return Some(a.clone());
    }
    let ca = content(a);
    let cb = content(b);
    let c = Rational::from_integer(ca.gcd(&cb));
    let pa = a.scale(&Rational::from_integer(ca).recip());
    let pb = b.scale(&Rational::from_integer(cb).recip());
    Some(heu(&pa, &pb, depth)?.scale(&c))
}

/// Primitive gcd of primitive integer polynomials, or `None` if the heuristic gives up.
fn heu(a: &P, b: &P, depth: usize) -> Option<P> {
    if a.is_constant() || b.is_constant() {
        return Some(P::one());
    }
    let mut vs = a.variables();
    vs.extend(b.variables());
    vs.sort_unstable();
    vs.dedup();
    if vs.len() == 1 {
        let v = vs[0];
        let g = modgcd::rational_gcd(&a.to_upoly(v)?, &b.to_upoly(v)?);
        return Some(primitive(&MPoly::from_upoly(&g, v)).0);
    }
    if depth > 8 {
        return None;
    }
    let v = *vs.last().unwrap();
    let mut xi = BigInt::from(2) * max_norm(a).min(max_norm(b)) + BigInt::from(29);
    for _ in 0..6 {
        let (ea, eb) = (eval_at(a, v, &xi), eval_at(b, v, &xi));
        if !ea.is_zero() && !eb.is_zero() {
            if let Some(gamma) = zgcd(&ea, &eb, depth + 1) {
                let g = reconstruct(&gamma, v, &xi);
                if !g.is_zero() {
                    let g = primitive(&g).0;
                    if divides(&g, a) && divides(&g, b) {
                        return Some(g);
                    }
                }
            }
        }
        xi = xi * BigInt::from(73794) / BigInt::from(27011);
    }
    None
}

/// Monic gcd of two nonzero polynomials, or `None` when the heuristic fails.
pub fn heuristic_gcd(a: &P, b: &P) -> Option<P> {
    let (pa, _) = primitive(a);
    let (pb, _) = primitive(b);
    heu(&pa, &pb, 0).map(|g| g.monic())
}
