//! Integer-polynomial kernels behind the rational `ConstField` hooks:
//! Karatsuba multiplication and a multi-prime modular gcd.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::field::Rational;
use crate::upoly::UPoly;
use crate::zp::{self, PolyP};

pub type ZPoly = Vec<BigInt>;

pub fn ztrim(mut v: ZPoly) -> ZPoly {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

pub fn zcontent(v: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for c in v {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Primitive part with positive leading coefficient.
pub fn zprimitive(v: &[BigInt]) -> ZPoly {
    let v = ztrim(v.to_vec());
    if v.is_empty() {
        return v;
    }
    let mut g = zcontent(&v);
    if v.last().unwrap().is_negative() {
        g = -g;
    }
    v.into_iter().map(|c| c / &g).collect()
}

/// Clears denominators: returns the integer polynomial and the factor `s`
/// with `poly = s * result`.
pub fn to_zpoly(p: &UPoly<Rational>) -> (ZPoly, Rational) {
    let mut l = BigInt::one();
    for c in p.coeffs() {
        l = l.lcm(c.denom());
    }
    let v: ZPoly = p.coeffs().iter().map(|c| (c * &l).to_integer()).collect();
    (v, Rational::new(BigInt::one(), l))
}

pub fn from_zpoly(v: &[BigInt]) -> UPoly<Rational> {
    UPoly::from_coeffs(v.iter().map(|c| Rational::from_integer(c.clone())).collect())
}

fn school_z(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn zadd_into(acc: &mut ZPoly, v: &[BigInt], shift: usize) {
    if acc.len() < v.len() + shift {
        acc.resize(v.len() + shift, BigInt::zero());
    }
    for (i, c) in v.iter().enumerate() {
        acc[i + shift] += c;
    }
}

pub fn zmul(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    const CUTOFF: usize = 24;
    if a.len() < CUTOFF || b.len() < CUTOFF {
        return school_z(a, b);
    }
    let h = a.len().max(b.len()) / 2;
    let (a0, a1) = a.split_at(h.min(a.len()));
    let (b0, b1) = b.split_at(h.min(b.len()));
    let z0 = zmul(a0, b0);
    let z2 = zmul(a1, b1);
    let mut sa = a0.to_vec();
    zadd_into(&mut sa, a1, 0);
    let mut sb = b0.to_vec();
    zadd_into(&mut sb, b1, 0);
    let mut z1 = zmul(&sa, &sb);
    for (i, c) in z0.iter().enumerate() {
        z1[i] -= c;
    }
    for (i, c) in z2.iter().enumerate() {
        z1[i] -= c;
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    zadd_into(&mut out, &z0, 0);
    zadd_into(&mut out, &z1, h);
    zadd_into(&mut out, &z2, 2 * h);
    out.truncate(a.len() + b.len() - 1);
    out
}

pub fn rational_poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    if a.len() * b.len() < 64 {
        return crate::field::schoolbook_mul(a, b);
    }
    let (za, sa) = to_zpoly(&UPoly::from_coeffs(a.to_vec()));
    let (zb, sb) = to_zpoly(&UPoly::from_coeffs(b.to_vec()));
    let s = sa * sb;
    let pa = pad_to(za, a.len());
    let pb = pad_to(zb, b.len());
    zmul(&pa, &pb)
        .into_iter()
        .map(|c| Rational::from_integer(c) * &s)
        .collect()
}

fn pad_to(mut v: ZPoly, n: usize) -> ZPoly {
    v.resize(n, BigInt::zero());
    v
}

/// Exact quotient `a / b` over the integers, if it exists.
pub fn zdiv_exact(a: &[BigInt], b: &[BigInt]) -> Option<ZPoly> {
    let b = ztrim(b.to_vec());
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut r = ztrim(a.to_vec());
    if r.is_empty() {
        return Some(Vec::new());
    }
    if r.len() < b.len() {
        return None;
    }
    let db = b.len() - 1;
    let lb = b.last().unwrap().clone();
    let mut q = vec![BigInt::zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let top = &r[k + db];
        if top.is_zero() {
            continue;
        }
        let (c, rem) = top.div_rem(&lb);
        if !rem.is_zero() {
            return None;
        }
        for (j, bc) in b.iter().enumerate() {
            r[k + j] -= &c * bc;
        }
        q[k] = c;
    }
    if r.iter().all(|c| c.is_zero()) {
        Some(ztrim(q))
    } else {
        None
    }
}

/// Monic gcd over the rationals by Chinese remaindering of modular images,
/// with trial division as the termination test.
pub fn rational_gcd(a: &UPoly<Rational>, b: &UPoly<Rational>) -> UPoly<Rational> {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return UPoly::one();
    }
    if a.deg() + b.deg() < 6 {
        return UPoly::euclid_gcd(a, b);
    }
    let za = zprimitive(&to_zpoly(a).0);
    let zb = zprimitive(&to_zpoly(b).0);
    from_zpoly(&zgcd(&za, &zb)).monic()
}

/// Primitive gcd of two nonzero primitive integer polynomials.
pub fn zgcd(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let la = a.last().unwrap();
    let lb = b.last().unwrap();
    let gamma = la.gcd(lb);
    let mut image: Option<(ZPoly, BigInt, i64)> = None;
    for p in zp::primes_below(1u64 << 62) {
        if zp::bigint_mod(la, p) == 0 || zp::bigint_mod(lb, p) == 0 {
            continue;
        }
        let ap = PolyP::from_bigints(a, p);
        let bp = PolyP::from_bigints(b, p);
        let g = ap.gcd(&bp);
        if g.deg() == 0 {
            return vec![BigInt::one()];
        }
        let g = g.scale(zp::bigint_mod(&gamma, p));
        let d = g.deg();
        match &mut image {
            Some((_, _, dd)) if d > *dd => continue,
            Some((img, m, dd)) if d == *dd => {
                for (i, c) in img.iter_mut().enumerate() {
                    *c = zp::crt(c, m, g.c[i], p);
                }
                *m *= BigInt::from(p);
            }
            _ => {
                image = Some((g.to_bigints(), BigInt::from(p), d));
            }
        }
        let (img, m, _) = image.as_ref().unwrap();
        let cand = zprimitive(&img.iter().map(|c| zp::symmetric(c, m)).collect::<Vec<_>>());
        if zdiv_exact(a, &cand).is_some() && zdiv_exact(b, &cand).is_some() {
            return cand;
        }
    }
    unreachable!("prime supply exhausted")
}

/// Inverse of `a` modulo `m` from images modulo word-size primes, by rational
/// reconstruction; every candidate is checked exactly before it is returned.
pub fn rational_inv_mod(a: &UPoly<Rational>, m: &UPoly<Rational>) -> Option<UPoly<Rational>> {
    let a = a.rem(m);
    if a.is_zero() {
        return None;
    }
    if m.deg() < 8 {
        return ext_inv_mod(&a, m);
    }
    let (za, sa) = to_zpoly(&a);
    let (zm, _) = to_zpoly(m);
    let n = m.deg() as usize;
    let lm = zm.last().unwrap().clone();
    let mut acc: Vec<BigInt> = vec![BigInt::zero(); n];
    let mut modulus = BigInt::one();
    let (mut good, mut bad) = (0usize, 0usize);
    let mut next_check = 1usize;
    for p in zp::primes_below(1u64 << 62) {
        if zp::bigint_mod(&lm, p) == 0 {
            continue;
        }
        let ap = PolyP::from_bigints(&za, p);
        let mp = PolyP::from_bigints(&zm, p);
        let (g, s, _) = ap.ext_gcd(&mp);
        if g.deg() != 0 {
            bad += 1;
            if bad > 4 && good == 0 {
                return ext_inv_mod(&a, m);
            }
            continue;
        }
        for (i, c) in acc.iter_mut().enumerate() {
            let v = if (i as i64) <= s.deg() { s.c[i] } else { 0 };
            *c = zp::crt(c, &modulus, v, p);
        }
        modulus *= BigInt::from(p);
        good += 1;
        if good < next_check {
            continue;
        }
        next_check = good + good.div_ceil(4).max(1);
        let cand: Option<Vec<Rational>> = acc.iter().map(|c| zp::rational_reconstruct(c, &modulus)).collect();
        let Some(cand) = cand else { continue };
        let inv_a = UPoly::from_coeffs(cand);
        if inv_a.mul(&from_zpoly(&za)).rem(m).is_one() {
            return Some(inv_a.scale(&sa.recip()));
        }
    }
    unreachable!("prime supply exhausted")
}

fn ext_inv_mod(a: &UPoly<Rational>, m: &UPoly<Rational>) -> Option<UPoly<Rational>> {
    let (g, s, _) = UPoly::ext_gcd(a, m);
    g.is_one().then(|| s.rem(m))
}
