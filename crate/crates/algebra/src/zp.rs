//! Word-sized prime fields and dense polynomials over them.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::Rng;

#[inline]
pub fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub fn addmod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

#[inline]
pub fn submod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

pub fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

pub fn invmod(a: u64, p: u64) -> Option<u64> {
    if a % p == 0 {
        None
    } else {
        Some(powmod(a, p - 2, p))
    }
}

/// A square root of `a` modulo the odd prime `p` (Tonelli-Shanks).
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if legendre(a, p) != 1 {
        return None;
    }
    let (mut q, mut s) = (p - 1, 0u32);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let z = (2..p).find(|&z| legendre(z, p) == -1)?;
    let mut m = s;
    let mut c = powmod(z, q, p);
    let mut t = powmod(a, q, p);
    let mut r = powmod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mulmod(t2, t2, p);
            i += 1;
        }
        let b = powmod(c, 1 << (m - i - 1), p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    Some(r)
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % sp == 0 {
            return n == sp;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Primes strictly below `start`, descending.
pub fn primes_below(start: u64) -> impl Iterator<Item = u64> {
    let mut n = start;
    std::iter::from_fn(move || {
        while n > 2 {
            n -= 1;
            if is_prime_u64(n) {
                return Some(n);
            }
        }
        None
    })
}

/// Odd primes ascending from 3.
pub fn small_primes() -> impl Iterator<Item = u64> {
    (3u64..).filter(|&n| is_prime_u64(n))
}

pub fn bigint_mod(a: &BigInt, p: u64) -> u64 {
    let r = a.mod_floor(&BigInt::from(p));
    r.to_u64().expect("reduced residue fits")
}

/// Symmetric lift of a residue modulo `m`.
pub fn symmetric(a: &BigInt, m: &BigInt) -> BigInt {
    let r = a.mod_floor(m);
    let half: BigInt = m >> 1;
    if r > half {
        r - m
    } else {
        r
    }
}

/// Legendre symbol of `a` modulo odd prime `p`, as -1, 0 or 1.
pub fn legendre(a: u64, p: u64) -> i32 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if powmod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Dense polynomial over `Z/p`, low degree first, trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyP {
    pub p: u64,
    pub c: Vec<u64>,
}

impl PolyP {
    pub fn new(p: u64, mut c: Vec<u64>) -> Self {
        for x in c.iter_mut() {
            *x %= p;
        }
        while c.last() == Some(&0) {
            c.pop();
        }
        PolyP { p, c }
    }

    pub fn from_bigints(cs: &[BigInt], p: u64) -> Self {
        Self::new(p, cs.iter().map(|x| bigint_mod(x, p)).collect())
    }

    pub fn zero(p: u64) -> Self {
        PolyP { p, c: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        PolyP { p, c: vec![1] }
    }

    pub fn x(p: u64) -> Self {
        PolyP { p, c: vec![0, 1] }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn deg(&self) -> i64 {
        self.c.len() as i64 - 1
    }

    pub fn lc(&self) -> u64 {
        *self.c.last().unwrap_or(&0)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let v = (0..n)
            .map(|i| addmod(*self.c.get(i).unwrap_or(&0), *o.c.get(i).unwrap_or(&0), self.p))
            .collect();
        Self::new(self.p, v)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let v = (0..n)
            .map(|i| submod(*self.c.get(i).unwrap_or(&0), *o.c.get(i).unwrap_or(&0), self.p))
            .collect();
        Self::new(self.p, v)
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.p);
        }
        let p = self.p;
        let mut acc = vec![0u128; self.c.len() + o.c.len() - 1];
        let pp = p as u128;
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                acc[i + j] = (acc[i + j] + a as u128 * b as u128) % pp;
            }
        }
        Self::new(p, acc.into_iter().map(|x| x as u64).collect())
    }

    pub fn scale(&self, k: u64) -> Self {
        Self::new(self.p, self.c.iter().map(|&x| mulmod(x, k, self.p)).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(invmod(self.lc(), self.p).expect("unit"))
    }

    pub fn divmod(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial mod p");
        let p = self.p;
        let dd = d.c.len() - 1;
        if self.c.len() <= dd {
            return (Self::zero(p), self.clone());
        }
        let inv = invmod(d.lc(), p).expect("unit");
        let mut r = self.c.clone();
        let mut q = vec![0u64; r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = mulmod(r[k + dd], inv, p);
            if c != 0 {
                for (j, &dc) in d.c.iter().enumerate() {
                    r[k + j] = submod(r[k + j], mulmod(c, dc, p), p);
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Self::new(p, q), Self::new(p, r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divmod(d).1
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s*self + t*o = g` monic.
    pub fn ext_gcd(&self, o: &Self) -> (Self, Self, Self) {
        let p = self.p;
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Self::one(p), Self::zero(p));
        let (mut t0, mut t1) = (Self::zero(p), Self::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        let inv = invmod(r0.lc(), p).expect("unit");
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    pub fn derivative(&self) -> Self {
        let v = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mulmod(c, i as u64 % self.p, self.p))
            .collect();
        Self::new(self.p, v)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let mut acc = 0;
        for &c in self.c.iter().rev() {
            acc = addmod(mulmod(acc, x, self.p), c, self.p);
        }
        acc
    }

    /// `self^e mod m` for a big exponent.
    pub fn powmod_big(&self, e: &BigUint, m: &Self) -> Self {
        let mut acc = Self::one(self.p).rem(m);
        let base = self.rem(m);
        for i in (0..e.bits()).rev() {
            acc = acc.mul(&acc).rem(m);
            if e.bit(i) {
                acc = acc.mul(&base).rem(m);
            }
        }
        acc
    }

    pub fn to_bigints(&self) -> Vec<BigInt> {
        self.c.iter().map(|&x| BigInt::from(x)).collect()
    }
}

/// Distinct-degree then equal-degree factorization of a monic squarefree
/// polynomial modulo an odd prime.
pub fn factor_squarefree_mod_p<R: Rng>(f: &PolyP, rng: &mut R) -> Vec<PolyP> {
    let p = f.p;
    let mut out = Vec::new();
    let mut f = f.monic();
    let x = PolyP::x(p);
    let mut h = x.clone();
    let mut i = 0u32;
    let pb = BigUint::from(p);
    while f.deg() >= 2 * (i as i64 + 1) {
        i += 1;
        h = h.powmod_big(&pb, &f);
        let g = h.sub(&x).gcd(&f);
        if g.deg() > 0 {
            equal_degree(&g, i as usize, rng, &mut out);
            f = f.divmod(&g).0;
            h = h.rem(&f);
        }
    }
    if f.deg() > 0 {
        out.push(f.monic());
    }
    out
}

/// Count of irreducible factors via distinct-degree splitting only.
pub fn count_factors_mod_p(f: &PolyP) -> usize {
    let p = f.p;
    let mut f = f.monic();
    let x = PolyP::x(p);
    let mut h = x.clone();
    let mut i = 0i64;
    let mut n = 0usize;
    let pb = BigUint::from(p);
    while f.deg() >= 2 * (i + 1) {
        i += 1;
        h = h.powmod_big(&pb, &f);
        let g = h.sub(&x).gcd(&f);
        if g.deg() > 0 {
            n += (g.deg() / i) as usize;
            f = f.divmod(&g).0;
            h = h.rem(&f);
        }
    }
    if f.deg() > 0 {
        n += 1;
    }
    n
}

fn equal_degree<R: Rng>(g: &PolyP, d: usize, rng: &mut R, out: &mut Vec<PolyP>) {
    let p = g.p;
    let n = g.deg() as usize;
    if n == d {
        out.push(g.monic());
        return;
    }
    let e: BigUint = (BigUint::from(p).pow(d as u32) - 1u32) >> 1;
    loop {
        let a = PolyP::new(p, (0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.deg() < 1 {
            continue;
        }
        let b = a.powmod_big(&e, g).sub(&PolyP::one(p));
        let h = b.gcd(g);
        if h.deg() > 0 && h.deg() < g.deg() {
            equal_degree(&h, d, rng, out);
            equal_degree(&g.divmod(&h).0, d, rng, out);
            return;
        }
    }
}

/// Chinese remaindering of `a mod m` with `b mod p` into a residue mod `m*p`.
pub fn crt(a: &BigInt, m: &BigInt, b: u64, p: u64) -> BigInt {
    let am = bigint_mod(a, p);
    let minv = invmod(bigint_mod(m, p), p).expect("coprime moduli");
    let t = mulmod(submod(b, am, p), minv, p);
    a + m * BigInt::from(t)
}

/// Rational `r / s` with `r = a s mod m` and `|r|, s <= sqrt(m / 2)`, if any.
pub fn rational_reconstruct(a: &BigInt, m: &BigInt) -> Option<crate::field::Rational> {
    use num_traits::{One, Signed, Zero};
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut s0, mut s1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let s2 = &s0 - &q * &s1;
        r0 = std::mem::replace(&mut r1, r2);
        s0 = std::mem::replace(&mut s1, s2);
    }
    if s1.is_zero() || s1.abs() > bound || !r1.gcd(&s1).is_one() {
        return None;
    }
    Some(crate::field::Rational::new(r1, s1))
}
