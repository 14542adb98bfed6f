//! Dense univariate polynomials over a constant field.

use std::fmt;

use crate::error::AlgebraError;
use crate::field::{ConstField, FieldElement};

/// Coefficients are stored low degree first with no trailing zeros.
#[derive(Clone, PartialEq, Debug)]
pub struct UPoly<F> {
    coeffs: Vec<F>,
}

impl<F: ConstField> UPoly<F> {
    pub fn from_coeffs(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn from_ints(cs: &[i64]) -> Self {
        Self::from_coeffs(cs.iter().map(|&c| F::from_int(c)).collect())
    }

    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    pub fn constant(c: F) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The indeterminate `x`.
    pub fn x() -> Self {
        Self::monomial(F::one(), 1)
    }

    pub fn monomial(c: F, k: usize) -> Self {
        let mut v = vec![F::zero(); k + 1];
        v[k] = c;
        Self::from_coeffs(v)
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<F> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> F {
        self.coeffs.get(k).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with `-1` for zero.
    pub fn deg(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn lc(&self) -> F {
        self.coeffs.last().cloned().unwrap_or_else(F::zero)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let v = (0..n).map(|i| self.coeff(i).add(&rhs.coeff(i))).collect();
        Self::from_coeffs(v)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let v = (0..n).map(|i| self.coeff(i).sub(&rhs.coeff(i))).collect();
        Self::from_coeffs(v)
    }

    pub fn neg(&self) -> Self {
        UPoly { coeffs: self.coeffs.iter().map(|c| c.neg()).collect() }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        Self::from_coeffs(F::poly_mul(&self.coeffs, &rhs.coeffs))
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        UPoly { coeffs: self.coeffs.iter().map(|x| x.mul(c)).collect() }
    }

    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![F::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        UPoly { coeffs: v }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn divmod(&self, d: &Self) -> Result<(Self, Self), AlgebraError> {
        let dd = d.degree().ok_or(AlgebraError::DivisionByZero)?;
        let inv_lc = d.lc().inv().ok_or(AlgebraError::DivisionByZero)?;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quo = vec![F::zero(); r.len() - dd];
        for k in (0..quo.len()).rev() {
            let c = r[k + dd].mul(&inv_lc);
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] = r[k + j].sub(&c.mul(dc));
                }
            }
            quo[k] = c;
        }
        r.truncate(dd);
        Ok((Self::from_coeffs(quo), Self::from_coeffs(r)))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divmod(d).expect("division by zero polynomial").1
    }

    pub fn exact_div(&self, d: &Self) -> Result<Self, AlgebraError> {
        let (q, r) = self.divmod(d)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(AlgebraError::InexactDivision)
        }
    }

    pub fn divides(&self, other: &Self) -> bool {
        !self.is_zero() && other.rem(self).is_zero()
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let inv = self.lc().inv().expect("nonzero leading coefficient");
        self.scale(&inv)
    }

    /// Monic gcd using the field's preferred kernel.
    pub fn gcd(&self, other: &Self) -> Self {
        F::poly_gcd(self, other)
    }

    pub fn euclid_gcd(a: &Self, b: &Self) -> Self {
        let mut a = a.clone();
        let mut b = b.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `s*a + t*b = g`, `g` monic.
    pub fn ext_gcd(a: &Self, b: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1).expect("nonzero divisor");
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.lc().inv().expect("nonzero");
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    /// Inverse of `self` modulo `m`, if coprime.
    pub fn inv_mod(&self, m: &Self) -> Option<Self> {
        F::poly_inv_mod(self, m)
    }

    pub fn derivative(&self) -> Self {
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.mul(&F::from_int(i as i64)))
            .collect();
        Self::from_coeffs(v)
    }

    pub fn eval(&self, x: &F) -> F {
        let mut acc = F::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    /// Horner evaluation at an element of any field containing `F`.
    pub fn eval_with<E: FieldElement>(&self, x: &E, lift: impl Fn(&F) -> E) -> E {
        let mut acc = x.zero_like();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(&lift(c));
        }
        acc
    }

    /// `self(g(x))`.
    pub fn compose(&self, g: &Self) -> Self {
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(g).add(&Self::constant(c.clone()));
        }
        acc
    }

    pub fn map<G: ConstField>(&self, f: impl Fn(&F) -> G) -> UPoly<G> {
        UPoly::from_coeffs(self.coeffs.iter().map(f).collect())
    }

    /// Yun's algorithm: monic `(factor, multiplicity)` pairs with pairwise
    /// coprime squarefree factors, plus the leading coefficient.
    pub fn squarefree_decomposition(&self) -> (F, Vec<(Self, u32)>) {
        if self.is_zero() {
            return (F::zero(), Vec::new());
        }
        let lc = self.lc();
        let f = self.monic();
        let mut out = Vec::new();
        if f.is_constant() {
            return (lc, out);
        }
        let fp = f.derivative();
        let c = f.gcd(&fp);
        let mut w = f.exact_div(&c).expect("gcd divides");
        let mut y = fp.exact_div(&c).expect("gcd divides");
        let mut z = y.sub(&w.derivative());
        let mut i = 1u32;
        while !w.is_constant() {
            let g = w.gcd(&z);
            if !g.is_constant() {
                out.push((g.clone(), i));
            }
            w = w.exact_div(&g).expect("gcd divides");
            y = z.exact_div(&g).expect("gcd divides");
            z = y.sub(&w.derivative());
            i += 1;
        }
        (lc, out)
    }

    pub fn squarefree_part(&self) -> Self {
        if self.is_constant() {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.exact_div(&g).expect("gcd divides").monic()
    }

    pub fn is_squarefree(&self) -> bool {
        self.is_constant() || self.gcd(&self.derivative()).is_constant()
    }

    /// Full factorization: leading coefficient and monic irreducible factors
    /// with multiplicities. Fails if a squarefree part exceeds `bound`.
    pub fn factor(&self, bound: usize) -> Result<(F, Vec<(Self, u32)>), AlgebraError> {
        let (lc, sqf) = self.squarefree_decomposition();
        let mut out = Vec::new();
        for (g, m) in sqf {
            let d = g.degree().unwrap_or(0);
            if d > bound {
                return Err(AlgebraError::DegreeBoundExceeded { degree: d, bound });
            }
            for h in F::factor_squarefree(&g)? {
                out.push((h, m));
            }
        }
        Ok((lc, out))
    }

    /// Roots in `F` with multiplicity.
    pub fn roots(&self, bound: usize) -> Result<Vec<(F, u32)>, AlgebraError> {
        let (_, fs) = self.factor(bound)?;
        Ok(fs
            .into_iter()
            .filter(|(h, _)| h.degree() == Some(1))
            .map(|(h, m)| (h.coeff(0).neg(), m))
            .collect())
    }

    /// Multiplicity of `p` (non-constant) as a factor of `self` (nonzero).
    pub fn multiplicity(&self, p: &Self) -> u32 {
        if p.is_constant() || self.is_zero() || self.gcd(p).is_constant() {
            return 0;
        }
        let mut f = self.clone();
        let mut k = 0;
        while let Ok(q) = f.exact_div(p) {
            f = q;
            k += 1;
        }
        k
    }

    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts: Vec<String> = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mon = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            let cs = format!("{c}");
            let term = if mon.is_empty() {
                paren_if_needed(&cs)
            } else if c.is_one() {
                mon
            } else if c.neg().is_one() {
                format!("-{mon}")
            } else {
                format!("{}*{mon}", paren_if_needed(&cs))
            };
            parts.push(term);
        }
        join_terms(&parts)
    }
}

pub(crate) fn paren_if_needed(s: &str) -> String {
    let inner = s.strip_prefix('-').unwrap_or(s);
    if inner.contains(['+', ' ']) || inner[..].contains('-') {
        format!("({s})")
    } else {
        s.to_string()
    }
}

pub(crate) fn join_terms(parts: &[String]) -> String {
    let mut out = String::new();
    for (k, t) in parts.iter().enumerate() {
        if k == 0 {
            out.push_str(t);
        } else if let Some(rest) = t.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(t);
        }
    }
    out
}

impl<F: ConstField> fmt::Display for UPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("x"))
    }
}
