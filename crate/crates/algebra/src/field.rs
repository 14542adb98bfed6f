//! Element traits shared by every coefficient domain.
//!
//! [`FieldElement`] is the operational interface the group law and series code
//! need. It takes `&self` everywhere so context-carrying types (curve function
//! fields, the tower `L`) can implement it. [`ConstField`] adds context-free
//! constructors plus hooks that let `Rational` swap in faster polynomial
//! kernels.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::AlgebraError;
use crate::mpoly::MPoly;
use crate::upoly::UPoly;

pub type Rational = BigRational;

pub trait FieldElement: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn int_like(&self, n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `None` exactly when `self` is zero.
    fn inv(&self) -> Option<Self>;

    fn is_one(&self) -> bool {
        self.sub(&self.one_like()).is_zero()
    }

    fn div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self.mul(&r))
    }

    fn square(&self) -> Self {
        self.mul(self)
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc
    }

    /// Integer power; negative exponents need an invertible base.
    fn powi(&self, e: i64) -> Option<Self> {
        if e >= 0 {
            Some(self.pow(e as u64))
        } else {
            self.inv().map(|i| i.pow(e.unsigned_abs()))
        }
    }
}

/// A constant field: characteristic zero, elements constructible without context.
pub trait ConstField: FieldElement + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: i64) -> Self;
    fn from_rational(q: &Rational) -> Self;

    /// Square root inside this field, if one exists.
    fn sqrt(&self) -> Option<Self>;

    /// Dense product of coefficient slices (low degree first).
    fn poly_mul(a: &[Self], b: &[Self]) -> Vec<Self> {
        schoolbook_mul(a, b)
    }

    /// Monic gcd. The default is the Euclidean algorithm.
    fn poly_gcd(a: &UPoly<Self>, b: &UPoly<Self>) -> UPoly<Self> {
        UPoly::euclid_gcd(a, b)
    }

    /// Inverse of `a` modulo `m`, if they are coprime.
    fn poly_inv_mod(a: &UPoly<Self>, m: &UPoly<Self>) -> Option<UPoly<Self>> {
        let (g, s, _) = UPoly::ext_gcd(&a.rem(m), m);
        g.is_one().then(|| s.rem(m))
    }

    /// Monic irreducible factors of a squarefree polynomial of positive degree.
    fn factor_squarefree(p: &UPoly<Self>) -> Result<Vec<UPoly<Self>>, AlgebraError>;

    /// Fast multivariate gcd, if the field has one; `None` falls back to
    /// primitive remainder sequences.
    fn mpoly_gcd(_a: &MPoly<Self>, _b: &MPoly<Self>) -> Option<MPoly<Self>> {
        None
    }
}

pub(crate) fn schoolbook_mul<F: FieldElement + ConstField>(a: &[F], b: &[F]) -> Vec<F> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![F::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    out
}

impl FieldElement for Rational {
    fn zero_like(&self) -> Self {
        <Rational as Zero>::zero()
    }
    fn one_like(&self) -> Self {
        <Rational as One>::one()
    }
    fn int_like(&self, n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

impl ConstField for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_int(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn sqrt(&self) -> Option<Self> {
        rational_sqrt(self)
    }
    fn poly_mul(a: &[Self], b: &[Self]) -> Vec<Self> {
        crate::modgcd::rational_poly_mul(a, b)
    }
    fn poly_gcd(a: &UPoly<Self>, b: &UPoly<Self>) -> UPoly<Self> {
        crate::modgcd::rational_gcd(a, b)
    }
    fn poly_inv_mod(a: &UPoly<Self>, m: &UPoly<Self>) -> Option<UPoly<Self>> {
        crate::modgcd::rational_inv_mod(a, m)
    }
    fn factor_squarefree(p: &UPoly<Self>) -> Result<Vec<UPoly<Self>>, AlgebraError> {
        crate::factor::zassenhaus(p)
    }
    fn mpoly_gcd(a: &MPoly<Self>, b: &MPoly<Self>) -> Option<MPoly<Self>> {
        crate::heugcd::heuristic_gcd(a, b)
    }
}

/// Exact square root of a rational number.
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = int_sqrt_exact(q.numer())?;
    let d = int_sqrt_exact(q.denom())?;
    Some(Rational::new(n, d))
}

pub fn int_sqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn qq(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}
