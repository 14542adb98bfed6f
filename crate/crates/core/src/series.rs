//! Truncated Laurent series `sum c_k t^k` over a field, with tracked precision.

use std::fmt;

use h10_algebra::{FieldElement, Rational, URatFunc};

use crate::cfunc::CurveFunction;
use crate::error::{CoreError, Result};

/// Known modulo `t^(val + coeffs.len())`. A nonempty `coeffs` has a nonzero
/// leading entry; an empty one means zero to that precision.
#[derive(Clone, Debug)]
pub struct Series<R> {
    val: i64,
    coeffs: Vec<R>,
    proto: R,
}

impl<R: Coefficient> Series<R> {
    pub fn new(val: i64, coeffs: Vec<R>, proto: &R) -> Self {
        let lead = coeffs.iter().position(|c| !c.is_zero());
        match lead {
            Some(k) => Series { val: val + k as i64, coeffs: coeffs[k..].to_vec(), proto: proto.zero_like() },
            None => Series { val: val + coeffs.len() as i64, coeffs: Vec::new(), proto: proto.zero_like() },
        }
    }

    /// An exact element, truncated to `prec` terms.
    pub fn constant(c: R, prec: usize) -> Self {
        let z = c.zero_like();
        let mut cs = vec![c];
        cs.resize(prec.max(1), z.clone());
        Self::new(0, cs, &z)
    }

    /// The uniformizer `t`.
    pub fn t(proto: &R, prec: usize) -> Self {
        let mut cs = vec![proto.one_like()];
        cs.resize(prec.max(1), proto.zero_like());
        Self::new(1, cs, proto)
    }

    pub fn val(&self) -> i64 {
        self.val
    }

    pub fn abs_prec(&self) -> i64 {
        self.val + self.coeffs.len() as i64
    }

    pub fn rel_prec(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    /// Coefficient of `t^k`; `k` must lie below the absolute precision.
    pub fn coeff(&self, k: i64) -> R {
        if k < self.val {
            return self.proto.zero_like();
        }
        self.coeffs[(k - self.val) as usize].clone()
    }

    pub fn order(&self) -> Result<i64> {
        if self.coeffs.is_empty() {
            Err(CoreError::PrecisionExhausted)
        } else {
            Ok(self.val)
        }
    }

    pub fn leading(&self) -> Result<&R> {
        self.coeffs.first().ok_or(CoreError::PrecisionExhausted)
    }

    pub fn add(&self, o: &Self) -> Self {
        let hi = self.abs_prec().min(o.abs_prec());
        let lo = self.val.min(o.val).min(hi);
        let cs = (lo..hi).map(|k| self.coeff(k).add(&o.coeff(k))).collect();
        Self::new(lo, cs, &self.proto)
    }

    pub fn neg(&self) -> Self {
        Series { val: self.val, coeffs: self.coeffs.iter().map(|c| c.neg()).collect(), proto: self.proto.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.coeffs.is_empty() || o.coeffs.is_empty() {
            let p = (self.val + o.abs_prec()).min(o.val + self.abs_prec());
            return Self::new(p, Vec::new(), &self.proto);
        }
        let n = self.coeffs.len().min(o.coeffs.len());
        let cs = (0..n)
            .map(|k| {
                (0..=k).fold(self.proto.zero_like(), |acc, i| acc.add(&self.coeffs[i].mul(&o.coeffs[k - i])))
            })
            .collect();
        Self::new(self.val + o.val, cs, &self.proto)
    }

    pub fn scale(&self, c: &R) -> Self {
        Self::new(self.val, self.coeffs.iter().map(|x| x.mul(c)).collect(), &self.proto)
    }

    pub fn inv(&self) -> Result<Self> {
        let a0 = self.leading()?;
        let b0 = a0.inv().expect("nonzero leading coefficient");
        let n = self.coeffs.len();
        let mut bs: Vec<R> = vec![b0.clone()];
        for k in 1..n {
            let s = (1..=k).fold(self.proto.zero_like(), |acc, j| acc.add(&self.coeffs[j].mul(&bs[k - j])));
            bs.push(s.mul(&b0).neg());
        }
        Ok(Self::new(-self.val, bs, &self.proto))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    /// `sqrt(1 + u)` for `u` of positive order, by the binomial series.
    pub fn sqrt_one_plus(u: &Self, prec: usize) -> Result<Self> {
        if !u.coeffs.is_empty() && u.val < 1 {
            return Err(CoreError::NotApplicable("sqrt(1 + u) needs ord u > 0".into()));
        }
        let one = Self::constant(u.proto.one_like(), prec);
        let mut acc = one.clone();
        let mut pow = one;
        let mut binom = Rational::from_integer(1.into());
        let half = Rational::new(1.into(), 2.into());
        for k in 1..prec as i64 {
            binom = binom * (&half - Rational::from_integer((k - 1).into())) / Rational::from_integer(k.into());
            pow = pow.mul(u);
            let c = u.proto.rat_like(&binom);
            acc = acc.add(&pow.scale(&c));
        }
        Ok(acc)
    }
}

/// Coefficient rings that contain the rationals.
pub trait Coefficient: FieldElement {
    /// The rational `q` in the ring of `self`.
    fn rat_like(&self, q: &Rational) -> Self;
}

impl Coefficient for Rational {
    fn rat_like(&self, q: &Rational) -> Self {
        q.clone()
    }
}

impl Coefficient for CurveFunction<Rational> {
    fn rat_like(&self, q: &Rational) -> Self {
        CurveFunction::constant(self.ctx(), q.clone())
    }
}

/// A polynomial in `t` known to `prec` terms past its lowest one.
pub fn poly_series<R: Coefficient>(p: &h10_algebra::UPoly<Rational>, proto: &R, prec: usize) -> Series<R> {
    let mut cs: Vec<R> = p.coeffs().iter().map(|c| proto.rat_like(c)).collect();
    let lead = cs.iter().position(|c| !c.is_zero()).unwrap_or(0);
    cs.resize(cs.len().max(lead + prec), proto.zero_like());
    Series::new(0, cs, proto).truncate(prec)
}

/// Expansion of `u(t)` with coefficients lifted into the ring of `proto`.
pub fn urat_series<R: Coefficient>(u: &URatFunc<Rational>, proto: &R, prec: usize) -> Result<Series<R>> {
    if u.is_zero() {
        return Err(CoreError::NotApplicable("series of zero".into()));
    }
    poly_series(u.num(), proto, prec).div(&poly_series(u.den(), proto, prec))
}

impl<R: Coefficient> Series<R> {
    /// Applies `f` to every coefficient.
    pub fn map<S: Coefficient>(&self, proto: &S, f: impl Fn(&R) -> S) -> Series<S> {
        Series::new(self.val, self.coeffs.iter().map(f).collect(), proto)
    }

    /// Keeps at most `n` significant terms.
    pub fn truncate(&self, n: usize) -> Self {
        let k = self.coeffs.len().min(n);
        Series { val: self.val, coeffs: self.coeffs[..k].to_vec(), proto: self.proto.clone() }
    }
}

impl<R: Coefficient> fmt::Display for Series<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                write!(f, "({c})*t^{} + ", self.val + i as i64)?;
            }
        }
        write!(f, "O(t^{})", self.abs_prec())
    }
}
