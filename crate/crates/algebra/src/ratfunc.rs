//! Rational functions, multivariate and univariate, kept in lowest terms with
//! a monic denominator.

use std::fmt;

use crate::error::AlgebraError;
use crate::field::{ConstField, FieldElement};
use crate::mgcd;
use crate::mpoly::{MPoly, VarSet};
use crate::upoly::UPoly;

#[derive(Clone, PartialEq, Debug)]
pub struct RatFunc<F> {
    num: MPoly<F>,
    den: MPoly<F>,
}

impl<F: ConstField> RatFunc<F> {
    pub fn new(num: MPoly<F>, den: MPoly<F>) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: MPoly<F>, den: MPoly<F>) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = mgcd::gcd(&num, &den);
            if g.is_one() {
                (num, den)
            } else {
                (num.exact_div(&g).unwrap(), den.exact_div(&g).unwrap())
            }
        };
        let l = den.lc().inv().unwrap();
        RatFunc { num: num.scale(&l), den: den.scale(&l) }
    }

    /// Skips the gcd: the caller guarantees `num` and `den` are coprime.
    pub fn from_coprime(num: MPoly<F>, den: MPoly<F>) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let l = den.lc().inv().unwrap();
        Ok(RatFunc { num: num.scale(&l), den: den.scale(&l) })
    }

    pub fn from_poly(p: MPoly<F>) -> Self {
        RatFunc { num: p, den: MPoly::one() }
    }

    pub fn zero() -> Self {
        Self::from_poly(MPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(MPoly::one())
    }

    pub fn constant(c: F) -> Self {
        Self::from_poly(MPoly::constant(c))
    }

    pub fn var(v: u32) -> Self {
        Self::from_poly(MPoly::var(v))
    }

    pub fn num(&self) -> &MPoly<F> {
        &self.num
    }

    pub fn den(&self) -> &MPoly<F> {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn constant_value(&self) -> Option<F> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn map<G: ConstField>(&self, f: impl Fn(&F) -> G + Copy) -> RatFunc<G> {
        RatFunc::reduce(self.num.map(f), self.den.map(f))
    }

    /// Substitutes a rational function for a variable.
    pub fn substitute(&self, v: u32, q: &RatFunc<F>) -> RatFunc<F> {
        let sub = |p: &MPoly<F>| -> RatFunc<F> {
            let cs = p.coeffs_in(v);
            let mut acc = RatFunc::zero();
            for c in cs.iter().rev() {
                acc = acc.mul(q).add(&RatFunc::from_poly(c.clone()));
            }
            acc
        };
        sub(&self.num).div(&sub(&self.den)).expect("substitution keeps denominator nonzero")
    }

    /// Evaluates at a point; `None` on a pole or indeterminate form.
    pub fn eval_with<E: FieldElement>(
        &self,
        vals: &dyn Fn(u32) -> E,
        lift: &dyn Fn(&F) -> E,
        zero: &E,
    ) -> Option<E> {
        let n = self.num.eval_with(vals, lift, zero);
        let d = self.den.eval_with(vals, lift, zero);
        n.div(&d)
    }

    pub fn derivative(&self, v: u32) -> Self {
        let n = self.num.derivative(v).mul(&self.den).sub(&self.num.mul(&self.den.derivative(v)));
        Self::reduce(n, self.den.square())
    }

    pub fn render(&self, names: &VarSet) -> String {
        if self.den.is_one() {
            self.num.render(names)
        } else {
            format!("({})/({})", self.num.render(names), self.den.render(names))
        }
    }
}

impl<F: ConstField> fmt::Display for RatFunc<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl<F: ConstField> FieldElement for RatFunc<F> {
    fn zero_like(&self) -> Self {
        Self::zero()
    }
    fn one_like(&self) -> Self {
        Self::one()
    }
    fn int_like(&self, n: i64) -> Self {
        Self::constant(F::from_int(n))
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }
    fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Self::reduce(self.num.add(&o.num), self.den.clone());
        }
        if self.den.is_one() {
            return RatFunc { num: self.num.mul(&o.den).add(&o.num), den: o.den.clone() };
        }
        if o.den.is_one() {
            return RatFunc { num: o.num.mul(&self.den).add(&self.num), den: self.den.clone() };
        }
        let g = mgcd::gcd(&self.den, &o.den);
        let a = self.den.exact_div(&g).unwrap();
        let b = o.den.exact_div(&g).unwrap();
        let num = self.num.mul(&b).add(&o.num.mul(&a));
        Self::reduce(num, a.mul(&o.den))
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        if self.den.is_one() && o.den.is_one() {
            return RatFunc { num: self.num.mul(&o.num), den: MPoly::one() };
        }
        let g1 = mgcd::gcd(&self.num, &o.den);
        let g2 = mgcd::gcd(&o.num, &self.den);
        let n1 = self.num.exact_div(&g1).unwrap();
        let d2 = o.den.exact_div(&g1).unwrap();
        let n2 = o.num.exact_div(&g2).unwrap();
        let d1 = self.den.exact_div(&g2).unwrap();
        let num = n1.mul(&n2);
        let den = d1.mul(&d2);
        if num.is_zero() {
            return Self::zero();
        }
        let l = den.lc().inv().unwrap();
        RatFunc { num: num.scale(&l), den: den.scale(&l) }
    }
    fn neg(&self) -> Self {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }
    fn inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            return None;
        }
        let l = self.num.lc().inv().unwrap();
        Some(RatFunc { num: self.den.scale(&l), den: self.num.scale(&l) })
    }
}

/// Univariate rational function.
#[derive(Clone, PartialEq, Debug)]
pub struct URatFunc<F> {
    num: UPoly<F>,
    den: UPoly<F>,
}

impl<F: ConstField> URatFunc<F> {
    pub fn new(num: UPoly<F>, den: UPoly<F>) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: UPoly<F>, den: UPoly<F>) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g).unwrap(), den.exact_div(&g).unwrap())
        };
        let l = den.lc().inv().unwrap();
        URatFunc { num: num.scale(&l), den: den.scale(&l) }
    }

    /// Skips the gcd: the caller guarantees `num` and `den` are coprime.
    pub fn from_coprime(num: UPoly<F>, den: UPoly<F>) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let l = den.lc().inv().unwrap();
        Ok(URatFunc { num: num.scale(&l), den: den.scale(&l) })
    }

    pub fn from_poly(p: UPoly<F>) -> Self {
        URatFunc { num: p, den: UPoly::one() }
    }

    pub fn zero() -> Self {
        Self::from_poly(UPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(UPoly::one())
    }

    pub fn constant(c: F) -> Self {
        Self::from_poly(UPoly::constant(c))
    }

    pub fn x() -> Self {
        Self::from_poly(UPoly::x())
    }

    pub fn num(&self) -> &UPoly<F> {
        &self.num
    }

    pub fn den(&self) -> &UPoly<F> {
        &self.den
    }

    pub fn constant_value(&self) -> Option<F> {
        if self.num.is_constant() && self.den.is_constant() {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    /// `deg num - deg den`; the order of the pole at infinity. Zero maps to `i64::MAX`.
    pub fn degree(&self) -> i64 {
        if self.num.is_zero() {
            i64::MAX
        } else {
            self.num.deg() - self.den.deg()
        }
    }

    pub fn eval(&self, x: &F) -> Option<F> {
        self.num.eval(x).div(&self.den.eval(x))
    }

    pub fn eval_with<E: FieldElement>(&self, x: &E, lift: impl Fn(&F) -> E + Copy) -> Option<E> {
        self.num.eval_with(x, lift).div(&self.den.eval_with(x, lift))
    }

    pub fn derivative(&self) -> Self {
        let n = self.num.derivative().mul(&self.den).sub(&self.num.mul(&self.den.derivative()));
        Self::reduce(n, self.den.mul(&self.den))
    }

    pub fn map<G: ConstField>(&self, f: impl Fn(&F) -> G + Copy) -> URatFunc<G> {
        URatFunc::reduce(self.num.map(f), self.den.map(f))
    }

    /// `self(g)` for a rational function `g`.
    pub fn compose(&self, g: &Self) -> Self {
        let ev = |p: &UPoly<F>| -> URatFunc<F> {
            let mut acc = URatFunc::zero();
            for c in p.coeffs().iter().rev() {
                acc = acc.mul(g).add(&URatFunc::constant(c.clone()));
            }
            acc
        };
        ev(&self.num).div(&ev(&self.den)).expect("composition keeps denominator nonzero")
    }

    pub fn render(&self, var: &str) -> String {
        if self.den.is_one() {
            self.num.render(var)
        } else {
            format!("({})/({})", self.num.render(var), self.den.render(var))
        }
    }
}

impl<F: ConstField> fmt::Display for URatFunc<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("x"))
    }
}

impl<F: ConstField> FieldElement for URatFunc<F> {
    fn zero_like(&self) -> Self {
        Self::zero()
    }
    fn one_like(&self) -> Self {
        Self::one()
    }
    fn int_like(&self, n: i64) -> Self {
        Self::constant(F::from_int(n))
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }
    fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Self::reduce(self.num.add(&o.num), self.den.clone());
        }
        if self.den.is_one() {
            return URatFunc { num: self.num.mul(&o.den).add(&o.num), den: o.den.clone() };
        }
        if o.den.is_one() {
            return URatFunc { num: o.num.mul(&self.den).add(&self.num), den: self.den.clone() };
        }
        let g = self.den.gcd(&o.den);
        let a = self.den.exact_div(&g).unwrap();
        let b = o.den.exact_div(&g).unwrap();
        let num = self.num.mul(&b).add(&o.num.mul(&a));
        Self::reduce(num, a.mul(&o.den))
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        if self.den.is_one() && o.den.is_one() {
            return URatFunc { num: self.num.mul(&o.num), den: UPoly::one() };
        }
        let g1 = self.num.gcd(&o.den);
        let g2 = o.num.gcd(&self.den);
        let n1 = self.num.exact_div(&g1).unwrap();
        let d2 = o.den.exact_div(&g1).unwrap();
        let n2 = o.num.exact_div(&g2).unwrap();
        let d1 = self.den.exact_div(&g2).unwrap();
        let num = n1.mul(&n2);
        if num.is_zero() {
            return Self::zero();
        }
        let den = d1.mul(&d2);
        let l = den.lc().inv().unwrap();
        URatFunc { num: num.scale(&l), den: den.scale(&l) }
    }
    fn neg(&self) -> Self {
        URatFunc { num: self.num.neg(), den: self.den.clone() }
    }
    fn inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            return None;
        }
        let l = self.num.lc().inv().unwrap();
        Some(URatFunc { num: self.den.scale(&l), den: self.num.scale(&l) })
    }
}
