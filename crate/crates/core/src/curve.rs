//! Short Weierstrass curves `y^2 = x^3 + a x + b` over any field of the algebra
//! substrate, with the chord-tangent group law.

use std::fmt;

use h10_algebra::{ConstField, FieldElement, Rational};

use crate::error::{CoreError, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum CurvePoint<F> {
    Infinity,
    Affine(F, F),
}

impl<F: FieldElement> CurvePoint<F> {
    pub fn x(&self) -> Option<&F> {
        match self {
            CurvePoint::Infinity => None,
            CurvePoint::Affine(x, _) => Some(x),
        }
    }

    pub fn y(&self) -> Option<&F> {
        match self {
            CurvePoint::Infinity => None,
            CurvePoint::Affine(_, y) => Some(y),
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }

    pub fn map<G>(&self, f: impl Fn(&F) -> G) -> CurvePoint<G> {
        match self {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine(x, y) => CurvePoint::Affine(f(x), f(y)),
        }
    }
}

impl<F: fmt::Display> fmt::Display for CurvePoint<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurvePoint::Infinity => f.write_str("O"),
            CurvePoint::Affine(x, y) => write!(f, "({x}, {y})"),
        }
    }
}

/// Rational curve parameters; `(1, 1)` is the default curve.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveParams {
    pub a: Rational,
    pub b: Rational,
}

impl Default for CurveParams {
    fn default() -> Self {
        CurveParams { a: Rational::from_int(1), b: Rational::from_int(1) }
    }
}

impl CurveParams {
    pub fn new(a: Rational, b: Rational) -> Result<Self> {
        Curve::new(a.clone(), b.clone())?;
        Ok(CurveParams { a, b })
    }

    pub fn lift<F: FieldElement>(&self, lift: impl Fn(&Rational) -> F) -> Curve<F> {
        Curve { a: lift(&self.a), b: lift(&self.b) }
    }

    pub fn over_q(&self) -> Curve<Rational> {
        self.lift(|c| c.clone())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Curve<F> {
    pub a: F,
    pub b: F,
}

impl<F: FieldElement> Curve<F> {
    /// Rejects `b = 0` and singular curves.
    pub fn new(a: F, b: F) -> Result<Self> {
        if b.is_zero() {
            return Err(CoreError::InvalidCurve("b must be nonzero".into()));
        }
        let disc = a.pow(3).mul(&a.int_like(4)).add(&b.square().mul(&b.int_like(27)));
        if disc.is_zero() {
            return Err(CoreError::InvalidCurve("4a^3 + 27b^2 = 0".into()));
        }
        Ok(Curve { a, b })
    }

    /// `x^3 + a x + b`.
    pub fn rhs(&self, x: &F) -> F {
        x.square().add(&self.a).mul(x).add(&self.b)
    }

    pub fn on_curve(&self, p: &CurvePoint<F>) -> bool {
        match p {
            CurvePoint::Infinity => true,
            CurvePoint::Affine(x, y) => y.square().sub(&self.rhs(x)).is_zero(),
        }
    }

    pub fn neg(&self, p: &CurvePoint<F>) -> CurvePoint<F> {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine(x, y) => CurvePoint::Affine(x.clone(), y.neg()),
        }
    }

    pub fn double(&self, p: &CurvePoint<F>) -> CurvePoint<F> {
        let (x, y) = match p {
            CurvePoint::Infinity => return CurvePoint::Infinity,
            CurvePoint::Affine(x, y) => (x, y),
        };
        let Some(inv) = y.add(y).inv() else {
            return CurvePoint::Infinity;
        };
        let lam = x.square().mul(&x.int_like(3)).add(&self.a).mul(&inv);
        self.finish(&lam, x, y, x)
    }

    pub fn add(&self, p: &CurvePoint<F>, q: &CurvePoint<F>) -> CurvePoint<F> {
        let ((x1, y1), (x2, y2)) = match (p, q) {
            (CurvePoint::Infinity, _) => return q.clone(),
            (_, CurvePoint::Infinity) => return p.clone(),
            (CurvePoint::Affine(a, b), CurvePoint::Affine(c, d)) => ((a, b), (c, d)),
        };
        let dx = x2.sub(x1);
        match dx.inv() {
            Some(inv) => {
                let lam = y2.sub(y1).mul(&inv);
                self.finish(&lam, x1, y1, x2)
            }
            None if y1.add(y2).is_zero() => CurvePoint::Infinity,
            None => self.double(p),
        }
    }

    fn finish(&self, lam: &F, x1: &F, y1: &F, x2: &F) -> CurvePoint<F> {
        let x3 = lam.square().sub(x1).sub(x2);
        let y3 = lam.mul(&x1.sub(&x3)).sub(y1);
        CurvePoint::Affine(x3, y3)
    }

    pub fn sub(&self, p: &CurvePoint<F>, q: &CurvePoint<F>) -> CurvePoint<F> {
        self.add(p, &self.neg(q))
    }

    /// `n * p` by double-and-add.
    pub fn mul(&self, n: i64, p: &CurvePoint<F>) -> CurvePoint<F> {
        let base = if n < 0 { self.neg(p) } else { p.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = CurvePoint::Infinity;
        let mut pow = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &pow);
            }
            k >>= 1;
            if k > 0 {
                pow = self.double(&pow);
            }
        }
        acc
    }
}
