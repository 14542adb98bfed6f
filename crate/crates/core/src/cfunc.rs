//! The function field `F(z)[h]/(h^2 - f)` of the curve, `f = z^3 + a z + b`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use h10_algebra::{ConstField, FieldElement, Rational, URatFunc, UPoly};

use crate::curve::{Curve, CurvePoint};

pub struct FnCtx<F> {
    pub a: F,
    pub b: F,
    pub f: UPoly<F>,
    /// `(x, y / h)` of positive multiples of the generic point.
    multiples: Mutex<HashMap<i64, (URatFunc<F>, URatFunc<F>)>>,
}

impl<F: fmt::Debug> fmt::Debug for FnCtx<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FnCtx").field("a", &self.a).field("b", &self.b).finish()
    }
}

impl<F: PartialEq> PartialEq for FnCtx<F> {
    fn eq(&self, o: &Self) -> bool {
        self.a == o.a && self.b == o.b
    }
}

impl<F: ConstField> FnCtx<F> {
    pub fn new(a: F, b: F) -> Arc<Self> {
        let f = UPoly::from_coeffs(vec![b.clone(), a.clone(), F::zero(), F::one()]);
        Arc::new(FnCtx { a, b, f, multiples: Mutex::new(HashMap::new()) })
    }

    pub fn over_q(params: &crate::curve::CurveParams) -> Arc<FnCtx<Rational>> {
        FnCtx::new(params.a.clone(), params.b.clone())
    }
}

/// `c + d h` with `c, d` rational functions of `z`.
#[derive(Clone, Debug)]
pub struct CurveFunction<F> {
    c: URatFunc<F>,
    d: URatFunc<F>,
    ctx: Arc<FnCtx<F>>,
}

impl<F: ConstField> PartialEq for CurveFunction<F> {
    fn eq(&self, o: &Self) -> bool {
        self.c == o.c && self.d == o.d
    }
}

impl<F: ConstField> CurveFunction<F> {
    pub fn new(ctx: &Arc<FnCtx<F>>, c: URatFunc<F>, d: URatFunc<F>) -> Self {
        CurveFunction { c, d, ctx: ctx.clone() }
    }

    pub fn constant(ctx: &Arc<FnCtx<F>>, v: F) -> Self {
        Self::new(ctx, URatFunc::constant(v), URatFunc::zero())
    }

    pub fn from_z(ctx: &Arc<FnCtx<F>>, c: URatFunc<F>) -> Self {
        Self::new(ctx, c, URatFunc::zero())
    }

    /// The coordinate function `x`.
    pub fn z(ctx: &Arc<FnCtx<F>>) -> Self {
        Self::from_z(ctx, URatFunc::x())
    }

    /// The coordinate function `y`.
    pub fn h(ctx: &Arc<FnCtx<F>>) -> Self {
        Self::new(ctx, URatFunc::zero(), URatFunc::one())
    }

    pub fn ctx(&self) -> &Arc<FnCtx<F>> {
        &self.ctx
    }

    pub fn c(&self) -> &URatFunc<F> {
        &self.c
    }

    pub fn d(&self) -> &URatFunc<F> {
        &self.d
    }

    /// The curve over its own function field.
    pub fn curve(ctx: &Arc<FnCtx<F>>) -> Curve<Self> {
        Curve { a: Self::constant(ctx, ctx.a.clone()), b: Self::constant(ctx, ctx.b.clone()) }
    }

    /// The generic point `(z, h)`.
    pub fn generic_point(ctx: &Arc<FnCtx<F>>) -> CurvePoint<Self> {
        CurvePoint::Affine(Self::z(ctx), Self::h(ctx))
    }

    /// `n (z, h)`, memoized per context.
    pub fn generic_multiple(ctx: &Arc<FnCtx<F>>, n: i64) -> CurvePoint<Self> {
        if n == 0 {
            return CurvePoint::Infinity;
        }
        if n < 0 {
            return Self::curve(ctx).neg(&Self::generic_multiple(ctx, -n));
        }
        if let Some((x, d)) = ctx.multiples.lock().unwrap().get(&n) {
            return CurvePoint::Affine(Self::from_z(ctx, x.clone()), Self::new(ctx, URatFunc::zero(), d.clone()));
        }
        let e = Self::curve(ctx);
        let p = if n == 1 {
            Self::generic_point(ctx)
        } else {
            let half = e.double(&Self::generic_multiple(ctx, n / 2));
            if n % 2 == 1 {
                e.add(&half, &Self::generic_point(ctx))
            } else {
                half
            }
        };
        if let CurvePoint::Affine(x, y) = &p {
            debug_assert!(x.d.is_zero() && y.c.is_zero());
            ctx.multiples.lock().unwrap().insert(n, (x.c.clone(), y.d.clone()));
        }
        p
    }

    pub fn conjugate(&self) -> Self {
        Self::new(&self.ctx, self.c.clone(), self.d.neg())
    }

    /// `c^2 - d^2 f`, the norm to `F(z)`.
    pub fn norm(&self) -> URatFunc<F> {
        let f = URatFunc::from_poly(self.ctx.f.clone());
        self.c.square().sub(&self.d.square().mul(&f))
    }

    pub fn constant_value(&self) -> Option<F> {
        if self.d.is_zero() {
            self.c.constant_value()
        } else {
            None
        }
    }

    pub fn map<G: ConstField>(&self, ctx: &Arc<FnCtx<G>>, f: impl Fn(&F) -> G + Copy) -> CurveFunction<G> {
        CurveFunction::new(ctx, self.c.map(f), self.d.map(f))
    }

    pub fn render(&self, z: &str, h: &str) -> String {
        if self.d.is_zero() {
            return self.c.render(z);
        }
        let d = format!("({})*{h}", self.d.render(z));
        if self.c.is_zero() {
            d
        } else {
            format!("{} + {d}", self.c.render(z))
        }
    }
}

impl<F: ConstField> fmt::Display for CurveFunction<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("z1", "h1"))
    }
}

impl<F: ConstField> FieldElement for CurveFunction<F> {
    fn zero_like(&self) -> Self {
        Self::from_z(&self.ctx, URatFunc::zero())
    }
    fn one_like(&self) -> Self {
        Self::from_z(&self.ctx, URatFunc::one())
    }
    fn int_like(&self, n: i64) -> Self {
        Self::constant(&self.ctx, F::from_int(n))
    }
    fn is_zero(&self) -> bool {
        self.c.is_zero() && self.d.is_zero()
    }
    fn is_one(&self) -> bool {
        self.d.is_zero() && self.c.is_one()
    }
    fn add(&self, o: &Self) -> Self {
        Self::new(&self.ctx, self.c.add(&o.c), self.d.add(&o.d))
    }
    fn sub(&self, o: &Self) -> Self {
        Self::new(&self.ctx, self.c.sub(&o.c), self.d.sub(&o.d))
    }
    fn mul(&self, o: &Self) -> Self {
        if self.d.is_zero() {
            return Self::new(&self.ctx, self.c.mul(&o.c), self.c.mul(&o.d));
        }
        if o.d.is_zero() {
            return Self::new(&self.ctx, self.c.mul(&o.c), self.d.mul(&o.c));
        }
        let f = URatFunc::from_poly(self.ctx.f.clone());
        let c = self.c.mul(&o.c).add(&self.d.mul(&o.d).mul(&f));
        let d = self.c.mul(&o.d).add(&self.d.mul(&o.c));
        Self::new(&self.ctx, c, d)
    }
    fn neg(&self) -> Self {
        Self::new(&self.ctx, self.c.neg(), self.d.neg())
    }
    fn inv(&self) -> Option<Self> {
        if self.d.is_zero() {
            return self.c.inv().map(|c| Self::from_z(&self.ctx, c));
        }
        let ni = self.norm().inv()?;
        Some(Self::new(&self.ctx, self.c.mul(&ni), self.d.neg().mul(&ni)))
    }
}
