//! The biquadratic extension `L = Q(z1, z2)[h1, h2] / (h1^2 - f1, h2^2 - f2)`.
//!
//! Elements are 4-tuples over the basis `{1, h1, h2, h1 h2}`; basis index bit 0
//! stands for `h1` and bit 1 for `h2`.

use std::fmt;
use std::sync::Arc;

use h10_algebra::{FieldElement, MPoly, RatFunc, Rational, URatFunc, VarSet};

use crate::cfunc::{CurveFunction, FnCtx};
use crate::curve::{Curve, CurveParams, CurvePoint};
use crate::error::{CoreError, Result};

pub const Z1: u32 = 0;
pub const Z2: u32 = 1;

type Q = Rational;

#[derive(Debug)]
pub struct LTower {
    params: CurveParams,
    f: [MPoly<Q>; 2],
    cf: Arc<FnCtx<Q>>,
}

impl PartialEq for LTower {
    fn eq(&self, o: &Self) -> bool {
        self.params == o.params
    }
}

fn cubic(params: &CurveParams, v: u32) -> MPoly<Q> {
    let z = MPoly::var(v);
    z.pow(3).add(&z.scale(&params.a)).add(&MPoly::constant(params.b.clone()))
}

impl LTower {
    pub fn new(params: CurveParams) -> Arc<Self> {
        let f = [cubic(&params, Z1), cubic(&params, Z2)];
        let cf = FnCtx::new(params.a.clone(), params.b.clone());
        Arc::new(LTower { params, f, cf })
    }

    pub fn params(&self) -> &CurveParams {
        &self.params
    }

    /// `f_i` for `i` in `{1, 2}`.
    pub fn f(&self, i: usize) -> &MPoly<Q> {
        &self.f[i - 1]
    }

    /// Function field of one copy of the curve, shared with `CurveFunction`.
    pub fn curve_ctx(&self) -> &Arc<FnCtx<Q>> {
        &self.cf
    }

    pub fn vars() -> VarSet {
        VarSet::from_strs(&["z1", "z2"])
    }
}

#[derive(Clone, Debug)]
pub struct LElement {
    c: [RatFunc<Q>; 4],
    t: Arc<LTower>,
}

impl PartialEq for LElement {
    fn eq(&self, o: &Self) -> bool {
        self.c == o.c
    }
}

impl LElement {
    pub fn new(t: &Arc<LTower>, c: [RatFunc<Q>; 4]) -> Self {
        LElement { c, t: t.clone() }
    }

    pub fn from_base(t: &Arc<LTower>, c: RatFunc<Q>) -> Self {
        Self::new(t, [c, RatFunc::zero(), RatFunc::zero(), RatFunc::zero()])
    }

    pub fn constant(t: &Arc<LTower>, v: Q) -> Self {
        Self::from_base(t, RatFunc::constant(v))
    }

    /// `z_i` for `i` in `{1, 2}`.
    pub fn z(t: &Arc<LTower>, i: usize) -> Self {
        Self::from_base(t, RatFunc::var(i as u32 - 1))
    }

    /// `h_i` for `i` in `{1, 2}`.
    pub fn h(t: &Arc<LTower>, i: usize) -> Self {
        let mut c = [RatFunc::zero(), RatFunc::zero(), RatFunc::zero(), RatFunc::zero()];
        c[i] = RatFunc::one();
        Self::new(t, c)
    }

    pub fn tower(&self) -> &Arc<LTower> {
        &self.t
    }

    pub fn coords(&self) -> &[RatFunc<Q>; 4] {
        &self.c
    }

    pub fn coord(&self, k: usize) -> &RatFunc<Q> {
        &self.c[k]
    }

    /// Embeds a function of the `i`-th curve copy (`z -> z_i`, `h -> h_i`).
    pub fn from_cfunc(t: &Arc<LTower>, f: &CurveFunction<Q>, i: usize) -> Self {
        let v = i as u32 - 1;
        let mut c = [RatFunc::zero(), RatFunc::zero(), RatFunc::zero(), RatFunc::zero()];
        c[0] = urat_to_rat(f.c(), v);
        c[i] = urat_to_rat(f.d(), v);
        Self::new(t, c)
    }

    /// Flips the sign of `h_i`.
    pub fn conjugate(&self, i: usize) -> Self {
        let mut c = self.c.clone();
        for (k, x) in c.iter_mut().enumerate() {
            if k & i != 0 {
                *x = x.neg();
            }
        }
        Self::new(&self.t, c)
    }

    pub fn is_base(&self) -> bool {
        self.c[1..].iter().all(|x| x.is_zero())
    }

    pub fn render(&self) -> String {
        let vs = LTower::vars();
        let parts: Vec<String> = self.c.iter().map(|x| x.render(&vs)).collect();
        format!("[{}]", parts.join(", "))
    }

    fn fpow(&self, k: usize) -> RatFunc<Q> {
        let mut p = MPoly::one();
        if k & 1 != 0 {
            p = p.mul(self.t.f(1));
        }
        if k & 2 != 0 {
            p = p.mul(self.t.f(2));
        }
        RatFunc::from_poly(p)
    }
}

pub(crate) fn urat_to_rat(u: &URatFunc<Q>, v: u32) -> RatFunc<Q> {
    RatFunc::from_coprime(MPoly::from_upoly(u.num(), v), MPoly::from_upoly(u.den(), v))
        .expect("nonzero denominator")
}

impl fmt::Display for LElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl FieldElement for LElement {
    fn zero_like(&self) -> Self {
        Self::from_base(&self.t, RatFunc::zero())
    }
    fn one_like(&self) -> Self {
        Self::from_base(&self.t, RatFunc::one())
    }
    fn int_like(&self, n: i64) -> Self {
        Self::from_base(&self.t, RatFunc::constant(Q::from_integer(n.into())))
    }
    fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }
    fn add(&self, o: &Self) -> Self {
        let c = std::array::from_fn(|k| self.c[k].add(&o.c[k]));
        Self::new(&self.t, c)
    }
    fn sub(&self, o: &Self) -> Self {
        let c = std::array::from_fn(|k| self.c[k].sub(&o.c[k]));
        Self::new(&self.t, c)
    }
    fn neg(&self) -> Self {
        let c = std::array::from_fn(|k| self.c[k].neg());
        Self::new(&self.t, c)
    }
    fn mul(&self, o: &Self) -> Self {
        let mut out = [RatFunc::zero(), RatFunc::zero(), RatFunc::zero(), RatFunc::zero()];
        for i in 0..4 {
            if self.c[i].is_zero() {
                continue;
            }
            for j in 0..4 {
                if o.c[j].is_zero() {
                    continue;
                }
                let mut p = self.c[i].mul(&o.c[j]);
                if i & j != 0 {
                    p = p.mul(&self.fpow(i & j));
                }
                out[i ^ j] = out[i ^ j].add(&p);
            }
        }
        Self::new(&self.t, out)
    }
    fn inv(&self) -> Option<Self> {
        if self.is_base() {
            return self.c[0].inv().map(|c| Self::from_base(&self.t, c));
        }
        let s1 = self.conjugate(1);
        let p = self.mul(&s1);
        let (a, b) = (p.c[0].clone(), p.c[2].clone());
        let n = a.square().sub(&b.square().mul(&self.fpow(2)));
        let ni = n.inv()?;
        let s2 = Self::new(&self.t, [a, RatFunc::zero(), b.neg(), RatFunc::zero()]);
        let r = s1.mul(&s2);
        Some(Self::new(&self.t, std::array::from_fn(|k| r.c[k].mul(&ni))))
    }
}

/// The curve over `L`.
pub fn l_curve(t: &Arc<LTower>) -> Curve<LElement> {
    let p = t.params();
    Curve { a: LElement::constant(t, p.a.clone()), b: LElement::constant(t, p.b.clone()) }
}

/// `P_i = (z_i, h_i)`.
pub fn base_point(t: &Arc<LTower>, i: usize) -> CurvePoint<LElement> {
    CurvePoint::Affine(LElement::z(t, i), LElement::h(t, i))
}

/// `n (z, h)` over the curve's own function field.
pub fn generic_multiple(ctx: &Arc<FnCtx<Q>>, n: i64) -> CurvePoint<CurveFunction<Q>> {
    CurveFunction::generic_multiple(ctx, n)
}

fn embed_point(t: &Arc<LTower>, p: &CurvePoint<CurveFunction<Q>>, i: usize) -> CurvePoint<LElement> {
    p.map(|c| LElement::from_cfunc(t, c, i))
}

/// `n P1 + r P2` by the generic group law in `L`.
pub fn point_combination(t: &Arc<LTower>, n: i64, r: i64) -> CurvePoint<LElement> {
    let a = embed_point(t, &generic_multiple(t.curve_ctx(), n), 1);
    let b = embed_point(t, &generic_multiple(t.curve_ctx(), r), 2);
    l_curve(t).add(&a, &b)
}

/// `x(n P1 + r P2)`; the only exceptional pair is `(0, 0)`.
pub fn x_combination(t: &Arc<LTower>, n: i64, r: i64) -> Result<LElement> {
    let ctx = t.curve_ctx();
    match (n, r) {
        (0, 0) => Err(CoreError::ExceptionalPoint { n, r }),
        (_, 0) | (0, _) => {
            let (k, i) = if r == 0 { (n, 1) } else { (r, 2) };
            let p = generic_multiple(ctx, k);
            Ok(LElement::from_cfunc(t, p.x().expect("affine multiple"), i))
        }
        _ => Ok(chord_x(t, &generic_multiple(ctx, n), &generic_multiple(ctx, r))),
    }
}

/// Chord addition of `A` on the first copy and `B` on the second, assembled
/// directly: both denominators are `G^2` with `G = nB dA - nA dB`, which has no
/// factor in one variable alone, so no multivariate gcd is needed.
fn chord_x(t: &Arc<LTower>, a: &CurvePoint<CurveFunction<Q>>, b: &CurvePoint<CurveFunction<Q>>) -> LElement {
    let (CurvePoint::Affine(xa, ya), CurvePoint::Affine(xb, yb)) = (a, b) else {
        unreachable!("nonzero multiples of the generic point are affine")
    };
    let p = t.params();
    let up = |u: &h10_algebra::UPoly<Q>, v: u32| MPoly::from_upoly(u, v);
    let (na, da) = (up(xa.c().num(), Z1), up(xa.c().den(), Z1));
    let (nb, db) = (up(xb.c().num(), Z2), up(xb.c().den(), Z2));
    let g = nb.mul(&da).sub(&na.mul(&db));
    let g2 = g.square();
    let dadb = da.mul(&db);
    let c0 = na
        .mul(&nb)
        .add(&dadb.scale(&p.a))
        .mul(&na.mul(&db).add(&nb.mul(&da)))
        .add(&dadb.square().scale(&(p.b.clone() * Q::from_integer(2.into()))));
    let ua = ya.d().mul(&URatFunc::from_poly(xa.c().den().pow(2)));
    let ub = yb.d().mul(&URatFunc::from_poly(xb.c().den().pow(2)));
    let c3n = up(ua.num(), Z1).mul(&up(ub.num(), Z2)).scale(&Q::from_integer((-2).into()));
    let c3d = up(ua.den(), Z1).mul(&up(ub.den(), Z2)).mul(&g2);
    let c0 = RatFunc::from_coprime(c0, g2).expect("G nonzero");
    let c3 = RatFunc::from_coprime(c3n, c3d).expect("G nonzero");
    LElement::new(t, [c0, RatFunc::zero(), RatFunc::zero(), c3])
}

/// Lazily evaluated elements of `L`, so that valuations of large products
/// never have to be expanded.
#[derive(Clone, Debug, PartialEq)]
pub enum LExpr {
    Explicit(LElement),
    XComb { n: i64, r: i64 },
    Mul(Box<LExpr>, Box<LExpr>),
    Pow(Box<LExpr>, u32),
}

impl LExpr {
    pub fn xcomb(n: i64, r: i64) -> Self {
        LExpr::XComb { n, r }
    }

    pub fn times(self, o: LExpr) -> Self {
        LExpr::Mul(Box::new(self), Box::new(o))
    }

    pub fn pow(self, e: u32) -> Self {
        LExpr::Pow(Box::new(self), e)
    }

    pub fn expand(&self, t: &Arc<LTower>) -> Result<LElement> {
        match self {
            LExpr::Explicit(e) => Ok(e.clone()),
            LExpr::XComb { n, r } => x_combination(t, *n, *r),
            LExpr::Mul(a, b) => Ok(a.expand(t)?.mul(&b.expand(t)?)),
            LExpr::Pow(a, e) => Ok(a.expand(t)?.pow(*e as u64)),
        }
    }
}

impl fmt::Display for LExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LExpr::Explicit(e) => write!(f, "{e}"),
            LExpr::XComb { n, r } => write!(f, "x({n}P1 + {r}P2)"),
            LExpr::Mul(a, b) => write!(f, "({a})*({b})"),
            LExpr::Pow(a, e) => write!(f, "({a})^{e}"),
        }
    }
}
