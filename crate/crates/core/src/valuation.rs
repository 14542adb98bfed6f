//! The valuation `w_m` of `L` at `x(m P1 + P2) = 0`, its residues in the
//! function field of the curve, and the residue-square test for conics.
//!
//! With `P2' = m P1 + P2`, the field `L` is generated by `z1, h1, t = x(P2')`
//! and `y(P2')`. On the branch where `y(P2') = ±sqrt(b)` at `t = 0`, elements
//! expand as Laurent series in `t` over `Q(z1)[h1]`.

use std::fmt;
use std::sync::Arc;

use h10_algebra::{ConstField, FieldElement, MPoly, RatFunc, Rational, URatFunc, UPoly};

use crate::cfunc::CurveFunction;
use crate::curve::CurvePoint;
use crate::divisor::{is_square_over_closure, pullback_x, verify_place_witness, PlaceWitness, RootSign, SquareVerdict};
use crate::error::{CoreError, Result};
use crate::lfield::{generic_multiple, point_combination, x_combination, LElement, LExpr, LTower, Z1, Z2};
use crate::series::{poly_series, Coefficient, Series};

type Q = Rational;
type CF = CurveFunction<Q>;

#[derive(Clone, Debug, PartialEq)]
pub struct ValuationOutcome {
    pub order: i64,
    /// Leading coefficient: the image of `f / t^order` at `t = 0`.
    pub unit_residue: CF,
}

/// An element of `L` written in the generators `z1, h1, z2', h2'` (the
/// second pair occupies the slots of `z2, h2`).
#[derive(Clone, Debug, PartialEq)]
pub struct ReexpressedL {
    pub m: i64,
    pub elem: LElement,
}

#[derive(Clone, Debug)]
pub struct Valuer {
    t: Arc<LTower>,
    m: i64,
    sign: RootSign,
    start_prec: usize,
    max_prec: usize,
}

/// Substitutes `z2 -> x`, `h2 -> y` in `f`.
pub fn substitute_second(f: &LElement, x: &LElement, y: &LElement) -> Option<LElement> {
    let t = f.tower();
    let z1 = LElement::z(t, 1);
    let h1 = LElement::h(t, 1);
    let zero = z1.zero_like();
    let vals = |v: u32| if v == Z1 { z1.clone() } else { x.clone() };
    let lift = |c: &Q| LElement::constant(t, c.clone());
    let mut acc = zero.clone();
    for (k, c) in f.coords().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let num = c.num().eval_with(&vals, &lift, &zero);
        let den = c.den().eval_with(&vals, &lift, &zero);
        let mut term = num.div(&den)?;
        if k & 1 != 0 {
            term = term.mul(&h1);
        }
        if k & 2 != 0 {
            term = term.mul(y);
        }
        acc = acc.add(&term);
    }
    Some(acc)
}

fn point_xy(p: &CurvePoint<LElement>, m: i64) -> Result<(LElement, LElement)> {
    match p {
        CurvePoint::Affine(x, y) if !x.is_zero() => Ok((x.clone(), y.clone())),
        _ => Err(CoreError::ExceptionalPoint { n: m, r: 1 }),
    }
}

/// Rewrites `f` in the generators `z2' = x(m P1 + P2)`, `h2' = y(m P1 + P2)`,
/// using `P2 = P2' - m P1`.
pub fn change_generators(t: &Arc<LTower>, m: i64, f: &LElement) -> Result<ReexpressedL> {
    if m == 0 {
        return Ok(ReexpressedL { m, elem: f.clone() });
    }
    let (x, y) = point_xy(&point_combination(t, -m, 1), -m)?;
    let elem = substitute_second(f, &x, &y).ok_or(CoreError::ExceptionalPoint { n: -m, r: 1 })?;
    Ok(ReexpressedL { m, elem })
}

/// Inverse of `change_generators`.
pub fn restore_generators(t: &Arc<LTower>, g: &ReexpressedL) -> Result<LElement> {
    if g.m == 0 {
        return Ok(g.elem.clone());
    }
    let (x, y) = point_xy(&point_combination(t, g.m, 1), g.m)?;
    substitute_second(&g.elem, &x, &y).ok_or(CoreError::ExceptionalPoint { n: g.m, r: 1 })
}

fn upoly_cf(p: &MPoly<Q>, ctx: &Arc<crate::cfunc::FnCtx<Q>>) -> CF {
    let u = p.to_upoly(Z1).expect("polynomial in z1");
    CF::from_z(ctx, URatFunc::from_poly(u))
}

impl Valuer {
    pub fn new(t: &Arc<LTower>, m: i64, sign: RootSign) -> Result<Self> {
        if <Q as ConstField>::sqrt(&t.params().b).is_none() {
            return Err(CoreError::NotApplicable("the residue branch needs a rational sqrt(b)".into()));
        }
        Ok(Valuer { t: t.clone(), m, sign, start_prec: 6, max_prec: 192 })
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn tower(&self) -> &Arc<LTower> {
        &self.t
    }

    fn proto(&self) -> CF {
        CF::constant(self.t.curve_ctx(), Q::from_integer(0.into()))
    }

    /// `y(P2') = ±sqrt(b) sqrt(1 + (a t + t^3) / b)`.
    pub fn h_series_q(&self, prec: usize) -> Result<Series<Q>> {
        let p = self.t.params();
        let mut root = <Q as ConstField>::sqrt(&p.b).unwrap();
        if self.sign == RootSign::Minus {
            root = -root;
        }
        let inv_b = <Q as FieldElement>::inv(&p.b).unwrap();
        let cubic = UPoly::from_coeffs(vec![Q::zero(), &p.a * &inv_b, Q::zero(), inv_b]);
        let u = poly_series(&cubic, &Q::zero(), prec + 3);
        Ok(Series::sqrt_one_plus(&u, prec)?.scale(&root))
    }

    pub fn h_series(&self, prec: usize) -> Result<Series<CF>> {
        let proto = self.proto();
        Ok(self.h_series_q(prec)?.map(&proto, |c| proto.rat_like(c)))
    }

    /// `x(n P1 + r P2) = x(s P1 + r P2')` with `s = n - m r`, as a quotient
    /// of series whose coefficients are polynomial in `z1, h1`.
    ///
    /// With `s P1 = (phi / e, alpha h1)` and `r P2' = (p / q, (u / v) y(P2'))`
    /// the chord gives numerator `C - 2 alpha e^2 (u / v) y(P2') q^2 h1` over
    /// `(phi q - p e)^2` where `C = (phi p + a e q)(phi q + p e) + 2 b e^2 q^2`.
    pub fn xcomb_parts(&self, n: i64, r: i64, prec: usize) -> Result<(Series<CF>, Series<CF>)> {
        let ctx = self.t.curve_ctx();
        let proto = self.proto();
        let s = n - self.m * r;
        if s == 0 && r == 0 {
            return Err(CoreError::ExceptionalPoint { n, r });
        }
        let one = Series::constant(proto.one_like(), prec);
        let a = generic_multiple(ctx, s);
        if r == 0 {
            return Ok((Series::constant(a.x().unwrap().clone(), prec), one));
        }
        let b = generic_multiple(ctx, r);
        let CurvePoint::Affine(bx, by) = &b else { unreachable!() };
        let z0 = Q::zero();
        let p = poly_series(bx.c().num(), &z0, prec);
        let q = poly_series(bx.c().den(), &z0, prec);
        let lift = |x: &Series<Q>| x.map(&proto, |c| proto.rat_like(c));
        if s == 0 {
            return Ok((lift(&p), lift(&q)));
        }
        let CurvePoint::Affine(ax, ay) = &a else { unreachable!() };
        let (phi, e) = (ax.c().num(), ax.c().den());
        let e2 = e.mul(e);
        let w = ay.d().mul(&URatFunc::from_poly(e2.clone()));
        let (wn, wd) = (w.num(), w.den());
        let pn = poly_series(by.d().num(), &z0, prec);
        let pd = poly_series(by.d().den(), &z0, prec);
        let pa = &self.t.params().a;
        let two_b = &self.t.params().b * Q::from_integer(2.into());
        let (pq, p2, q2) = (p.mul(&q), p.square(), q.square());
        let phi_e = phi.mul(e);
        let num_c = [
            (wd.mul(&phi.mul(phi)), pd.mul(&pq)),
            (wd.mul(&phi_e), pd.mul(&p2)),
            (wd.mul(&phi_e).scale(pa), pd.mul(&q2)),
            (wd.mul(&e2), pd.mul(&pq.scale(pa).add(&q2.scale(&two_b)))),
        ];
        let num_h = (wn.scale(&Q::from_integer((-2).into())), pn.mul(&self.h_series_q(prec)?).mul(&q2));
        let den = [
            (wd.mul(&phi.mul(phi)), pd.mul(&q2)),
            (wd.mul(&phi_e).scale(&Q::from_integer((-2).into())), pd.mul(&pq)),
            (wd.mul(&e2), pd.mul(&p2)),
        ];
        Ok((self.combine(&num_c, Some(&num_h)), self.combine(&den, None)))
    }

    /// `sum_i Z_i(z1) S_i(t) + h1 Z'(z1) S'(t)`.
    fn combine(&self, c: &[(UPoly<Q>, Series<Q>)], h: Option<&(UPoly<Q>, Series<Q>)>) -> Series<CF> {
        let ctx = self.t.curve_ctx();
        let all = c.iter().chain(h);
        let lo = all.clone().map(|(_, x)| x.val()).min().unwrap();
        let hi = all.map(|(_, x)| x.abs_prec()).min().unwrap();
        let coeffs = (lo..hi.max(lo))
            .map(|k| {
                let part = |ts: &mut dyn Iterator<Item = &(UPoly<Q>, Series<Q>)>| {
                    ts.fold(UPoly::zero(), |acc: UPoly<Q>, (z, x)| acc.add(&z.scale(&x.coeff(k))))
                };
                let cp = part(&mut c.iter());
                let dp = part(&mut h.into_iter());
                CF::new(ctx, URatFunc::from_poly(cp), URatFunc::from_poly(dp))
            })
            .collect();
        Series::new(lo, coeffs, &self.proto())
    }

    /// Series of `x(n P1 + r P2)`.
    pub fn xcomb_series(&self, n: i64, r: i64, prec: usize) -> Result<Series<CF>> {
        let (num, den) = self.xcomb_parts(n, r, prec)?;
        num.div(&den)
    }

    fn ratfunc_series(&self, c: &RatFunc<Q>, prec: usize) -> Result<Series<CF>> {
        let ctx = self.t.curve_ctx();
        let proto = self.proto();
        let lift = |p: &MPoly<Q>| {
            let mut cs: Vec<CF> = p.coeffs_in(Z2).iter().map(|q| upoly_cf(q, ctx)).collect();
            let lead = cs.iter().position(|c| !c.is_zero()).unwrap_or(0);
            cs.resize(cs.len().max(lead + prec), proto.zero_like());
            Series::new(0, cs, &proto)
        };
        lift(c.num()).truncate(prec).div(&lift(c.den()).truncate(prec))
    }

    /// Series of an element already written in the new generators.
    pub fn reexpressed_series(&self, g: &ReexpressedL, prec: usize) -> Result<Series<CF>> {
        let ctx = self.t.curve_ctx();
        let h1 = CF::h(ctx);
        let hs = self.h_series(prec)?;
        let mut acc: Option<Series<CF>> = None;
        for (k, c) in g.elem.coords().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut s = self.ratfunc_series(c, prec)?;
            if k & 1 != 0 {
                s = s.scale(&h1);
            }
            if k & 2 != 0 {
                s = s.mul(&hs);
            }
            acc = Some(match acc {
                None => s,
                Some(a) => a.add(&s),
            });
        }
        acc.ok_or_else(|| CoreError::NotApplicable("valuation of zero".into()))
    }

    fn outcome(s: Result<Series<CF>>) -> Result<ValuationOutcome> {
        let s = s?;
        Ok(ValuationOutcome { order: s.order()?, unit_residue: s.leading()?.clone() })
    }

    fn with_precision(&self, f: impl Fn(usize) -> Result<ValuationOutcome>) -> Result<ValuationOutcome> {
        let mut prec = self.start_prec;
        loop {
            match f(prec) {
                Err(CoreError::PrecisionExhausted) if prec < self.max_prec => prec *= 2,
                other => return other,
            }
        }
    }

    /// `w_m` of an explicit element, through `change_generators`.
    pub fn explicit(&self, f: &LElement) -> Result<ValuationOutcome> {
        if f.is_zero() {
            return Err(CoreError::NotApplicable("valuation of zero".into()));
        }
        let g = change_generators(&self.t, self.m, f)?;
        self.with_precision(|p| Self::outcome(self.reexpressed_series(&g, p)))
    }

    pub fn w(&self, e: &LExpr) -> Result<ValuationOutcome> {
        match e {
            LExpr::Explicit(f) => self.explicit(f),
            LExpr::XComb { n, r } => self.with_precision(|p| {
                let (num, den) = self.xcomb_parts(*n, *r, p)?;
                let unit_residue = num.leading()?.div(den.leading()?).expect("nonzero leading coefficient");
                Ok(ValuationOutcome { order: num.order()? - den.order()?, unit_residue })
            }),
            LExpr::Mul(a, b) => {
                let (a, b) = (self.w(a)?, self.w(b)?);
                Ok(ValuationOutcome { order: a.order + b.order, unit_residue: a.unit_residue.mul(&b.unit_residue) })
            }
            LExpr::Pow(a, k) => {
                let a = self.w(a)?;
                Ok(ValuationOutcome { order: a.order * *k as i64, unit_residue: a.unit_residue.pow(*k as u64) })
            }
        }
    }

    /// Residue of `x(n P1 + r P2)` predicted by the group law on the curve:
    /// `x((n - m r)(z1, h1) + r (0, ±sqrt b))`.
    pub fn predicted_residue(&self, n: i64, r: i64) -> Result<CF> {
        pullback_x(self.t.curve_ctx(), n - self.m * r, r, self.sign)
    }
}

/// Evidence that `a y^2 + b z^2 = 1` has no solution in `L`: `w_m(a) = 0`,
/// `w_m(b)` odd, and the residue of `a` is not a square.
#[derive(Clone, Debug, PartialEq)]
pub struct RefutationWitness {
    pub m: i64,
    /// Multiplier `k` of the equation inside its bundle.
    pub k: i64,
    pub order_a: i64,
    pub order_b: i64,
    pub residue: CF,
    pub place: PlaceWitness<Q>,
}

impl RefutationWitness {
    /// Replays the parity claim on the residue.
    pub fn verify(&self) -> bool {
        self.order_a == 0 && self.order_b % 2 != 0 && verify_place_witness(&self.residue, &self.place)
    }
}

impl fmt::Display for RefutationWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "m = {}, k = {}, w(a) = {}, w(b) = {}, residue = {}, place = {}",
            self.m, self.k, self.order_a, self.order_b, self.residue, self.place
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum GateOutcome {
    Possible,
    Refuted(RefutationWitness),
}

/// Necessary condition for `a y^2 + b z^2 = 1`: with `w_m(a) = 0` and
/// `w_m(b)` odd, the residue of `a` must be a square.
pub fn lemma_square_gate(v: &Valuer, a: &LExpr, b: &LExpr, factor_bound: usize) -> Result<GateOutcome> {
    let wa = v.w(a)?;
    let wb = v.w(b)?;
    if wa.order != 0 || wb.order % 2 == 0 {
        return Err(CoreError::NotApplicable(format!("valuation pattern ({}, {})", wa.order, wb.order)));
    }
    match is_square_over_closure(&wa.unit_residue, factor_bound)? {
        SquareVerdict::EvenDivisor => Ok(GateOutcome::Possible),
        SquareVerdict::NonSquare(place) => Ok(GateOutcome::Refuted(RefutationWitness {
            m: v.m(),
            k: 1,
            order_a: wa.order,
            order_b: wb.order,
            residue: wa.unit_residue,
            place,
        })),
    }
}

/// `x(n P1 + r P2)` as an explicit element, for cross-checking the series route.
pub fn explicit_xcomb(t: &Arc<LTower>, n: i64, r: i64) -> Result<LExpr> {
    Ok(LExpr::Explicit(x_combination(t, n, r)?))
}
