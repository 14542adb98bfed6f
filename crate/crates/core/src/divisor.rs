//! Divisors of functions `c + d h` on the curve `h^2 = f(z)`.
//!
//! Finite places are grouped over a gcd-free basis of the polynomials that can
//! carry zeros or poles. Every irreducible factor of a basis element sees the
//! same local data, so parities are decided without factoring; factoring is
//! only used to split clusters into individual places.

use std::fmt;
use std::sync::Arc;

use h10_algebra::{AlgebraError, ConstField, FieldElement, URatFunc, UPoly};

use crate::cfunc::{CurveFunction, FnCtx};
use crate::curve::CurvePoint;
use crate::error::{CoreError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum PlaceKind {
    /// One of the two places over `base` where `h = branch (mod base)`.
    Split,
    /// The place over a root of `f`.
    Ramified,
    /// Both places over `base` together, with a common order.
    Fiber,
    Infinity,
}

/// A place, or with `irreducible == false` a cluster of places that share all
/// local data. A split branch is the value of `h` at the roots of `base`,
/// given by a rational function whose denominator is prime to `base`; it is
/// reduced to a polynomial mod `base` when `base` is small.
#[derive(Clone, Debug)]
pub struct Place<F: ConstField> {
    pub kind: PlaceKind,
    pub base: UPoly<F>,
    pub branch: Option<URatFunc<F>>,
    pub irreducible: bool,
}

/// Bases up to this degree get their branches reduced mod the base.
const CANONICAL_BRANCH_DEGREE: i64 = 24;

fn canonical_branch<F: ConstField>(eta: URatFunc<F>, base: &UPoly<F>) -> URatFunc<F> {
    if base.deg() > CANONICAL_BRANCH_DEGREE || eta.den().is_one() && eta.num().deg() < base.deg() {
        return eta;
    }
    let inv = eta.den().inv_mod(base).expect("branch denominator prime to the base");
    URatFunc::from_poly(eta.num().mul(&inv).rem(base))
}

/// Whether two branch functions agree at every root of `base`.
fn same_branch<F: ConstField>(a: &URatFunc<F>, b: &URatFunc<F>, base: &UPoly<F>) -> bool {
    a == b || a.num().mul(b.den()).sub(&b.num().mul(a.den())).rem(base).is_zero()
}

impl<F: ConstField> PartialEq for Place<F> {
    fn eq(&self, o: &Self) -> bool {
        self.kind == o.kind
            && self.irreducible == o.irreducible
            && self.base == o.base
            && match (&self.branch, &o.branch) {
                (None, None) => true,
                (Some(a), Some(b)) => same_branch(a, b, &self.base),
                _ => false,
            }
    }
}

impl<F: ConstField> Place<F> {
    pub fn infinity() -> Self {
        Place { kind: PlaceKind::Infinity, base: UPoly::one(), branch: None, irreducible: true }
    }

    /// Degree over the constants (sum over a cluster).
    pub fn degree(&self) -> i64 {
        match self.kind {
            PlaceKind::Infinity => 1,
            PlaceKind::Fiber => 2 * self.base.deg(),
            _ => self.base.deg(),
        }
    }

    pub fn describe(&self, z: &str, h: &str) -> String {
        let base = self.base.render(z);
        let tag = if self.irreducible { "" } else { " (cluster)" };
        match self.kind {
            PlaceKind::Infinity => "infinity".into(),
            PlaceKind::Ramified => format!("ramified {base} = 0{tag}"),
            PlaceKind::Fiber => format!("fiber {base} = 0{tag}"),
            PlaceKind::Split => {
                let br = match &self.branch {
                    Some(b) if b.den().is_one() => b.num().render(z),
                    Some(b) => format!("({}) / ({})", b.num().render(z), b.den().render(z)),
                    None => String::new(),
                };
                format!("split {base} = 0, {h} = {br}{tag}")
            }
        }
    }
}

impl<F: ConstField> fmt::Display for Place<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe("z1", "h1"))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Divisor<F: ConstField> {
    entries: Vec<(Place<F>, i64)>,
}

impl<F: ConstField> Divisor<F> {
    pub fn zero() -> Self {
        Divisor { entries: Vec::new() }
    }

    fn from_entries(mut entries: Vec<(Place<F>, i64)>) -> Self {
        entries.retain(|(_, o)| *o != 0);
        entries.sort_by_cached_key(|(p, _)| p.describe("z", "h"));
        Divisor { entries }
    }

    pub fn entries(&self) -> &[(Place<F>, i64)] {
        &self.entries
    }

    pub fn order_at(&self, p: &Place<F>) -> i64 {
        self.entries.iter().find(|(q, _)| q == p).map_or(0, |(_, o)| *o)
    }

    pub fn degree(&self) -> i64 {
        self.entries.iter().map(|(p, o)| p.degree() * o).sum()
    }

    /// Degree of the zero part.
    pub fn zero_count(&self) -> i64 {
        self.entries.iter().filter(|(_, o)| *o > 0).map(|(p, o)| p.degree() * o).sum()
    }

    pub fn pole_count(&self) -> i64 {
        -self.entries.iter().filter(|(_, o)| *o < 0).map(|(p, o)| p.degree() * o).sum::<i64>()
    }

    pub fn zeros_simple(&self) -> bool {
        self.entries.iter().all(|(_, o)| *o <= 1)
    }

    pub fn is_even(&self) -> bool {
        self.entries.iter().all(|(_, o)| o % 2 == 0)
    }

    pub fn first_odd(&self) -> Option<&(Place<F>, i64)> {
        self.entries.iter().find(|(_, o)| o % 2 != 0)
    }

    /// Sum of divisors; a fiber meeting split places over the same base is
    /// distributed onto both branches.
    pub fn add(&self, o: &Self) -> Self {
        let all: Vec<(Place<F>, i64)> = self.entries.iter().chain(o.entries.iter()).cloned().collect();
        let mut out: Vec<(Place<F>, i64)> = Vec::new();
        let push = |p: Place<F>, k: i64, out: &mut Vec<(Place<F>, i64)>| {
            if let Some(e) = out.iter_mut().find(|(q, _)| *q == p) {
                e.1 += k;
            } else {
                out.push((p, k));
            }
        };
        for (p, k) in &all {
            if p.kind != PlaceKind::Fiber {
                push(p.clone(), *k, &mut out);
                continue;
            }
            let split = all.iter().find(|(q, _)| q.kind == PlaceKind::Split && q.base == p.base);
            match split {
                Some((q, _)) => {
                    let eta = q.branch.clone().unwrap();
                    let neg = canonical_branch(eta.neg(), &p.base);
                    for br in [eta, neg] {
                        let place = Place { branch: Some(br), kind: PlaceKind::Split, ..p.clone() };
                        push(place, *k, &mut out);
                    }
                }
                None => push(p.clone(), *k, &mut out),
            }
        }
        Self::from_entries(out)
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::from_entries(self.entries.iter().map(|(p, o)| (p.clone(), o * k)).collect())
    }

    pub fn render(&self) -> String {
        let parts: Vec<String> = self.entries.iter().map(|(p, o)| format!("{p} : {o}")).collect();
        format!("[{}]", parts.join("; "))
    }
}

impl<F: ConstField> fmt::Display for Divisor<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct DivisorOptions {
    /// Factor clusters into irreducible places.
    pub refine: bool,
    pub factor_bound: usize,
}

impl Default for DivisorOptions {
    fn default() -> Self {
        DivisorOptions { refine: true, factor_bound: 64 }
    }
}

/// Pairwise coprime squarefree polynomials generating every input multiplicatively.
pub fn gcd_free_basis<F: ConstField>(polys: &[UPoly<F>]) -> Vec<UPoly<F>> {
    let mut basis: Vec<UPoly<F>> = Vec::new();
    for p in polys {
        if p.is_zero() || p.is_constant() {
            continue;
        }
        for (s, _) in p.squarefree_decomposition().1 {
            let mut pending = vec![s.monic()];
            while let Some(q) = pending.pop() {
                if q.is_constant() {
                    continue;
                }
                let hit = basis.iter().position(|b| !b.gcd(&q).is_constant());
                match hit {
                    None => basis.push(q),
                    Some(i) => {
                        let b = basis.swap_remove(i);
                        let g = b.gcd(&q);
                        pending.push(b.exact_div(&g).unwrap());
                        pending.push(q.exact_div(&g).unwrap());
                        pending.push(g);
                    }
                }
            }
        }
    }
    basis.sort_by_cached_key(|b| (b.deg(), b.render("z")));
    basis
}

fn ord_u<F: ConstField>(u: &URatFunc<F>, b: &UPoly<F>) -> Option<i64> {
    if u.is_zero() {
        return None;
    }
    Some(u.num().multiplicity(b) as i64 - u.den().multiplicity(b) as i64)
}

/// Every polynomial of the function, divided by its `b`-part, is coprime to `b`.
fn uniform_at<F: ConstField>(f: &CurveFunction<F>, n: &URatFunc<F>, b: &UPoly<F>) -> bool {
    [f.c(), f.d(), n].iter().all(|u| {
        [u.num(), u.den()].iter().all(|p| {
            if p.is_zero() {
                return true;
            }
            let k = p.multiplicity(b);
            p.exact_div(&b.pow(k)).unwrap().gcd(b).is_constant()
        })
    })
}

fn min_opt(a: Option<i64>, b: Option<i64>) -> i64 {
    match (a, b) {
        (Some(x), Some(y)) => x.min(y),
        (Some(x), None) | (None, Some(x)) => x,
        (None, None) => unreachable!("nonzero function"),
    }
}

/// Local orders above the squarefree `base`, which must be uniform for `f`.
fn local_entries<F: ConstField>(
    f: &CurveFunction<F>,
    norm: &URatFunc<F>,
    base: &UPoly<F>,
    irreducible: bool,
) -> Vec<(Place<F>, i64)> {
    let fz = &f.ctx().f;
    let (oc, od) = (ord_u(f.c(), base), ord_u(f.d(), base));
    let place = |kind, branch| Place { kind, base: base.clone(), branch, irreducible };
    if fz.rem(base).is_zero() {
        let ord = min_opt(oc.map(|o| 2 * o), od.map(|o| 2 * o + 1));
        return vec![(place(PlaceKind::Ramified, None), ord)];
    }
    let v = min_opt(oc, od);
    let on = ord_u(norm, base).expect("nonzero norm");
    let e = on - 2 * v;
    if e == 0 {
        if base.deg() == 1 {
            let theta = base.coeff(0).neg();
            if let Some(s) = fz.eval(&theta).sqrt() {
                let s = URatFunc::constant(s);
                return vec![(place(PlaceKind::Split, Some(s.clone())), v), (place(PlaceKind::Split, Some(s.neg())), v)];
            }
        }
        return vec![(place(PlaceKind::Fiber, None), v)];
    }
    let ratio = f.c().div(f.d()).expect("both parts are nonzero off the fiber case");
    let eta = canonical_branch(ratio.neg(), base);
    let neg = canonical_branch(ratio, base);
    vec![(place(PlaceKind::Split, Some(eta)), v + e), (place(PlaceKind::Split, Some(neg)), v)]
}

fn order_at_infinity<F: ConstField>(f: &CurveFunction<F>) -> i64 {
    let dc = (!f.c().is_zero()).then(|| -2 * f.c().degree());
    let dd = (!f.d().is_zero()).then(|| -2 * f.d().degree() - 3);
    min_opt(dc, dd)
}

/// Candidate bases for finite zeros and poles.
fn basis_for<F: ConstField>(f: &CurveFunction<F>, n: &URatFunc<F>) -> Vec<UPoly<F>> {
    let polys = [f.c().num(), f.c().den(), f.d().num(), f.d().den(), n.num(), n.den(), &f.ctx().f]
        .into_iter()
        .cloned()
        .collect::<Vec<_>>();
    gcd_free_basis(&polys)
}

pub fn divisor_of<F: ConstField>(f: &CurveFunction<F>, opts: DivisorOptions) -> Result<Divisor<F>> {
    if f.is_zero() {
        return Err(CoreError::NotApplicable("divisor of zero".into()));
    }
    let mut entries = Vec::new();
    let n = f.norm();
    for b in basis_for(f, &n) {
        if opts.refine && b.deg() > 1 {
            if b.deg() as usize > opts.factor_bound {
                return Err(AlgebraError::DegreeBoundExceeded { degree: b.deg() as usize, bound: opts.factor_bound }.into());
            }
            for (p, _) in b.factor(opts.factor_bound)?.1 {
                entries.extend(local_entries(f, &n, &p, true));
            }
        } else {
            entries.extend(local_entries(f, &n, &b, b.deg() == 1));
        }
    }
    entries.push((Place::infinity(), order_at_infinity(f)));
    let d = Divisor::from_entries(entries);
    debug_assert_eq!(d.degree(), 0, "principal divisor of degree zero");
    Ok(d)
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlaceWitness<F: ConstField> {
    pub place: Place<F>,
    pub order: i64,
}

impl<F: ConstField> fmt::Display for PlaceWitness<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} : {}", self.place, self.order)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SquareVerdict<F: ConstField> {
    /// Every order is even; over an algebraically closed constant field this is
    /// reported as a square.
    EvenDivisor,
    NonSquare(PlaceWitness<F>),
}

impl<F: ConstField> SquareVerdict<F> {
    pub fn is_square(&self) -> bool {
        matches!(self, SquareVerdict::EvenDivisor)
    }

    pub fn witness(&self) -> Option<&PlaceWitness<F>> {
        match self {
            SquareVerdict::NonSquare(w) => Some(w),
            SquareVerdict::EvenDivisor => None,
        }
    }
}

/// Parity decision on the unrefined divisor; an odd cluster is split into an
/// irreducible place when its degree is within `factor_bound`.
pub fn is_square_over_closure<F: ConstField>(f: &CurveFunction<F>, factor_bound: usize) -> Result<SquareVerdict<F>> {
    if f.is_zero() {
        return Err(CoreError::NotApplicable("divisor of zero".into()));
    }
    match first_odd_entry(f) {
        None => Ok(SquareVerdict::EvenDivisor),
        Some((place, order)) => Ok(SquareVerdict::NonSquare(refine_witness(f, place, order, factor_bound)?)),
    }
}

/// The first place of odd order, infinity first, then bases by degree.
pub fn first_odd_entry<F: ConstField>(f: &CurveFunction<F>) -> Option<(Place<F>, i64)> {
    let inf = order_at_infinity(f);
    if inf % 2 != 0 {
        return Some((Place::infinity(), inf));
    }
    let n = f.norm();
    basis_for(f, &n).into_iter().find_map(|b| local_entries(f, &n, &b, b.deg() == 1).into_iter().find(|(_, o)| o % 2 != 0))
}

/// Splits an odd cluster into an irreducible place when its degree allows.
fn refine_witness<F: ConstField>(
    f: &CurveFunction<F>,
    place: Place<F>,
    order: i64,
    factor_bound: usize,
) -> Result<PlaceWitness<F>> {
    if place.irreducible || place.base.deg() as usize > factor_bound {
        return Ok(PlaceWitness { place, order });
    }
    let (_, fs) = place.base.factor(factor_bound)?;
    let n = f.norm();
    for (p, _) in fs {
        for (q, o) in local_entries(f, &n, &p, true) {
            if o % 2 != 0 {
                return Ok(PlaceWitness { place: q, order: o });
            }
        }
    }
    unreachable!("an odd cluster has an odd factor")
}

/// Whether `f` has order zero at every place above the roots of `b`.
pub fn unit_at<F: ConstField>(f: &CurveFunction<F>, b: &UPoly<F>) -> bool {
    if !integral_at(f, b) {
        return false;
    }
    let (cn, cd, dn, dd) = parts(f);
    let n = cn.mul(&cn).mul(&dd.mul(&dd)).sub(&dn.mul(&dn).mul(&cd.mul(&cd)).mul(&f.ctx().f));
    !n.is_zero() && n.gcd(b).is_constant()
}

fn integral_at<F: ConstField>(f: &CurveFunction<F>, b: &UPoly<F>) -> bool {
    [f.c(), f.d()].iter().all(|u| u.is_zero() || u.den().gcd(b).is_constant())
}

/// `c = cn / cd`, `d = dn / dd`, with zero parts as `0 / 1`.
fn parts<F: ConstField>(f: &CurveFunction<F>) -> (UPoly<F>, UPoly<F>, UPoly<F>, UPoly<F>) {
    (f.c().num().clone(), f.c().den().clone(), f.d().num().clone(), f.d().den().clone())
}

/// Recomputes the order at the witness place from local data alone.
pub fn verify_place_witness<F: ConstField>(f: &CurveFunction<F>, w: &PlaceWitness<F>) -> bool {
    if f.is_zero() || w.order % 2 == 0 {
        return false;
    }
    let p = &w.place;
    if p.kind == PlaceKind::Infinity {
        return order_at_infinity(f) == w.order;
    }
    let n = f.norm();
    if p.base.is_constant() || !p.base.is_squarefree() || !uniform_at(f, &n, &p.base) {
        return false;
    }
    let fz = &f.ctx().f;
    if !fz.rem(&p.base).is_zero() && !fz.gcd(&p.base).is_constant() {
        return false;
    }
    local_entries(f, &n, &p.base, p.irreducible).into_iter().any(|(q, o)| {
        let same = q.kind == p.kind || (q.kind == PlaceKind::Fiber && p.kind == PlaceKind::Split);
        let branch = match (&q.branch, &p.branch) {
            (None, _) => true,
            (Some(a), Some(b)) => same_branch(a, b, &p.base),
            (Some(_), None) => false,
        };
        same && branch && o == w.order
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SquareClassReport<F: ConstField> {
    pub distinct: bool,
    /// For each pair `i < j`, the verdict on `f_i / f_j`.
    pub pairs: Vec<(usize, usize, SquareVerdict<F>)>,
}

/// Whether no ratio `f_i / f_j` has an even divisor. A place of odd order of
/// one function at which the other is a unit settles a pair without forming
/// the ratio.
pub fn square_classes_distinct<F: ConstField>(fs: &[CurveFunction<F>], factor_bound: usize) -> Result<SquareClassReport<F>> {
    if fs.iter().any(|f| f.is_zero()) {
        return Err(CoreError::NotApplicable("zero function".into()));
    }
    let odd: Vec<std::cell::OnceCell<Option<(Place<F>, i64)>>> = fs.iter().map(|_| std::cell::OnceCell::new()).collect();
    let odd_of = |i: usize| odd[i].get_or_init(|| first_odd_entry(&fs[i]));
    let mut pairs = Vec::new();
    for i in 0..fs.len() {
        for j in i + 1..fs.len() {
            pairs.push((i, j, ratio_verdict(&fs[i], &fs[j], || odd_of(i), || odd_of(j), factor_bound)?));
        }
    }
    let distinct = pairs.iter().all(|(_, _, v)| !v.is_square());
    Ok(SquareClassReport { distinct, pairs })
}

fn ratio_verdict<'a, F: ConstField + 'a>(
    f: &CurveFunction<F>,
    g: &CurveFunction<F>,
    odd_f: impl FnOnce() -> &'a Option<(Place<F>, i64)>,
    odd_g: impl FnOnce() -> &'a Option<(Place<F>, i64)>,
    factor_bound: usize,
) -> Result<SquareVerdict<F>> {
    let inf = order_at_infinity(f) - order_at_infinity(g);
    if inf % 2 != 0 {
        return Ok(SquareVerdict::NonSquare(PlaceWitness { place: Place::infinity(), order: inf }));
    }
    let settle = |own: &CurveFunction<F>, other: &CurveFunction<F>, odd: &Option<(Place<F>, i64)>, sign: i64| {
        match odd {
            Some((place, order)) if place.kind != PlaceKind::Infinity && unit_at_place(other, place) => {
                let w = refine_witness(own, place.clone(), *order, factor_bound)?;
                Ok(Some(SquareVerdict::NonSquare(PlaceWitness { place: w.place, order: sign * w.order })))
            }
            _ => Ok::<_, CoreError>(None),
        }
    };
    if let Some(v) = settle(f, g, odd_f(), 1)? {
        return Ok(v);
    }
    if let Some(v) = settle(g, f, odd_g(), -1)? {
        return Ok(v);
    }
    let q = f.div(g).ok_or_else(|| CoreError::NotApplicable("zero function".into()))?;
    is_square_over_closure(&q, factor_bound)
}

/// Whether `f` has order zero at `place` (at both points of a fiber).
pub fn unit_at_place<F: ConstField>(f: &CurveFunction<F>, place: &Place<F>) -> bool {
    match (&place.kind, &place.branch) {
        (PlaceKind::Infinity, _) => order_at_infinity(f) == 0,
        (PlaceKind::Split, Some(eta)) => {
            let b = &place.base;
            if !integral_at(f, b) {
                return false;
            }
            let (cn, cd, dn, dd) = parts(f);
            let v = cn.mul(&dd).mul(eta.den()).add(&dn.mul(&cd).mul(eta.num()));
            !v.is_zero() && v.gcd(b).is_constant()
        }
        _ => unit_at(f, &place.base),
    }
}

/// Replays a witness for `f / g` from local data of `f` and `g`.
pub fn verify_ratio_witness<F: ConstField>(f: &CurveFunction<F>, g: &CurveFunction<F>, w: &PlaceWitness<F>) -> bool {
    if w.order % 2 == 0 {
        return false;
    }
    if w.place.kind == PlaceKind::Infinity {
        return order_at_infinity(f) - order_at_infinity(g) == w.order;
    }
    let neg = PlaceWitness { place: w.place.clone(), order: -w.order };
    if unit_at_place(g, &w.place) {
        return verify_place_witness(f, w);
    }
    if unit_at_place(f, &w.place) {
        return verify_place_witness(g, &neg);
    }
    f.div(g).is_some_and(|q| verify_place_witness(&q, w))
}

/// Sign of the square root of `b` used for the point `(0, ±sqrt b)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RootSign {
    #[default]
    Plus,
    Minus,
}

/// `(0, ±sqrt b)` as a constant point; needs `b` to be a square in `F`.
pub fn root_point<F: ConstField>(ctx: &Arc<FnCtx<F>>, sign: RootSign) -> Result<CurvePoint<CurveFunction<F>>> {
    let s = ctx.b.sqrt().ok_or_else(|| CoreError::NotApplicable("b is not a square in the constant field".into()))?;
    let s = if sign == RootSign::Minus { s.neg() } else { s };
    Ok(CurvePoint::Affine(CurveFunction::constant(ctx, F::zero()), CurveFunction::constant(ctx, s)))
}

/// `x(s (z, h) + r (0, ±sqrt b))` over the curve's function field.
pub fn pullback_x<F: ConstField>(ctx: &Arc<FnCtx<F>>, s: i64, r: i64, sign: RootSign) -> Result<CurveFunction<F>> {
    let b = CurveFunction::curve(ctx).mul(r, &root_point(ctx, sign)?);
    let a = CurveFunction::generic_multiple(ctx, s);
    let x = match (&a, &b) {
        (CurvePoint::Infinity, CurvePoint::Affine(x, _)) | (CurvePoint::Affine(x, _), CurvePoint::Infinity) => x.clone(),
        (CurvePoint::Affine(xa, ya), CurvePoint::Affine(xb, yb)) => {
            let x0 = xb.constant_value().expect("constant point");
            let y0 = yb.constant_value().expect("constant point");
            if y0.is_zero() {
                return pullback_x_group_law(ctx, s, r, sign);
            }
            chord_with_constant(ctx, xa.c(), ya.d(), &x0, &y0)?
        }
        _ => return Err(CoreError::ExceptionalPoint { n: s, r }),
    };
    if x.is_zero() {
        return Err(CoreError::ExceptionalPoint { n: s, r });
    }
    Ok(x)
}

/// `x(A + B)` for `A = (xa, alpha h)` generic and `B = (x0, y0)` constant
/// with `y0 != 0`. Both parts come out in lowest terms without a gcd.
fn chord_with_constant<F: ConstField>(
    ctx: &Arc<FnCtx<F>>,
    xa: &URatFunc<F>,
    alpha: &URatFunc<F>,
    x0: &F,
    y0: &F,
) -> Result<CurveFunction<F>> {
    let (phi, den) = (xa.num(), xa.den());
    let g = phi.sub(&den.scale(x0));
    let g2 = g.mul(&g);
    let den2 = den.mul(den);
    let c_num = phi
        .scale(x0)
        .add(&den.scale(&ctx.a))
        .mul(&phi.add(&den.scale(x0)))
        .add(&den2.scale(&ctx.b.add(&ctx.b)));
    let u = alpha.mul(&URatFunc::from_poly(den2));
    let c = URatFunc::from_coprime(c_num, g2.clone())?;
    let d = URatFunc::from_coprime(u.num().scale(&y0.add(y0).neg()), u.den().mul(&g2))?;
    Ok(CurveFunction::new(ctx, c, d))
}

/// [`pullback_x`] through the generic group law.
pub fn pullback_x_group_law<F: ConstField>(
    ctx: &Arc<FnCtx<F>>,
    s: i64,
    r: i64,
    sign: RootSign,
) -> Result<CurveFunction<F>> {
    let e = CurveFunction::curve(ctx);
    let a = e.mul(s, &CurveFunction::generic_point(ctx));
    let b = e.mul(r, &root_point(ctx, sign)?);
    match e.add(&a, &b) {
        CurvePoint::Affine(x, _) if !x.is_zero() => Ok(x),
        _ => Err(CoreError::ExceptionalPoint { n: s, r }),
    }
}
