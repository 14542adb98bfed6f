//! Isotropic vectors of `a y^2 + b z^2 - w^2` over the function field of the
//! curve, with constants in a quadratic tower grown on demand.
//!
//! The search is bounded: a closed form for `a = b`, square coefficients, and
//! a pencil search `A Y^2 + c B = V^2` over small multipliers `Y`. Failure is
//! a value; when the coefficients are functions of `z` alone it comes with a
//! `p`-adic local obstruction if one is found for the tower reached.

use std::fmt;
use std::sync::Arc;

use h10_algebra::zp::{self, invmod, legendre, mulmod, sqrt_mod};
use h10_algebra::{ConstField, FieldElement, Rational, Tower, TowerElem, UPoly, URatFunc};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::cfunc::{CurveFunction, FnCtx};

type T = TowerElem;
pub type TFn = CurveFunction<T>;

/// `a y^2 + b z^2 = w^2` over the curve's function field.
#[derive(Clone, Debug, PartialEq)]
pub struct ConicInstance {
    pub a: TFn,
    pub b: TFn,
    /// Free-form link to the instance this conic came from.
    pub tag: String,
}

impl ConicInstance {
    pub fn new(a: TFn, b: TFn, tag: impl Into<String>) -> Option<Self> {
        (!a.is_zero() && !b.is_zero()).then(|| ConicInstance { a, b, tag: tag.into() })
    }

    pub fn ctx(&self) -> &Arc<FnCtx<T>> {
        self.a.ctx()
    }

    /// `a y^2 + b z^2 - w^2`.
    pub fn form(&self, y: &TFn, z: &TFn, w: &TFn) -> TFn {
        self.a.mul(&y.square()).add(&self.b.mul(&z.square())).sub(&w.square())
    }

    fn bilinear(&self, p: &[TFn; 3], d: &[TFn; 3]) -> TFn {
        self.a.mul(&p[0].mul(&d[0])).add(&self.b.mul(&p[1].mul(&d[1]))).sub(&p[2].mul(&d[2]))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConicBounds {
    /// Largest degree of a multiplier polynomial in the pencil search.
    pub degree_bound: usize,
    /// Square roots the search may adjoin beyond the starting tower.
    pub max_tower_extensions: usize,
    pub step_budget: u64,
    /// Primes tried when looking for a local obstruction.
    pub obstruction_primes: usize,
}

impl Default for ConicBounds {
    fn default() -> Self {
        ConicBounds { degree_bound: 6, max_tower_extensions: 2, step_budget: 20_000, obstruction_primes: 400 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// `y = (1/a + 1)/2`, `z = -i (1/a - 1)/2`, `w = 1` for `a = b`.
    EqualCoefficients,
    SquareCoefficient,
    /// `A Y^2 + c B = V^2` with the recorded multiplier `Y`.
    Pencil { multiplier: String, swapped: bool },
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::EqualCoefficients => write!(f, "equal coefficients"),
            Strategy::SquareCoefficient => write!(f, "square coefficient"),
            Strategy::Pencil { multiplier, swapped } => {
                write!(f, "pencil, multiplier {multiplier}{}", if *swapped { ", roles swapped" } else { "" })
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct ConicSolution {
    pub y: TFn,
    pub z: TFn,
    pub w: TFn,
    /// `y z w != 0`.
    pub strong: bool,
    /// Constants the solution lives over.
    pub tower: Arc<Tower>,
    pub strategy: Strategy,
}

impl ConicSolution {
    /// Radicands adjoined, bottom up, so the tower can be rebuilt for replay.
    pub fn trail(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut t = Some(&self.tower);
        while let Some(tt) = t {
            if let Some(r) = tt.radicand() {
                out.push(format!("{} = sqrt({})", tt.name(), r));
            }
            t = tt.parent();
        }
        out.reverse();
        out
    }

    /// `(y / w, z / w)`, a solution of `a y^2 + b z^2 = 1`.
    pub fn dehomogenize(&self) -> Option<(TFn, TFn)> {
        Some((self.y.div(&self.w)?, self.z.div(&self.w)?))
    }

    pub fn scaled(&self, l: &TFn) -> ConicSolution {
        ConicSolution { y: self.y.mul(l), z: self.z.mul(l), w: self.w.mul(l), ..self.clone() }
    }
}

impl fmt::Display for ConicSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y = {}, z = {}, w = {} [{}; tower {}]", self.y, self.z, self.w, self.strategy, self.tower)
    }
}

/// Exact substitution check, including the strong flag when set.
pub fn verify_solution(inst: &ConicInstance, sol: &ConicSolution) -> bool {
    let nonzero = !(sol.y.is_zero() && sol.z.is_zero() && sol.w.is_zero());
    let strong = !sol.strong || !(sol.y.is_zero() || sol.z.is_zero() || sol.w.is_zero());
    nonzero && strong && inst.form(&sol.y, &sol.z, &sol.w).is_zero()
}

#[derive(Clone, Debug)]
pub enum ConicOutcome {
    Solved(ConicSolution),
    NotFoundWithinBounds(SearchReport),
}

#[derive(Clone, Debug)]
pub struct SearchReport {
    pub steps: u64,
    pub budget_exhausted: bool,
    pub attempts: Vec<String>,
    /// Tower the search ended on.
    pub tower: Arc<Tower>,
    pub obstruction: Option<LocalObstruction>,
}

impl fmt::Display for SearchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "not found within bounds after {} steps over {}", self.steps, self.tower)?;
        if self.budget_exhausted {
            write!(f, " (step budget exhausted)")?;
        }
        if let Some(o) = &self.obstruction {
            write!(f, "; {o}")?;
        }
        Ok(())
    }
}

struct Search {
    tower: Arc<Tower>,
    base_level: usize,
    bounds: ConicBounds,
    steps: u64,
    attempts: Vec<String>,
}

impl Search {
    fn tick(&mut self) -> bool {
        self.steps += 1;
        self.steps <= self.bounds.step_budget
    }

    /// A square root of `c`, adjoining one when the budget allows.
    fn sqrt(&mut self, c: &T) -> Option<T> {
        let c = self.tower.embed(c);
        if let Some(r) = c.sqrt() {
            return Some(r);
        }
        if self.tower.level() >= self.base_level + self.bounds.max_tower_extensions {
            return None;
        }
        let (core, s) = square_free_part(&c);
        let t = self.tower.adjoin_sqrt(&core).ok()?;
        self.tower = t.clone();
        Some(t.generator().mul(&s))
    }
}

/// `c = s^2 core` with the integer square part of a rational `c` pulled out.
fn square_free_part(c: &T) -> (T, T) {
    let Some(q) = c.as_rational() else {
        return (c.clone(), T::one());
    };
    let (n, d) = (q.numer() * q.denom(), q.denom().clone());
    let (sq, core) = split_square(&n);
    let s = Rational::new(sq, d);
    (T::rational(Rational::from_integer(core)), T::rational(s))
}

/// `n = sq^2 core` by trial division with small primes.
fn split_square(n: &BigInt) -> (BigInt, BigInt) {
    let mut core = n.clone();
    let mut sq = BigInt::one();
    for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        let p2 = BigInt::from(p * p);
        while !core.is_zero() && (&core % &p2).is_zero() {
            core /= &p2;
            sq *= p;
        }
    }
    (sq, core)
}

/// `f = A S^2` with `A` a polynomial in `z`, for `f` a function of `z` alone.
/// Factors of the curve polynomial are absorbed into `S` through `h`.
pub fn square_class(f: &TFn) -> Option<(UPoly<T>, TFn)> {
    if !f.d().is_zero() || f.is_zero() {
        return None;
    }
    let ctx = f.ctx();
    let (num, den) = (f.c().num(), f.c().den());
    let mut a = UPoly::constant(T::one());
    let mut s = TFn::from_z(ctx, URatFunc::from_poly(den.clone()).inv()?);
    for p in [num, den] {
        let (lc, parts) = p.squarefree_decomposition();
        a = a.scale(&lc);
        for (g, e) in parts {
            if e % 2 == 1 {
                a = a.mul(&g);
            }
            let half = TFn::from_z(ctx, URatFunc::from_poly(g.pow(e / 2)));
            s = s.mul(&half);
        }
    }
    if !a.is_constant() && a.rem(&ctx.f).is_zero() {
        a = a.exact_div(&ctx.f).ok()?;
        s = s.mul(&TFn::h(ctx));
    }
    Some((a, s))
}

/// Monic `U` of degree `deg g / 2` with `deg(g - U^2) < deg g / 2`, for monic `g` of even degree.
fn sqrt_top(g: &UPoly<T>) -> UPoly<T> {
    let e = (g.deg() / 2) as usize;
    let mut u = UPoly::monomial(T::one(), e);
    let half = T::from_rational(&Rational::new(1.into(), 2.into()));
    for k in 1..=e {
        let c = g.sub(&u.mul(&u)).coeff(2 * e - k);
        if !c.is_zero() {
            u = u.add(&UPoly::monomial(c.mul(&half), e - k));
        }
    }
    u
}

/// Monic multipliers of degree at most `deg` with coefficients in `{-1, 0, 1}`.
fn multipliers(deg: usize) -> impl Iterator<Item = UPoly<T>> {
    (0..=deg).flat_map(|d| {
        (0..3usize.pow(d as u32)).map(move |mut code| {
            let mut c = Vec::with_capacity(d + 1);
            for _ in 0..d {
                c.push(T::from_int((code % 3) as i64 - 1));
                code /= 3;
            }
            c.push(T::one());
            UPoly::from_coeffs(c)
        })
    })
}

pub fn solve_conic(inst: &ConicInstance, tower: &Arc<Tower>, bounds: ConicBounds) -> ConicOutcome {
    let mut s = Search { tower: tower.clone(), base_level: tower.level(), bounds, steps: 0, attempts: Vec::new() };
    let found = square_case(inst, &mut s)
        .or_else(|| equal_case(inst, &mut s))
        .or_else(|| pencil_case(inst, &mut s))
        .and_then(|p| strengthen(inst, p));
    match found {
        Some(sol) if verify_solution(inst, &sol) => ConicOutcome::Solved(sol),
        _ => {
            let obstruction = find_obstruction(inst, &s.tower, bounds.obstruction_primes);
            ConicOutcome::NotFoundWithinBounds(SearchReport {
                steps: s.steps,
                budget_exhausted: s.steps > bounds.step_budget,
                attempts: s.attempts,
                tower: s.tower,
                obstruction,
            })
        }
    }
}

fn raw(y: TFn, z: TFn, w: TFn, tower: &Arc<Tower>, strategy: Strategy) -> ConicSolution {
    ConicSolution { y, z, w, strong: false, tower: tower.clone(), strategy }
}

fn equal_case(inst: &ConicInstance, s: &mut Search) -> Option<ConicSolution> {
    if inst.a != inst.b {
        return None;
    }
    s.tick();
    let saved = s.tower.clone();
    let Some(i) = s.sqrt(&T::from_int(-1)) else {
        s.attempts.push("equal coefficients: no room to adjoin sqrt(-1)".into());
        return None;
    };
    let ctx = inst.ctx();
    let one = TFn::constant(ctx, T::one());
    let half = TFn::constant(ctx, T::from_rational(&Rational::new(1.into(), 2.into())));
    let inv = inst.a.inv()?;
    let y = inv.add(&one).mul(&half);
    let z = TFn::constant(ctx, i.neg()).mul(&inv.sub(&one)).mul(&half);
    let sol = raw(y, z, one, &s.tower, Strategy::EqualCoefficients);
    if verify_solution(inst, &sol) {
        Some(sol)
    } else {
        s.tower = saved;
        None
    }
}

fn square_case(inst: &ConicInstance, s: &mut Search) -> Option<ConicSolution> {
    let ctx = inst.ctx();
    for (coef, swapped) in [(&inst.a, false), (&inst.b, true)] {
        s.tick();
        let Some((a, sq)) = square_class(coef) else { continue };
        if !a.is_constant() {
            continue;
        }
        let saved = s.tower.clone();
        let Some(r) = s.sqrt(&a.coeff(0)) else {
            s.attempts.push("square coefficient: constant class needs an extension beyond the bound".into());
            continue;
        };
        // coef * (1 / (r sq))^2 = 1
        let Some(v) = sq.mul(&TFn::constant(ctx, r)).inv() else {
            s.tower = saved;
            continue;
        };
        let zero = TFn::constant(ctx, T::zero());
        let one = TFn::constant(ctx, T::one());
        let (y, z) = if swapped { (zero, v) } else { (v, zero) };
        return Some(raw(y, z, one, &s.tower, Strategy::SquareCoefficient));
    }
    None
}

/// `G + c H = V^2` for a constant `c`, with `deg G > deg H`.
fn pencil_constant(g: &UPoly<T>, h: &UPoly<T>, s: &mut Search) -> Option<(UPoly<T>, T)> {
    if g.deg() % 2 != 0 || g.deg() <= h.deg() {
        return None;
    }
    let saved = s.tower.clone();
    let lc = g.lc();
    let r = s.sqrt(&lc)?;
    let v = sqrt_top(&g.scale(&lc.inv()?)).scale(&r);
    let rem = v.mul(&v).sub(g);
    let ok = if rem.is_zero() {
        Some((v.clone(), T::zero()))
    } else if rem.deg() == h.deg() {
        let c = rem.lc().div(&h.lc())?;
        (rem == h.scale(&c)).then_some((v, c))
    } else {
        None
    };
    if ok.is_none() {
        s.tower = saved;
    }
    ok
}

fn pencil_case(inst: &ConicInstance, s: &mut Search) -> Option<ConicSolution> {
    let ctx = inst.ctx().clone();
    let (a, sa) = square_class(&inst.a)?;
    let (b, sb) = square_class(&inst.b)?;
    let lift = |p: &UPoly<T>| TFn::from_z(&ctx, URatFunc::from_poly(p.clone()));
    for mult in multipliers(s.bounds.degree_bound.min(3)) {
        for swapped in [false, true] {
            if !s.tick() {
                s.attempts.push("pencil: step budget exhausted".into());
                return None;
            }
            let (g0, h) = if swapped { (&b, &a) } else { (&a, &b) };
            let g = g0.mul(&mult).mul(&mult);
            if g.deg() > 2 * s.bounds.degree_bound as i64 {
                continue;
            }
            let saved = s.tower.clone();
            let Some((v, c)) = pencil_constant(&g, h, s) else { continue };
            // G0 Y^2 + c H = V^2 with Y = mult; the H-side takes sqrt(c).
            let Some(rc) = (if c.is_zero() { Some(T::zero()) } else { s.sqrt(&c) }) else {
                s.tower = saved;
                continue;
            };
            let yg = lift(&mult);
            let zh = TFn::constant(&ctx, rc);
            let (ya, zb) = if swapped { (zh, yg) } else { (yg, zh) };
            let y = ya.div(&sa)?;
            let z = zb.div(&sb)?;
            let sol = raw(y, z, lift(&v), &s.tower, Strategy::Pencil { multiplier: mult.render("z"), swapped });
            if verify_solution(inst, &sol) {
                return Some(sol);
            }
            s.tower = saved;
        }
    }
    s.attempts.push(format!("pencil: no multiplier of degree <= {} works", s.bounds.degree_bound.min(3)));
    None
}

/// Reflects a solution with a zero coordinate until `y z w != 0`.
fn strengthen(inst: &ConicInstance, sol: ConicSolution) -> Option<ConicSolution> {
    let is_strong = |p: &[TFn; 3]| p.iter().all(|c| !c.is_zero());
    let p = [sol.y.clone(), sol.z.clone(), sol.w.clone()];
    if is_strong(&p) {
        return Some(normalize(ConicSolution { strong: true, ..sol }));
    }
    let ctx = inst.ctx();
    let k = |n: i64| TFn::constant(ctx, T::from_int(n));
    for d in [[2, 1, 0], [1, 2, 0], [1, 1, 0], [1, 0, 1], [0, 1, 1], [1, 1, 1], [2, 1, 1], [1, 2, 1], [1, 1, 2], [3, 1, 2]] {
        let d = [k(d[0]), k(d[1]), k(d[2])];
        let qd = inst.form(&d[0], &d[1], &d[2]);
        if qd.is_zero() {
            continue;
        }
        let two_b = inst.bilinear(&p, &d).mul(&k(2));
        let r: Vec<TFn> = (0..3).map(|i| p[i].mul(&qd).sub(&two_b.mul(&d[i]))).collect();
        let r = [r[0].clone(), r[1].clone(), r[2].clone()];
        if is_strong(&r) {
            let out = ConicSolution { y: r[0].clone(), z: r[1].clone(), w: r[2].clone(), strong: true, ..sol };
            return Some(normalize(out));
        }
    }
    None
}

/// Scales to `w = 1` and flips the signs of `y` and `z` to a positive leading coefficient.
fn normalize(sol: ConicSolution) -> ConicSolution {
    let Some(inv) = sol.w.inv() else { return sol };
    let mut out = sol.scaled(&inv);
    let positive = |f: &TFn| {
        let lead = if f.c().is_zero() { f.d().num().lc() } else { f.c().num().lc() };
        lead.coords().iter().find(|c| !Zero::is_zero(*c)).map_or(true, |c| c.is_positive())
    };
    if !positive(&out.y) {
        out.y = out.y.neg();
    }
    if !positive(&out.z) {
        out.z = out.z.neg();
    }
    out
}

/// Evidence that the conic has no nontrivial zero over `tower(E)`: the tower
/// embeds into `Q_p`, one coefficient has odd order at a `Q_p`-rational point
/// of `E` where the other is a unit whose residue is not a square mod `p`.
#[derive(Clone, Debug)]
pub struct LocalObstruction {
    pub prime: u64,
    /// Image in `F_p` of each tower generator, bottom up.
    pub generator_images: Vec<u64>,
    /// `false` when `a` has the odd order, `true` when `b` does.
    pub odd_is_b: bool,
    /// Factor of the odd-order coefficient vanishing at the point.
    pub factor: UPoly<T>,
    pub multiplicity: u32,
    /// `z` at the point, a simple root of `factor` mod `p`.
    pub root: u64,
    /// `h` at the point mod `p`.
    pub h_value: u64,
    /// The other coefficient at the point mod `p`.
    pub residue: u64,
    pub tower: Arc<Tower>,
}

impl fmt::Display for LocalObstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "local obstruction at p = {}: {} has order {} at z = {} (mod p) where {} = {} is a non-residue, over {}",
            self.prime,
            if self.odd_is_b { "b" } else { "a" },
            self.multiplicity,
            self.root,
            if self.odd_is_b { "a" } else { "b" },
            self.residue,
            self.tower
        )
    }
}

fn rational_mod(q: &Rational, p: u64) -> Option<u64> {
    let d = zp::bigint_mod(q.denom(), p);
    Some(mulmod(zp::bigint_mod(q.numer(), p), invmod(d, p)?, p))
}

/// Image of a tower element under generator images.
pub fn elem_mod(e: &T, images: &[u64], p: u64) -> Option<u64> {
    let mut acc = 0u64;
    for (idx, c) in e.coords().iter().enumerate() {
        if Zero::is_zero(c) {
            continue;
        }
        let mut term = rational_mod(c, p)?;
        for (j, img) in images.iter().enumerate() {
            if idx >> j & 1 == 1 {
                term = mulmod(term, *img, p);
            }
        }
        if idx >> images.len() != 0 {
            return None;
        }
        acc = zp::addmod(acc, term, p);
    }
    Some(acc)
}

/// Images of the generators of `tower` in `F_p`, when every radicand is a nonzero square.
pub fn tower_images(tower: &Arc<Tower>, p: u64) -> Option<Vec<u64>> {
    let mut levels = Vec::new();
    let mut t = Some(tower);
    while let Some(tt) = t {
        if let Some(r) = tt.radicand() {
            levels.push(r.clone());
        }
        t = tt.parent();
    }
    levels.reverse();
    let mut images = Vec::new();
    for r in levels {
        let v = elem_mod(&r, &images, p)?;
        if v == 0 {
            return None;
        }
        images.push(sqrt_mod(v, p)?);
    }
    Some(images)
}

fn poly_mod(f: &UPoly<T>, images: &[u64], p: u64) -> Option<Vec<u64>> {
    f.coeffs().iter().map(|c| elem_mod(c, images, p)).collect()
}

fn eval_mod(c: &[u64], x: u64, p: u64) -> u64 {
    c.iter().rev().fold(0, |acc, &k| zp::addmod(mulmod(acc, x, p), k, p))
}

fn derivative_mod(c: &[u64], p: u64) -> Vec<u64> {
    c.iter().enumerate().skip(1).map(|(i, &k)| mulmod(k, i as u64 % p, p)).collect()
}

/// Searches the first `primes` odd primes for a [`LocalObstruction`].
pub fn find_obstruction(inst: &ConicInstance, tower: &Arc<Tower>, primes: usize) -> Option<LocalObstruction> {
    if !inst.a.d().is_zero() || !inst.b.d().is_zero() {
        return None;
    }
    let sides = [(&inst.a, &inst.b, false), (&inst.b, &inst.a, true)];
    let odd_factors: Vec<Vec<(UPoly<T>, u32)>> = sides
        .iter()
        .map(|(f, _, _)| {
            let mut v = Vec::new();
            for p in [f.c().num(), f.c().den()] {
                v.extend(p.squarefree_decomposition().1.into_iter().filter(|(_, e)| e % 2 == 1));
            }
            v
        })
        .collect();
    for p in zp::small_primes().take(primes) {
        let Some(images) = tower_images(tower, p) else { continue };
        for (si, (f, g, odd_is_b)) in sides.iter().enumerate() {
            for (factor, e) in &odd_factors[si] {
                let cand = LocalObstruction {
                    prime: p,
                    generator_images: images.clone(),
                    odd_is_b: *odd_is_b,
                    factor: factor.clone(),
                    multiplicity: *e,
                    root: 0,
                    h_value: 0,
                    residue: 0,
                    tower: tower.clone(),
                };
                let Some(gm) = poly_mod(factor, &images, p) else { continue };
                for x in 0..p {
                    if eval_mod(&gm, x, p) != 0 {
                        continue;
                    }
                    let mut c = LocalObstruction { root: x, ..cand.clone() };
                    if let Some((h, r)) = check_point(f, g, &c) {
                        c.h_value = h;
                        c.residue = r;
                        return Some(c);
                    }
                }
            }
        }
    }
    None
}

/// Conditions at the point `z = root`; returns `(h, residue)` when they hold.
fn check_point(f: &TFn, g: &TFn, c: &LocalObstruction) -> Option<(u64, u64)> {
    let (p, x, im) = (c.prime, c.root, &c.generator_images);
    let gm = poly_mod(&c.factor, im, p)?;
    if eval_mod(&gm, x, p) != 0 || eval_mod(&derivative_mod(&gm, p), x, p) == 0 {
        return None;
    }
    let ge = c.factor.pow(c.multiplicity);
    let (num, den) = (f.c().num(), f.c().den());
    let cof = if let Ok(q) = num.exact_div(&ge) {
        q.mul(den)
    } else {
        den.exact_div(&ge).ok()?.mul(num)
    };
    if cof.multiplicity(&c.factor) != 0 || eval_mod(&poly_mod(&cof, im, p)?, x, p) == 0 {
        return None;
    }
    let fv = eval_mod(&poly_mod(&f.ctx().f, im, p)?, x, p);
    if fv == 0 {
        return None;
    }
    let h = sqrt_mod(fv, p)?;
    let gn = eval_mod(&poly_mod(g.c().num(), im, p)?, x, p);
    let gd = eval_mod(&poly_mod(g.c().den(), im, p)?, x, p);
    if gn == 0 || gd == 0 {
        return None;
    }
    let r = mulmod(gn, invmod(gd, p)?, p);
    (legendre(r, p) == -1).then_some((h, r))
}

/// Independent replay of a [`LocalObstruction`] against the instance.
pub fn verify_obstruction(inst: &ConicInstance, o: &LocalObstruction) -> bool {
    let p = o.prime;
    if p == 2 || !zp::is_prime_u64(p) || o.multiplicity % 2 == 0 {
        return false;
    }
    if !inst.a.d().is_zero() || !inst.b.d().is_zero() || !o.tower.verify() {
        return false;
    }
    // Every radicand must map to the square of the recorded image.
    let mut levels = Vec::new();
    let mut t = Some(&o.tower);
    while let Some(tt) = t {
        if let Some(r) = tt.radicand() {
            levels.push(r.clone());
        }
        t = tt.parent();
    }
    levels.reverse();
    if levels.len() != o.generator_images.len() {
        return false;
    }
    for (j, r) in levels.iter().enumerate() {
        let img = o.generator_images[j];
        match elem_mod(r, &o.generator_images[..j], p) {
            Some(v) if v != 0 && v == mulmod(img, img, p) => {}
            _ => return false,
        }
    }
    let (f, g) = if o.odd_is_b { (&inst.b, &inst.a) } else { (&inst.a, &inst.b) };
    let ge = o.factor.pow(o.multiplicity);
    let divides = |u: &UPoly<T>| u.exact_div(&ge).map(|q| q.multiplicity(&o.factor) == 0).unwrap_or(false);
    if !(divides(f.c().num()) || divides(f.c().den())) {
        return false;
    }
    match check_point(f, g, o) {
        Some((h, r)) => {
            let fv = poly_mod(&f.ctx().f, &o.generator_images, p).map(|c| eval_mod(&c, o.root, p));
            fv == Some(mulmod(h, h, p)) && h == o.h_value && r == o.residue
        }
        None => false,
    }
}

/// The curve's function field over the tower, with the default constants lifted.
pub fn tower_ctx(a: &Rational, b: &Rational) -> Arc<FnCtx<T>> {
    FnCtx::new(T::rational(a.clone()), T::rational(b.clone()))
}

/// Lifts a function with rational constants.
pub fn lift_fn(ctx: &Arc<FnCtx<T>>, f: &CurveFunction<Rational>) -> TFn {
    f.map(ctx, |q| T::rational(q.clone()))
}
