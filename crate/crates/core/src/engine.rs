//! The divisibility engine: the quadratic equations attached to
//! `(m,1) | (n,r)`, their refutation by valuations when `n != m r`, their
//! certification by conics when `n = m r`, and the existential definitions of
//! `W` and `|` in the pair language.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use h10_algebra::{FieldElement, Rational, Tower};

use crate::cfunc::{CurveFunction, FnCtx};
use crate::conic::{lift_fn, solve_conic, tower_ctx, verify_solution, ConicBounds, ConicInstance, ConicOutcome, ConicSolution, SearchReport};
use crate::curve::{CurveParams, CurvePoint};
use crate::divisor::{is_square_over_closure, pullback_x, square_classes_distinct, RootSign, SquareClassReport, SquareVerdict};
use crate::error::{CoreError, Result};
use crate::lfield::{point_combination, x_combination, LElement, LExpr, LTower};
use crate::sformula::{Atom, PairTerm, SFormula, SFormulaTemplate};
use crate::valuation::{RefutationWitness, Valuer};

type Q = Rational;
type CF = CurveFunction<Q>;

#[derive(Clone, Debug, PartialEq)]
pub struct EngineConfig {
    /// Degree of the top field over the field generated by the two points.
    pub alpha: u32,
    /// Integers `m` whose valuation may ramify; excluded as moduli.
    pub exceptional: BTreeSet<i64>,
    pub m0: i64,
    pub d: i64,
    pub params: CurveParams,
    pub sign: RootSign,
    pub factor_bound: usize,
    pub conic: ConicBounds,
    /// Largest `|n|`, `|r|` accepted by encode and decode.
    pub window: i64,
    /// Whether refutation also reports the square classes of all residues.
    pub square_classes: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            alpha: 1,
            exceptional: BTreeSet::new(),
            m0: 1,
            d: 1,
            params: CurveParams::default(),
            sign: RootSign::Plus,
            factor_bound: 64,
            conic: ConicBounds::default(),
            window: 12,
            square_classes: true,
        }
    }
}

impl EngineConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |s: String| Err(CoreError::InvalidConfig(s));
        if self.alpha < 1 {
            return bad("alpha must be at least 1".into());
        }
        if self.m0 == 0 {
            return bad("m0 = 0 makes the definition of W degenerate".into());
        }
        if self.exceptional.contains(&self.m0) {
            return bad(format!("m0 = {} lies in the exceptional set", self.m0));
        }
        if self.d < 1 {
            return bad("d must be positive".into());
        }
        if let Some(u) = self.exceptional.iter().find(|u| (**u - self.m0).abs() >= self.d) {
            return bad(format!("{u} lies outside ({} - d, {} + d)", self.m0, self.m0));
        }
        if self.window < 0 {
            return bad("negative window".into());
        }
        Ok(())
    }

    /// Multipliers `2^0, ..., 2^alpha`.
    pub fn multipliers(&self) -> Vec<i64> {
        (0..=self.alpha).map(|j| 1i64 << j).collect()
    }
}

/// The statement `(m,1) | (n,r)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DivInstance {
    pub m: i64,
    pub n: i64,
    pub r: i64,
}

impl DivInstance {
    pub fn new(m: i64, n: i64, r: i64) -> Self {
        DivInstance { m, n, r }
    }

    pub fn holds(&self) -> bool {
        self.n == self.m * self.r
    }

    pub fn s(&self) -> i64 {
        self.n - self.m * self.r
    }
}

impl fmt::Display for DivInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},1) | ({},{})", self.m, self.n, self.r)
    }
}

/// `x(k n P1 + k r P2) y^2 + x(m P1 + P2) z^2 = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Equation {
    pub k: i64,
    pub a: LElement,
    pub b: LElement,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquationBundle {
    pub instance: DivInstance,
    pub equations: Vec<Equation>,
}

fn check_modulus(cfg: &EngineConfig, m: i64) -> Result<()> {
    if cfg.exceptional.contains(&m) {
        return Err(CoreError::NotApplicable(format!("m = {m} lies in the exceptional set")));
    }
    Ok(())
}

pub fn build_equations(cfg: &EngineConfig, t: &Arc<LTower>, inst: DivInstance) -> Result<EquationBundle> {
    cfg.validate()?;
    check_modulus(cfg, inst.m)?;
    let b = x_combination(t, inst.m, 1)?;
    let mut equations = Vec::new();
    for k in cfg.multipliers() {
        let a = x_combination(t, k * inst.n, k * inst.r)?;
        equations.push(Equation { k, a, b: b.clone() });
    }
    Ok(EquationBundle { instance: inst, equations })
}

#[derive(Clone, Debug)]
pub enum Verdict {
    Refuted {
        k: i64,
        witness: RefutationWitness,
        /// Square classes of the residues of every equation of the bundle.
        square_classes: Option<SquareClassReport<Q>>,
    },
    Certified(Vec<(i64, ConicSolution)>),
    Inconclusive {
        reason: String,
        report: Option<SearchReport>,
    },
}

impl Verdict {
    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted { .. })
    }

    pub fn is_certified(&self) -> bool {
        matches!(self, Verdict::Certified(_))
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Refuted { k, witness, square_classes } => {
                write!(f, "refuted at k = {k}: {witness}")?;
                if let Some(r) = square_classes {
                    write!(f, "; residue square classes distinct: {}", r.distinct)?;
                }
                Ok(())
            }
            Verdict::Certified(sols) => {
                writeln!(f, "certified")?;
                for (k, s) in sols {
                    writeln!(f, "  k = {k}: {s}")?;
                }
                Ok(())
            }
            Verdict::Inconclusive { reason, report } => {
                write!(f, "inconclusive: {reason}")?;
                if let Some(r) = report {
                    write!(f, "\n{r}")?;
                }
                Ok(())
            }
        }
    }
}

/// Runs refutations and certifications, sharing the expensive intermediate
/// results between instances.
pub struct Engine {
    cfg: EngineConfig,
    tower: Arc<LTower>,
    /// `w_m(x(m P1 + P2))` per `m`.
    modulus_orders: Mutex<HashMap<i64, i64>>,
    /// Square verdicts on residues, keyed by `(k s, k r)` and checked against
    /// the residue actually computed before reuse.
    verdicts: Mutex<HashMap<(i64, i64), (CF, SquareVerdict<Q>)>>,
    /// Certified bundles per `r`: with `n = m r` the conics only depend on `r`.
    conics: Mutex<HashMap<i64, Verdict>>,
}

impl Engine {
    pub fn new(cfg: EngineConfig) -> Result<Self> {
        cfg.validate()?;
        let tower = LTower::new(cfg.params.clone());
        Ok(Engine {
            cfg,
            tower,
            modulus_orders: Mutex::new(HashMap::new()),
            verdicts: Mutex::new(HashMap::new()),
            conics: Mutex::new(HashMap::new()),
        })
    }

    pub fn config(&self) -> &EngineConfig {
        &self.cfg
    }

    pub fn tower(&self) -> &Arc<LTower> {
        &self.tower
    }

    pub fn build_equations(&self, inst: DivInstance) -> Result<EquationBundle> {
        build_equations(&self.cfg, &self.tower, inst)
    }

    fn modulus_order(&self, v: &Valuer) -> Result<i64> {
        if let Some(o) = self.modulus_orders.lock().unwrap().get(&v.m()) {
            return Ok(*o);
        }
        let o = v.w(&LExpr::xcomb(v.m(), 1))?.order;
        self.modulus_orders.lock().unwrap().insert(v.m(), o);
        Ok(o)
    }

    fn verdict(&self, key: (i64, i64), residue: &CF) -> Result<SquareVerdict<Q>> {
        if let Some((f, v)) = self.verdicts.lock().unwrap().get(&key) {
            if f == residue {
                return Ok(v.clone());
            }
        }
        let v = is_square_over_closure(residue, self.cfg.factor_bound)?;
        self.verdicts.lock().unwrap().insert(key, (residue.clone(), v.clone()));
        Ok(v)
    }

    /// Proves that the bundle has no solution, for `n != m r`.
    pub fn refute(&self, inst: DivInstance) -> Result<Verdict> {
        check_modulus(&self.cfg, inst.m)?;
        if inst.holds() {
            return Err(CoreError::NotApplicable(format!("{inst} holds; nothing to refute")));
        }
        let inconclusive = |e: CoreError| Ok(Verdict::Inconclusive { reason: e.to_string(), report: None });
        let v = match Valuer::new(&self.tower, inst.m, self.cfg.sign) {
            Ok(v) => v,
            Err(e) => return inconclusive(e),
        };
        let order_b = match self.modulus_order(&v) {
            Ok(o) => o,
            Err(e) => return inconclusive(e),
        };
        if order_b % 2 == 0 {
            return inconclusive(CoreError::NotApplicable(format!("w(x(m P1 + P2)) = {order_b} is even")));
        }
        let mut found = None;
        for k in self.cfg.multipliers() {
            let (kn, kr) = (k * inst.n, k * inst.r);
            let wa = match v.w(&LExpr::xcomb(kn, kr)) {
                Ok(w) => w,
                Err(e) => return inconclusive(e),
            };
            if wa.order != 0 {
                continue;
            }
            let key = (kn - inst.m * kr, kr);
            match self.verdict(key, &wa.unit_residue) {
                Ok(SquareVerdict::NonSquare(place)) => {
                    let witness = RefutationWitness { m: inst.m, k, order_a: 0, order_b, residue: wa.unit_residue, place };
                    found = Some((k, witness));
                    break;
                }
                Ok(SquareVerdict::EvenDivisor) => {}
                Err(e) => return inconclusive(e),
            }
        }
        let Some((k, witness)) = found else {
            return inconclusive(CoreError::NotApplicable("every residue has an even divisor".into()));
        };
        let square_classes = if self.cfg.square_classes {
            let residues: Result<Vec<CF>> = self
                .cfg
                .multipliers()
                .into_iter()
                .map(|k| pullback_x(self.tower.curve_ctx(), k * inst.s(), k * inst.r, self.cfg.sign))
                .collect();
            match residues.and_then(|rs| square_classes_distinct(&rs, self.cfg.factor_bound)) {
                Ok(r) => Some(r),
                Err(e) => return inconclusive(e),
            }
        } else {
            None
        };
        Ok(Verdict::Refuted { k, witness, square_classes })
    }

    /// The conics of the bundle for `n = m r`, over the curve traced by
    /// `Q = m P1 + P2`: `x(k r Q) y^2 + x(Q) z^2 = 1`.
    pub fn conic_instances(&self, r: i64) -> Result<Vec<(i64, ConicInstance)>> {
        let p = &self.cfg.params;
        let ctx = tower_ctx(&p.a, &p.b);
        let qctx = FnCtx::<Q>::over_q(p);
        let x = |n: i64| -> Result<CF> {
            match CurveFunction::generic_multiple(&qctx, n) {
                CurvePoint::Affine(x, _) if !x.is_zero() => Ok(x),
                _ => Err(CoreError::ExceptionalPoint { n, r: 0 }),
            }
        };
        let b = lift_fn(&ctx, &x(1)?);
        self.cfg
            .multipliers()
            .into_iter()
            .map(|k| {
                let a = lift_fn(&ctx, &x(k * r)?);
                let inst = ConicInstance::new(a, b.clone(), format!("x({}Q), x(Q)", k * r)).expect("nonzero coefficients");
                Ok((k, inst))
            })
            .collect()
    }

    /// Solves every equation of the bundle for `n = m r`, sharing one tower of
    /// constants.
    pub fn certify(&self, inst: DivInstance) -> Result<Verdict> {
        check_modulus(&self.cfg, inst.m)?;
        if !inst.holds() {
            return Err(CoreError::NotApplicable(format!("{inst} fails; nothing to certify")));
        }
        if let Some(v) = self.conics.lock().unwrap().get(&inst.r) {
            return Ok(v.clone());
        }
        let verdict = self.certify_uncached(inst.r);
        self.conics.lock().unwrap().insert(inst.r, verdict.clone());
        Ok(verdict)
    }

    fn certify_uncached(&self, r: i64) -> Verdict {
        let instances = match self.conic_instances(r) {
            Ok(v) => v,
            Err(e) => return Verdict::Inconclusive { reason: e.to_string(), report: None },
        };
        let mut tower = Tower::base();
        let mut sols = Vec::new();
        for (k, ci) in instances {
            match solve_conic(&ci, &tower, self.cfg.conic) {
                ConicOutcome::Solved(s) if s.strong && verify_solution(&ci, &s) => {
                    tower = s.tower.clone();
                    sols.push((k, s));
                }
                ConicOutcome::Solved(_) => {
                    return Verdict::Inconclusive { reason: format!("k = {k}: solution failed verification"), report: None }
                }
                ConicOutcome::NotFoundWithinBounds(rep) => {
                    return Verdict::Inconclusive { reason: format!("k = {k}: {} not solved within bounds", ci.tag), report: Some(rep) }
                }
            }
        }
        Verdict::Certified(sols)
    }

    /// Refutes or certifies, whichever applies.
    pub fn decide(&self, inst: DivInstance) -> Result<Verdict> {
        if inst.holds() {
            self.certify(inst)
        } else {
            self.refute(inst)
        }
    }
}

/// Replays a refutation independently of the engine: the valuation orders,
/// the residue against the group law on the curve, and the odd place.
pub fn replay_refutation(cfg: &EngineConfig, t: &Arc<LTower>, inst: DivInstance, w: &RefutationWitness) -> Result<bool> {
    let v = Valuer::new(t, inst.m, cfg.sign)?;
    let wa = v.w(&LExpr::xcomb(w.k * inst.n, w.k * inst.r))?;
    let wb = v.w(&LExpr::xcomb(inst.m, 1))?;
    let predicted = pullback_x(t.curve_ctx(), w.k * inst.s(), w.k * inst.r, cfg.sign)?;
    Ok(w.m == inst.m
        && wa.order == w.order_a
        && wb.order == w.order_b
        && wa.unit_residue == w.residue
        && predicted == w.residue
        && w.verify())
}

/// Replays each conic solution of a certificate against freshly built
/// instances.
pub fn replay_certificate(engine: &Engine, inst: DivInstance, sols: &[(i64, ConicSolution)]) -> Result<bool> {
    let instances = engine.conic_instances(inst.r)?;
    Ok(inst.holds()
        && instances.len() == sols.len()
        && instances.iter().zip(sols).all(|((k, ci), (k2, s))| k == k2 && s.strong && verify_solution(ci, s)))
}

fn var(s: &str) -> PairTerm {
    PairTerm::var(s)
}

/// `W((m,n),(r,s))` as two divisibility atoms with the fixed modulus
/// `(m0, 1)`.
pub fn define_w(cfg: &EngineConfig) -> SFormulaTemplate {
    let m0 = cfg.m0;
    let (p, q) = (var("p"), var("q"));
    let modulus = PairTerm::Const(m0, 1);
    let sum = p.clone().plus(q.clone());
    let diff = p.minus(q);
    let first = PairTerm::mix(sum.clone().times(m0), sum);
    let second = PairTerm::mix(diff.clone().times(-m0), diff);
    SFormulaTemplate {
        holes: vec!["p".into(), "q".into()],
        body: SFormula::And(vec![
            SFormula::atom(Atom::Divides { modulus: modulus.clone(), target: first, safe: true }),
            SFormula::atom(Atom::Divides { modulus, target: second, safe: true }),
        ]),
    }
}

/// `(m,1) | (n,r)` through the modulus `(d m + m0, 1)`, which avoids the
/// exceptional set, and one `W` atom.
pub fn define_divides(cfg: &EngineConfig) -> SFormulaTemplate {
    let (m0, d) = (cfg.m0, cfg.d);
    let (p, q, e) = (var("p"), var("q"), var("e"));
    let modulus = p.times(d).plus(PairTerm::Const(m0, 1 - d));
    let target = PairTerm::mix(q.clone().times(d), q.clone()).plus(e.clone().times(m0));
    let body = SFormula::And(vec![
        SFormula::atom(Atom::Divides { modulus, target, safe: true }),
        SFormula::atom(Atom::W(e, PairTerm::mix(PairTerm::Const(0, 0), q))),
    ]);
    SFormulaTemplate { holes: vec!["p".into(), "q".into()], body: SFormula::exists(vec!["e".into()], body) }
}

/// An element `(n, r)` of the model: the points `n P1` and `r P2`, each
/// over its own copy of the curve's function field.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelElement {
    pub first: CurvePoint<CF>,
    pub second: CurvePoint<CF>,
}

impl ModelElement {
    /// The sum `n P1 + r P2` in `L`.
    pub fn sum_point(&self, t: &Arc<LTower>) -> Result<CurvePoint<LElement>> {
        let (n, r) = (decode_point(t.curve_ctx(), &self.first, i64::MAX)?, decode_point(t.curve_ctx(), &self.second, i64::MAX)?);
        Ok(point_combination(t, n, r))
    }
}

fn window_check(cfg: &EngineConfig, v: i64) -> Result<()> {
    if v.abs() > cfg.window {
        return Err(CoreError::WindowExceeded(format!("|{v}| > {}", cfg.window)));
    }
    Ok(())
}

pub fn encode_pair(cfg: &EngineConfig, ctx: &Arc<FnCtx<Q>>, n: i64, r: i64) -> Result<ModelElement> {
    window_check(cfg, n)?;
    window_check(cfg, r)?;
    Ok(ModelElement { first: CurveFunction::generic_multiple(ctx, n), second: CurveFunction::generic_multiple(ctx, r) })
}

/// Recovers `n` from `n (z, h)`: the numerator of the x-coordinate has
/// degree `n^2`, and the sign is read off by comparison.
fn decode_point(ctx: &Arc<FnCtx<Q>>, p: &CurvePoint<CF>, window: i64) -> Result<i64> {
    let CurvePoint::Affine(x, _) = p else {
        return Ok(0);
    };
    let deg = x.c().num().degree().unwrap_or(0) as i64;
    let n = (deg as f64).sqrt().round() as i64;
    if n * n != deg || n == 0 {
        return Err(CoreError::WindowExceeded("not a multiple of the generic point".into()));
    }
    if n > window {
        return Err(CoreError::WindowExceeded(format!("|{n}| > {window}")));
    }
    let plus = CurveFunction::generic_multiple(ctx, n);
    if &plus == p {
        return Ok(n);
    }
    if &CurveFunction::curve(ctx).neg(&plus) == p {
        return Ok(-n);
    }
    Err(CoreError::WindowExceeded("not a multiple of the generic point".into()))
}

pub fn decode(cfg: &EngineConfig, ctx: &Arc<FnCtx<Q>>, e: &ModelElement) -> Result<(i64, i64)> {
    Ok((decode_point(ctx, &e.first, cfg.window)?, decode_point(ctx, &e.second, cfg.window)?))
}

/// Component-wise addition on the model.
pub fn model_add(ctx: &Arc<FnCtx<Q>>, a: &ModelElement, b: &ModelElement) -> ModelElement {
    let e = CurveFunction::curve(ctx);
    ModelElement { first: e.add(&a.first, &b.first), second: e.add(&a.second, &b.second) }
}
