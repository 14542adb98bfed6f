//! Point formulas to polynomial equations. Every point is an affine pair of
//! coordinates plus an infinity flag; each case split is a selector `c` with
//! `c (c - 1) ... (c - n + 1) = 0`, and the equations of case `i` are
//! multiplied by `prod_{l != i} (c - l)`, so that exactly the selected case is
//! enforced. Twist points `(X, h_i V)` keep both coordinates in `K`.

use std::collections::HashMap;
use std::sync::Arc;

use h10_algebra::{FieldElement, MPoly, Rational};
use h10_core::lfield::point_combination;
use h10_core::{CurveFunction, CurveParams, CurvePoint, FnCtx, LElement, LTower};

use crate::stage3::{PointConstraint, PointFormula, PointId, PointSort};
use crate::system::{primitive, Assignment, PolyEquation, PolySystem, VarSort, H1, H2, Z1, Z2};

type Q = Rational;
type P = MPoly<Q>;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum WitnessError {
    #[error("no value determined for {0}")]
    Underdetermined(String),
    #[error("the assignment violates {0}")]
    Violated(String),
    #[error("{0} needs a conic solution, whose constants lie outside Q")]
    NeedsConic(String),
}

/// Intended value of a point: `n P_i` on a twist, or `n P1 + r P2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PointValue {
    Twist(i64),
    General(i64, i64),
}

pub type PointValues = HashMap<PointId, PointValue>;

/// Index of the first branch that holds, keeping the values it determines.
pub fn choose(pf: &PointFormula, branches: &[PointConstraint], pv: &mut PointValues) -> Result<Option<usize>, WitnessError> {
    let mut undetermined = None;
    for (i, c) in branches.iter().enumerate() {
        let mut trial = pv.clone();
        match settle(pf, c, &mut trial) {
            Ok(true) => {
                *pv = trial;
                return Ok(Some(i));
            }
            Ok(false) => {}
            Err(e @ WitnessError::Underdetermined(_)) => {
                undetermined.get_or_insert(e);
            }
            Err(e) => return Err(e),
        }
    }
    undetermined.map_or(Ok(None), Err)
}

/// Propagates intended point values through a constraint and reports whether
/// it holds. Disjunctions keep the values of their first true branch.
pub fn settle(pf: &PointFormula, c: &PointConstraint, pv: &mut PointValues) -> Result<bool, WitnessError> {
    use PointConstraint as C;
    use PointValue::*;
    let name = |p: &PointId| pf.name(*p).to_string();
    let twist = |pv: &PointValues, p: &PointId| match pv.get(p) {
        Some(Twist(n)) => Some(*n),
        _ => None,
    };
    Ok(match c {
        C::Exists(_, b) => settle(pf, b, pv)?,
        C::And(v) => {
            // Retried until no constraint makes progress, so the order of
            // the conjuncts does not matter.
            let mut pending: Vec<&PointConstraint> = v.iter().collect();
            while !pending.is_empty() {
                let mut later = Vec::new();
                let mut last = None;
                for c in &pending {
                    match settle(pf, c, pv) {
                        Ok(true) => {}
                        Ok(false) => return Ok(false),
                        Err(e @ WitnessError::Underdetermined(_)) => {
                            last = Some(e);
                            later.push(*c);
                        }
                        Err(e) => return Err(e),
                    }
                }
                if later.len() == pending.len() {
                    return Err(last.unwrap());
                }
                pending = later;
            }
            true
        }
        C::Or(v) => choose(pf, v, pv)?.is_some(),
        C::Identity(p) => {
            let zero = if pf.sort(*p) == PointSort::General { General(0, 0) } else { Twist(0) };
            *pv.entry(*p).or_insert(zero) == zero
        }
        C::Multiple { p, c } => *pv.entry(*p).or_insert(Twist(*c)) == Twist(*c),
        C::Sum { s, p, q } => match (twist(pv, s), twist(pv, p), twist(pv, q)) {
            (Some(sv), Some(pv_), Some(qv)) => sv == pv_ + qv,
            (None, Some(pv_), Some(qv)) => {
                pv.insert(*s, Twist(pv_ + qv));
                true
            }
            (Some(sv), None, Some(qv)) if p != q => {
                pv.insert(*p, Twist(sv - qv));
                true
            }
            (Some(sv), Some(pv_), None) => {
                pv.insert(*q, Twist(sv - pv_));
                true
            }
            (Some(sv), None, None) if p == q => {
                if sv % 2 != 0 {
                    return Ok(false);
                }
                pv.insert(*p, Twist(sv / 2));
                true
            }
            _ => return Err(WitnessError::Underdetermined(format!("{} = {} + {}", name(s), name(p), name(q)))),
        },
        C::Split { t, a, b } => match (twist(pv, a), twist(pv, b)) {
            (Some(n), Some(r)) => *pv.entry(*t).or_insert(General(n, r)) == General(n, r),
            _ => return Err(WitnessError::Underdetermined(format!("{} = {} + {}", name(t), name(a), name(b)))),
        },
        C::Double { out, inp } => match pv.get(inp) {
            Some(General(n, r)) => {
                let v = General(2 * n, 2 * r);
                *pv.entry(*out).or_insert(v) == v
            }
            _ => return Err(WitnessError::Underdetermined(name(out))),
        },
        C::Conic { t, m, .. } => match (pv.get(t), pv.get(m)) {
            (Some(General(n, r)), Some(General(mm, 1))) => (*n, *r) != (0, 0) && *n == mm * r,
            (Some(_), Some(_)) => false,
            _ => return Err(WitnessError::Underdetermined(name(t))),
        },
    })
}

struct Witness {
    pv: PointValues,
    active: bool,
    assign: Assignment,
}

struct Lowerer<'a> {
    pf: &'a PointFormula,
    params: CurveParams,
    tower: Arc<LTower>,
    ctx: Arc<FnCtx<Q>>,
    sys: PolySystem,
    /// `(X, V or Y, e)` per point.
    coords: HashMap<PointId, [usize; 3]>,
    guard: P,
    label: Vec<String>,
    counter: usize,
    wit: Option<Witness>,
}

fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

fn c(n: i64) -> P {
    P::constant(q(n))
}

fn v(j: usize) -> P {
    PolySystem::var(j)
}

impl Lowerer<'_> {
    fn fresh(&mut self, stem: &str, sort: VarSort) -> usize {
        self.counter += 1;
        self.sys.vars.push((format!("{stem}~{}", self.counter), sort));
        self.sys.vars.len() - 1
    }

    fn emit(&mut self, p: P, what: &str) {
        let p = p.mul(&self.guard);
        if p.is_zero() {
            return;
        }
        let mut provenance = self.label.join(" / ");
        if !what.is_empty() {
            provenance = format!("{provenance} / {what}");
        }
        self.sys.equations.push(PolyEquation { poly: primitive(&p), provenance });
    }

    fn active(&self) -> bool {
        self.wit.as_ref().is_some_and(|w| w.active)
    }

    fn set(&mut self, j: usize, value: LElement) {
        if let Some(w) = self.wit.as_mut().filter(|w| w.active) {
            w.assign.insert(j, value);
        }
    }

    fn value(&self, j: usize) -> LElement {
        self.wit.as_ref().and_then(|w| w.assign.get(&j).cloned()).unwrap_or_else(|| self.lconst(0))
    }

    fn lconst(&self, n: i64) -> LElement {
        LElement::constant(&self.tower, q(n))
    }

    fn f_poly(&self, i: usize) -> P {
        let z = P::var(if i == 1 { Z1 } else { Z2 });
        z.pow(3).add(&z.scale(&self.params.a)).add(&P::constant(self.params.b.clone()))
    }

    fn f_value(&self, i: usize) -> LElement {
        let z = LElement::z(&self.tower, i);
        z.pow(3).add(&z.mul(&LElement::constant(&self.tower, self.params.a.clone()))).add(&LElement::constant(&self.tower, self.params.b.clone()))
    }

    fn h_poly(i: usize) -> P {
        P::var(if i == 1 { H1 } else { H2 })
    }

    fn declare(&mut self, p: PointId) -> Result<(), WitnessError> {
        let sort = self.pf.sort(p);
        let name = self.pf.name(p).to_string();
        let (cs, second) = match sort {
            PointSort::General => (VarSort::L, "Y"),
            _ => (VarSort::K, "V"),
        };
        let x = self.fresh(&format!("{name}.X"), cs);
        let y = self.fresh(&format!("{name}.{second}"), cs);
        let e = self.fresh(&format!("{name}.e"), VarSort::K);
        self.coords.insert(p, [x, y, e]);
        self.label.push(format!("point {name}"));
        let (a, b) = (P::constant(self.params.a.clone()), P::constant(self.params.b.clone()));
        let rhs = v(x).pow(3).add(&v(x).mul(&a)).add(&b);
        let lhs = match sort.twist() {
            Some(i) => self.f_poly(i).mul(&v(y).square()),
            None => v(y).square(),
        };
        self.emit(v(e).mul(&v(e).sub(&c(1))), "flag");
        self.emit(v(e).mul(&v(x)), "flag");
        self.emit(v(e).mul(&v(y)), "flag");
        self.emit(c(1).sub(&v(e)).mul(&lhs.sub(&rhs)), "on curve");
        self.label.pop();
        if self.active() {
            let value = self.wit.as_ref().unwrap().pv.get(&p).copied().ok_or(WitnessError::Underdetermined(name))?;
            let (xv, yv, ev) = self.point_coords(sort, value);
            self.set(x, xv);
            self.set(y, yv);
            self.set(e, ev);
        }
        Ok(())
    }

    fn point_coords(&self, sort: PointSort, value: PointValue) -> (LElement, LElement, LElement) {
        let o = (self.lconst(0), self.lconst(0), self.lconst(1));
        match (sort.twist(), value) {
            (Some(i), PointValue::Twist(n)) => match CurveFunction::generic_multiple(&self.ctx, n) {
                CurvePoint::Infinity => o,
                CurvePoint::Affine(x, y) => {
                    let vv = CurveFunction::from_z(&self.ctx, y.d().clone());
                    (LElement::from_cfunc(&self.tower, &x, i), LElement::from_cfunc(&self.tower, &vv, i), self.lconst(0))
                }
            },
            (None, PointValue::General(n, r)) => match point_combination(&self.tower, n, r) {
                CurvePoint::Infinity => o,
                CurvePoint::Affine(x, y) => (x, y, self.lconst(0)),
            },
            _ => unreachable!("point value of the wrong sort"),
        }
    }

    /// Emits a case split; `chosen` is the case the witness takes.
    fn cases(&mut self, branches: Vec<(&str, Vec<P>)>, chosen: Option<usize>) {
        let n = branches.len() as i64;
        let sel = self.fresh("case", VarSort::K);
        let all = (0..n).fold(c(1), |acc, i| acc.mul(&v(sel).sub(&c(i))));
        self.emit(all, "case selector");
        if let Some(i) = chosen {
            self.set(sel, self.lconst(i as i64));
        }
        let outer = self.guard.clone();
        for (i, (name, eqs)) in branches.into_iter().enumerate() {
            let others = (0..n).filter(|l| *l != i as i64).fold(c(1), |acc, l| acc.mul(&v(sel).sub(&c(l))));
            self.guard = outer.mul(&others);
            self.label.push(format!("case {name}"));
            for e in eqs {
                self.emit(e, "");
            }
            self.label.pop();
        }
        self.guard = outer;
    }

    fn lower(&mut self, con: &PointConstraint) -> Result<(), WitnessError> {
        use PointConstraint as C;
        match con {
            C::Exists(ps, b) => {
                for p in ps {
                    self.declare(*p)?;
                }
                self.lower(b)
            }
            C::And(v) => v.iter().try_for_each(|c| self.lower(c)),
            C::Or(v) if v.len() == 1 => self.lower(&v[0]),
            C::Or(branches) => {
                let chosen = match self.wit.as_mut().filter(|w| w.active) {
                    Some(w) => Some(choose(self.pf, branches, &mut w.pv)?.ok_or_else(|| WitnessError::Violated("a disjunction".into()))?),
                    None => None,
                };
                let sel = self.fresh("or", VarSort::K);
                let n = branches.len() as i64;
                let all = (0..n).fold(c(1), |acc, i| acc.mul(&v(sel).sub(&c(i))));
                self.emit(all, "disjunction selector");
                if let Some(i) = chosen {
                    self.set(sel, self.lconst(i as i64));
                }
                let outer = self.guard.clone();
                let was_active = self.active();
                for (i, b) in branches.iter().enumerate() {
                    let others = (0..n).filter(|l| *l != i as i64).fold(c(1), |acc, l| acc.mul(&v(sel).sub(&c(l))));
                    self.guard = outer.mul(&others);
                    if let Some(w) = self.wit.as_mut() {
                        w.active = was_active && chosen == Some(i);
                    }
                    self.lower(b)?;
                }
                if let Some(w) = self.wit.as_mut() {
                    w.active = was_active;
                }
                self.guard = outer;
                Ok(())
            }
            C::Identity(p) => {
                let [_, _, e] = self.coords[p];
                self.label.push(format!("{} = O", self.pf.name(*p)));
                self.emit(v(e).sub(&c(1)), "");
                self.label.pop();
                Ok(())
            }
            C::Multiple { p, c: k } => self.multiple(*p, *k),
            C::Sum { s, p, q } => {
                self.label.push(format!("{} = {} + {}", self.pf.name(*s), self.pf.name(*p), self.pf.name(*q)));
                self.sum(*s, *p, *q);
                self.label.pop();
                Ok(())
            }
            C::Split { t, a, b } => {
                self.label.push(format!("{} = {} + {}", self.pf.name(*t), self.pf.name(*a), self.pf.name(*b)));
                self.split(*t, *a, *b);
                self.label.pop();
                Ok(())
            }
            C::Double { out, inp } => {
                self.label.push(format!("{} = 2 {}", self.pf.name(*out), self.pf.name(*inp)));
                self.double(*out, *inp);
                self.label.pop();
                Ok(())
            }
            C::Conic { k, t, m, y, z } => {
                let label = format!("x({}) {y}^2 + x({}) {z}^2 = 1", self.pf.name(*t), self.pf.name(*m));
                if self.active() {
                    return Err(WitnessError::NeedsConic(label));
                }
                let (yv, zv) = (self.fresh(y, VarSort::L), self.fresh(z, VarSort::L));
                let ([xt, _, et], [xm, _, em]) = (self.coords[t], self.coords[m]);
                self.label.push(format!("{label} [k = {k}]"));
                self.emit(v(et), "affine");
                self.emit(v(em), "affine");
                self.emit(v(xt).mul(&v(yv).square()).add(&v(xm).mul(&v(zv).square())).sub(&c(1)), "");
                self.label.pop();
                Ok(())
            }
        }
    }

    fn multiple(&mut self, p: PointId, k: i64) -> Result<(), WitnessError> {
        let i = self.pf.sort(p).twist().expect("multiples live on a twist");
        let [x, y, e] = self.coords[&p];
        self.label.push(format!("{} = {k} P{i}", self.pf.name(p)));
        match CurveFunction::generic_multiple(&self.ctx, k) {
            CurvePoint::Infinity => self.emit(v(e).sub(&c(1)), ""),
            CurvePoint::Affine(xf, yf) => {
                let zi = if i == 1 { Z1 } else { Z2 };
                let up = |u: &h10_algebra::UPoly<Q>| MPoly::from_upoly(u, zi);
                self.emit(v(e), "affine");
                self.emit(up(xf.c().den()).mul(&v(x)).sub(&up(xf.c().num())), "x");
                self.emit(up(yf.d().den()).mul(&v(y)).sub(&up(yf.d().num())), "y / h");
            }
        }
        self.label.pop();
        Ok(())
    }

    fn twist_values(&self, p: PointId) -> Option<i64> {
        match self.wit.as_ref()?.pv.get(&p)? {
            PointValue::Twist(n) => Some(*n),
            _ => None,
        }
    }

    /// `s = p + q` on the twist `f_i V^2 = X^3 + a X + b`.
    fn sum(&mut self, s: PointId, p: PointId, q: PointId) {
        let i = self.pf.sort(s).twist().expect("twist sum");
        let f = self.f_poly(i);
        let ([xs, vs, es], [xp, vp, ep], [xq, vq, eq]) = (self.coords[&s], self.coords[&p], self.coords[&q]);
        let (u1, m1) = (self.fresh("inv", VarSort::K), self.fresh("slope", VarSort::K));
        let (u2, m2) = (self.fresh("inv", VarSort::K), self.fresh("slope", VarSort::K));
        let a = P::constant(self.params.a.clone());
        let chosen = if self.active() {
            let (np, nq) = (self.twist_values(p).unwrap(), self.twist_values(q).unwrap());
            Some(if np == 0 {
                0
            } else if nq == 0 {
                1
            } else if np == nq {
                3
            } else if np == -nq {
                4
            } else {
                2
            })
        } else {
            None
        };
        if let Some(k) = chosen {
            let (xpv, vpv, xqv, vqv) = (self.value(xp), self.value(vp), self.value(xq), self.value(vq));
            if k == 2 {
                let dx = xqv.sub(&xpv);
                self.set(u1, dx.inv().expect("distinct x"));
                self.set(m1, vqv.sub(&vpv).div(&dx).unwrap());
            } else if k == 3 {
                let three = self.lconst(3);
                let av = LElement::constant(&self.tower, self.params.a.clone());
                self.set(u2, vpv.inv().expect("not 2-torsion"));
                let num = three.mul(&xpv.square()).add(&av);
                let den = self.lconst(2).mul(&self.f_value(i)).mul(&vpv);
                self.set(m2, num.div(&den).unwrap());
            }
        }
        let branches = vec![
            ("first is O", vec![v(ep).sub(&c(1)), v(es).sub(&v(eq)), v(xs).sub(&v(xq)), v(vs).sub(&v(vq))]),
            ("second is O", vec![v(eq).sub(&c(1)), v(es).sub(&v(ep)), v(xs).sub(&v(xp)), v(vs).sub(&v(vp))]),
            (
                "chord",
                vec![
                    v(ep),
                    v(eq),
                    v(es),
                    v(u1).mul(&v(xq).sub(&v(xp))).sub(&c(1)),
                    v(m1).mul(&v(xq).sub(&v(xp))).sub(&v(vq).sub(&v(vp))),
                    v(xs).sub(&f.mul(&v(m1).square()).sub(&v(xp)).sub(&v(xq))),
                    v(vs).sub(&v(m1).mul(&v(xp).sub(&v(xs))).sub(&v(vp))),
                ],
            ),
            (
                "tangent",
                vec![
                    v(ep),
                    v(eq),
                    v(es),
                    v(xp).sub(&v(xq)),
                    v(vp).sub(&v(vq)),
                    v(u2).mul(&v(vp)).sub(&c(1)),
                    c(2).mul(&f).mul(&v(vp)).mul(&v(m2)).sub(&c(3).mul(&v(xp).square()).add(&a)),
                    v(xs).sub(&f.mul(&v(m2).square()).sub(&c(2).mul(&v(xp)))),
                    v(vs).sub(&v(m2).mul(&v(xp).sub(&v(xs))).sub(&v(vp))),
                ],
            ),
            ("opposite", vec![v(ep), v(eq), v(xp).sub(&v(xq)), v(vp).add(&v(vq)), v(es).sub(&c(1))]),
        ];
        self.cases(branches, chosen);
    }

    /// `t = a + b` with `a = (Xa, h1 Va)` and `b = (Xb, h2 Vb)`.
    fn split(&mut self, t: PointId, a: PointId, b: PointId) {
        let ([xt, yt, et], [xa, va, ea], [xb, vb, eb]) = (self.coords[&t], self.coords[&a], self.coords[&b]);
        let u = self.fresh("inv", VarSort::K);
        let l = self.fresh("slope", VarSort::L);
        let (h1, h2) = (Self::h_poly(1), Self::h_poly(2));
        let chosen = if self.active() {
            let (na, nb) = (self.twist_values(a).unwrap(), self.twist_values(b).unwrap());
            Some(if na == 0 {
                0
            } else if nb == 0 {
                1
            } else {
                2
            })
        } else {
            None
        };
        if chosen == Some(2) {
            let (xav, vav, xbv, vbv) = (self.value(xa), self.value(va), self.value(xb), self.value(vb));
            let dx = xbv.sub(&xav);
            self.set(u, dx.inv().expect("distinct x"));
            let dy = LElement::h(&self.tower, 2).mul(&vbv).sub(&LElement::h(&self.tower, 1).mul(&vav));
            self.set(l, dy.div(&dx).unwrap());
        }
        let ya = h1.mul(&v(va));
        let yb = h2.mul(&v(vb));
        let branches = vec![
            ("first is O", vec![v(ea).sub(&c(1)), v(et).sub(&v(eb)), v(xt).sub(&v(xb)), v(yt).sub(&yb)]),
            ("second is O", vec![v(eb).sub(&c(1)), v(et).sub(&v(ea)), v(xt).sub(&v(xa)), v(yt).sub(&ya)]),
            (
                "chord",
                vec![
                    v(ea),
                    v(eb),
                    v(et),
                    v(u).mul(&v(xb).sub(&v(xa))).sub(&c(1)),
                    v(l).mul(&v(xb).sub(&v(xa))).sub(&yb.sub(&ya)),
                    v(xt).sub(&v(l).square().sub(&v(xa)).sub(&v(xb))),
                    v(yt).sub(&v(l).mul(&v(xa).sub(&v(xt))).sub(&ya)),
                ],
            ),
        ];
        self.cases(branches, chosen);
    }

    fn double(&mut self, out: PointId, inp: PointId) {
        let ([xo, yo, eo], [x, y, e]) = (self.coords[&out], self.coords[&inp]);
        let u = self.fresh("inv", VarSort::L);
        let m = self.fresh("slope", VarSort::L);
        if self.active() {
            let (xv, yv) = (self.value(x), self.value(y));
            self.set(u, yv.inv().expect("not 2-torsion"));
            let a = LElement::constant(&self.tower, self.params.a.clone());
            self.set(m, self.lconst(3).mul(&xv.square()).add(&a).div(&self.lconst(2).mul(&yv)).unwrap());
        }
        let a = P::constant(self.params.a.clone());
        self.emit(v(e), "affine");
        self.emit(v(eo), "affine");
        self.emit(v(u).mul(&v(y)).sub(&c(1)), "y invertible");
        self.emit(c(2).mul(&v(y)).mul(&v(m)).sub(&c(3).mul(&v(x).square()).add(&a)), "tangent slope");
        self.emit(v(xo).sub(&v(m).square().sub(&c(2).mul(&v(x)))), "x");
        self.emit(v(yo).sub(&v(m).mul(&v(x).sub(&v(xo))).sub(&v(y))), "y");
    }
}

/// The lowered system, with a full assignment when intended point values
/// were supplied.
#[derive(Clone, Debug)]
pub struct Lowered {
    pub system: PolySystem,
    pub witness: Option<Assignment>,
}

fn lower_impl(pf: &PointFormula, params: &CurveParams, pv: Option<PointValues>) -> Result<Lowered, WitnessError> {
    let tower = LTower::new(params.clone());
    let ctx = tower.curve_ctx().clone();
    let wit = match pv {
        Some(mut pv) => {
            if !settle(pf, &pf.root, &mut pv)? {
                return Err(WitnessError::Violated("the formula".into()));
            }
            Some(Witness { pv, active: true, assign: HashMap::new() })
        }
        None => None,
    };
    let mut l = Lowerer {
        pf,
        params: params.clone(),
        tower,
        ctx,
        sys: PolySystem::default(),
        coords: HashMap::new(),
        guard: c(1),
        label: Vec::new(),
        counter: 0,
        wit,
    };
    l.lower(&pf.root)?;
    for i in [1, 2] {
        let h = Lowerer::h_poly(i).square().sub(&l.f_poly(i));
        l.sys.equations.push(PolyEquation { poly: primitive(&h), provenance: format!("defining relation of h{i}") });
    }
    Ok(Lowered { system: l.sys, witness: l.wit.map(|w| w.assign) })
}

pub fn stage4_lower(pf: &PointFormula, params: &CurveParams) -> PolySystem {
    lower_impl(pf, params, None).expect("no witness requested").system
}

/// Lowers and computes the values of every unknown from intended point values.
pub fn stage4_lower_with_witness(pf: &PointFormula, params: &CurveParams, pv: PointValues) -> Result<Lowered, WitnessError> {
    lower_impl(pf, params, Some(pv))
}

/// Intended values of the pair variables, as values of their point variables.
pub fn pair_values(pf: &PointFormula, pairs: &HashMap<String, (i64, i64)>) -> PointValues {
    let mut pv = HashMap::new();
    for (j, p) in pf.points.iter().enumerate() {
        if let PointSort::Cyclic(i) = p.sort {
            if let Some(stem) = p.name.strip_suffix(&format!(".{i}")) {
                if let Some((n, r)) = pairs.get(stem) {
                    pv.insert(PointId(j), PointValue::Twist(if i == 1 { *n } else { *r }));
                }
            }
        }
    }
    pv
}
