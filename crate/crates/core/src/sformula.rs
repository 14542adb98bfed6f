//! Positive existential formulas over the structure of integer pairs with
//! addition, divisibility, the predicate `Z` and the swap relation `W`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::oracle::{self, Constraint, IntPoly, Problem};

/// A pair-valued term, linear in pair variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PairTerm {
    Var(String),
    Const(i64, i64),
    Add(Box<PairTerm>, Box<PairTerm>),
    Sub(Box<PairTerm>, Box<PairTerm>),
    Scale(i64, Box<PairTerm>),
    /// First component of the left term, second component of the right one.
    Mix(Box<PairTerm>, Box<PairTerm>),
}

impl PairTerm {
    pub fn var(name: impl Into<String>) -> Self {
        PairTerm::Var(name.into())
    }

    pub fn plus(self, o: PairTerm) -> Self {
        PairTerm::Add(Box::new(self), Box::new(o))
    }

    pub fn minus(self, o: PairTerm) -> Self {
        PairTerm::Sub(Box::new(self), Box::new(o))
    }

    pub fn times(self, k: i64) -> Self {
        PairTerm::Scale(k, Box::new(self))
    }

    pub fn mix(first: PairTerm, second: PairTerm) -> Self {
        PairTerm::Mix(Box::new(first), Box::new(second))
    }

    fn vars(&self, out: &mut BTreeSet<String>) {
        match self {
            PairTerm::Var(v) => {
                out.insert(v.clone());
            }
            PairTerm::Const(..) => {}
            PairTerm::Add(a, b) | PairTerm::Sub(a, b) | PairTerm::Mix(a, b) => {
                a.vars(out);
                b.vars(out);
            }
            PairTerm::Scale(_, a) => a.vars(out),
        }
    }

    fn rename(&self, map: &HashMap<String, PairTerm>) -> PairTerm {
        match self {
            PairTerm::Var(v) => map.get(v).cloned().unwrap_or_else(|| self.clone()),
            PairTerm::Const(..) => self.clone(),
            PairTerm::Add(a, b) => a.rename(map).plus(b.rename(map)),
            PairTerm::Sub(a, b) => a.rename(map).minus(b.rename(map)),
            PairTerm::Scale(k, a) => a.rename(map).times(*k),
            PairTerm::Mix(a, b) => PairTerm::mix(a.rename(map), b.rename(map)),
        }
    }

    /// Value under an assignment of pair variables.
    pub fn eval(&self, env: &HashMap<String, (i64, i64)>) -> Option<(i64, i64)> {
        Some(match self {
            PairTerm::Var(v) => *env.get(v)?,
            PairTerm::Const(a, b) => (*a, *b),
            PairTerm::Add(a, b) => {
                let (x, y) = (a.eval(env)?, b.eval(env)?);
                (x.0 + y.0, x.1 + y.1)
            }
            PairTerm::Sub(a, b) => {
                let (x, y) = (a.eval(env)?, b.eval(env)?);
                (x.0 - y.0, x.1 - y.1)
            }
            PairTerm::Scale(k, a) => {
                let x = a.eval(env)?;
                (k * x.0, k * x.1)
            }
            PairTerm::Mix(a, b) => (a.eval(env)?.0, b.eval(env)?.1),
        })
    }
}

impl fmt::Display for PairTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PairTerm::Var(v) => write!(f, "{v}"),
            PairTerm::Const(a, b) => write!(f, "({a},{b})"),
            PairTerm::Add(a, b) => write!(f, "({a} + {b})"),
            PairTerm::Sub(a, b) => write!(f, "({a} - {b})"),
            PairTerm::Scale(k, a) => write!(f, "{k}*{a}"),
            PairTerm::Mix(a, b) => write!(f, "<{a}|{b}>"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Atom {
    /// `p + q = s`.
    Plus(PairTerm, PairTerm, PairTerm),
    /// `p | q`. `safe` marks a modulus known to avoid the exceptional set.
    Divides { modulus: PairTerm, target: PairTerm, safe: bool },
    /// Second component zero.
    Z(PairTerm),
    /// `W((m,n),(r,s))`: `m = s` and `n = r`.
    W(PairTerm, PairTerm),
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Plus(p, q, s) => write!(f, "Plus({p}, {q}, {s})"),
            Atom::Divides { modulus, target, safe } => {
                write!(f, "Divides{}({modulus}, {target})", if *safe { "!" } else { "" })
            }
            Atom::Z(p) => write!(f, "Z({p})"),
            Atom::W(p, q) => write!(f, "W({p}, {q})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SFormula {
    Atom(Atom),
    And(Vec<SFormula>),
    Or(Vec<SFormula>),
    Exists(Vec<String>, Box<SFormula>),
}

impl SFormula {
    pub fn truth() -> Self {
        SFormula::And(Vec::new())
    }

    pub fn atom(a: Atom) -> Self {
        SFormula::Atom(a)
    }

    pub fn exists(vars: Vec<String>, body: SFormula) -> Self {
        if vars.is_empty() {
            body
        } else {
            SFormula::Exists(vars, Box::new(body))
        }
    }

    pub fn atoms(&self) -> Vec<&Atom> {
        let mut out = Vec::new();
        fn go<'a>(f: &'a SFormula, out: &mut Vec<&'a Atom>) {
            match f {
                SFormula::Atom(a) => out.push(a),
                SFormula::And(v) | SFormula::Or(v) => v.iter().for_each(|f| go(f, out)),
                SFormula::Exists(_, b) => go(b, out),
            }
        }
        go(self, &mut out);
        out
    }

    /// Rewrites every atom, keeping the connectives.
    pub fn map_atoms(&self, f: &mut impl FnMut(&Atom) -> SFormula) -> SFormula {
        match self {
            SFormula::Atom(a) => f(a),
            SFormula::And(v) => SFormula::And(v.iter().map(|x| x.map_atoms(f)).collect()),
            SFormula::Or(v) => SFormula::Or(v.iter().map(|x| x.map_atoms(f)).collect()),
            SFormula::Exists(vs, b) => SFormula::Exists(vs.clone(), Box::new(b.map_atoms(f))),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        fn go(f: &SFormula, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
            let mut add = |t: &PairTerm| {
                let mut s = BTreeSet::new();
                t.vars(&mut s);
                out.extend(s.into_iter().filter(|v| !bound.contains(v)));
            };
            match f {
                SFormula::Atom(Atom::Plus(p, q, s)) => [p, q, s].into_iter().for_each(&mut add),
                SFormula::Atom(Atom::Divides { modulus, target, .. }) => [modulus, target].into_iter().for_each(&mut add),
                SFormula::Atom(Atom::Z(p)) => add(p),
                SFormula::Atom(Atom::W(p, q)) => [p, q].into_iter().for_each(&mut add),
                SFormula::And(v) | SFormula::Or(v) => v.iter().for_each(|f| go(f, bound, out)),
                SFormula::Exists(vs, b) => {
                    let n = bound.len();
                    bound.extend(vs.iter().cloned());
                    go(b, bound, out);
                    bound.truncate(n);
                }
            }
        }
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// Substitutes terms for free variables.
    pub fn substitute(&self, map: &HashMap<String, PairTerm>) -> SFormula {
        match self {
            SFormula::Exists(vs, b) => {
                let mut inner = map.clone();
                for v in vs {
                    inner.remove(v);
                }
                SFormula::Exists(vs.clone(), Box::new(b.substitute(&inner)))
            }
            SFormula::And(v) => SFormula::And(v.iter().map(|x| x.substitute(map)).collect()),
            SFormula::Or(v) => SFormula::Or(v.iter().map(|x| x.substitute(map)).collect()),
            SFormula::Atom(a) => SFormula::Atom(match a {
                Atom::Plus(p, q, s) => Atom::Plus(p.rename(map), q.rename(map), s.rename(map)),
                Atom::Divides { modulus, target, safe } => {
                    Atom::Divides { modulus: modulus.rename(map), target: target.rename(map), safe: *safe }
                }
                Atom::Z(p) => Atom::Z(p.rename(map)),
                Atom::W(p, q) => Atom::W(p.rename(map), q.rename(map)),
            }),
        }
    }

    /// The oracle problem under the literal semantics; free variables become
    /// existential.
    pub fn to_problem(&self) -> Problem {
        let mut b = Builder::default();
        let mut scope = HashMap::new();
        for v in self.free_vars() {
            let id = b.fresh(&v);
            scope.insert(v, id);
        }
        let root = b.lower(self, &mut scope);
        Problem { names: b.names, root }
    }
}

impl fmt::Display for SFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SFormula::Atom(a) => write!(f, "{a}"),
            SFormula::And(v) if v.is_empty() => write!(f, "true"),
            SFormula::Or(v) if v.is_empty() => write!(f, "false"),
            SFormula::And(v) => write!(f, "({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" and ")),
            SFormula::Or(v) => write!(f, "({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" or ")),
            SFormula::Exists(vs, b) => write!(f, "exists {} . {b}", vs.join(" ")),
        }
    }
}

/// Literal semantics of an atom on concrete pairs.
pub fn evaluate_atom(a: &Atom, env: &HashMap<String, (i64, i64)>) -> Option<bool> {
    Some(match a {
        Atom::Plus(p, q, s) => {
            let (p, q, s) = (p.eval(env)?, q.eval(env)?, s.eval(env)?);
            p.0 + q.0 == s.0 && p.1 + q.1 == s.1
        }
        Atom::Divides { modulus, target, .. } => {
            let (m, t) = (modulus.eval(env)?, target.eval(env)?);
            m.1 == 1 && t.0 == m.0 * t.1
        }
        Atom::Z(p) => p.eval(env)?.1 == 0,
        Atom::W(p, q) => {
            let (p, q) = (p.eval(env)?, q.eval(env)?);
            p.0 == q.1 && p.1 == q.0
        }
    })
}

#[derive(Default)]
struct Builder {
    names: Vec<String>,
}

type Comp = (IntPoly, IntPoly);

impl Builder {
    /// Two integer variables for one pair variable.
    fn fresh(&mut self, name: &str) -> usize {
        let id = self.names.len();
        self.names.push(format!("{name}.0"));
        self.names.push(format!("{name}.1"));
        id
    }

    fn term(&self, t: &PairTerm, scope: &HashMap<String, usize>) -> Comp {
        match t {
            PairTerm::Var(v) => {
                let id = scope[v];
                (IntPoly::var(id), IntPoly::var(id + 1))
            }
            PairTerm::Const(a, b) => (IntPoly::constant(*a as i128), IntPoly::constant(*b as i128)),
            PairTerm::Add(a, b) => {
                let (x, y) = (self.term(a, scope), self.term(b, scope));
                (x.0.add(&y.0), x.1.add(&y.1))
            }
            PairTerm::Sub(a, b) => {
                let (x, y) = (self.term(a, scope), self.term(b, scope));
                (x.0.sub(&y.0), x.1.sub(&y.1))
            }
            PairTerm::Scale(k, a) => {
                let x = self.term(a, scope);
                (x.0.scale(*k as i128), x.1.scale(*k as i128))
            }
            PairTerm::Mix(a, b) => (self.term(a, scope).0, self.term(b, scope).1),
        }
    }

    fn lower(&mut self, f: &SFormula, scope: &mut HashMap<String, usize>) -> Constraint {
        let eq = Constraint::Eq;
        match f {
            SFormula::Atom(a) => match a {
                Atom::Plus(p, q, s) => {
                    let (p, q, s) = (self.term(p, scope), self.term(q, scope), self.term(s, scope));
                    Constraint::And(vec![eq(p.0.add(&q.0).sub(&s.0)), eq(p.1.add(&q.1).sub(&s.1))])
                }
                Atom::Divides { modulus, target, .. } => {
                    let (m, t) = (self.term(modulus, scope), self.term(target, scope));
                    Constraint::And(vec![eq(m.1.sub(&IntPoly::constant(1))), eq(t.0.sub(&m.0.mul(&t.1)))])
                }
                Atom::Z(p) => eq(self.term(p, scope).1),
                Atom::W(p, q) => {
                    let (p, q) = (self.term(p, scope), self.term(q, scope));
                    Constraint::And(vec![eq(p.0.sub(&q.1)), eq(p.1.sub(&q.0))])
                }
            },
            SFormula::And(v) => Constraint::And(v.iter().map(|x| self.lower(x, scope)).collect()),
            SFormula::Or(v) => Constraint::Or(v.iter().map(|x| self.lower(x, scope)).collect()),
            SFormula::Exists(vs, b) => {
                let saved: Vec<(String, Option<usize>)> = vs.iter().map(|v| (v.clone(), scope.get(v).copied())).collect();
                for v in vs {
                    let id = self.fresh(v);
                    scope.insert(v.clone(), id);
                }
                let c = self.lower(b, scope);
                for (v, old) in saved {
                    match old {
                        Some(id) => scope.insert(v, id),
                        None => scope.remove(&v),
                    };
                }
                c
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleVerdict {
    TrueWithinBound,
    FalseWithinBound,
}

/// Brute-force truth with every pair component in `[-bound, bound]`.
/// Free variables are read existentially.
pub fn oracle_eval(f: &SFormula, bound: i64) -> OracleVerdict {
    match oracle::solve(&f.to_problem(), bound) {
        Some(_) => OracleVerdict::TrueWithinBound,
        None => OracleVerdict::FalseWithinBound,
    }
}

/// A formula with named holes for pair arguments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SFormulaTemplate {
    pub holes: Vec<String>,
    pub body: SFormula,
}

/// Supplies fresh names for bound variables of instantiated templates.
#[derive(Clone, Debug, Default)]
pub struct Fresh {
    next: usize,
}

impl Fresh {
    pub fn name(&mut self, stem: &str) -> String {
        self.next += 1;
        format!("{stem}#{}", self.next)
    }
}

impl SFormulaTemplate {
    /// Fills the holes, renaming every bound variable apart.
    pub fn instantiate(&self, args: &[PairTerm], fresh: &mut Fresh) -> SFormula {
        assert_eq!(args.len(), self.holes.len(), "template arity");
        let body = rename_bound(&self.body, fresh);
        let map: HashMap<String, PairTerm> = self.holes.iter().cloned().zip(args.iter().cloned()).collect();
        body.substitute(&map)
    }
}

fn rename_bound(f: &SFormula, fresh: &mut Fresh) -> SFormula {
    match f {
        SFormula::Exists(vs, b) => {
            let map: HashMap<String, PairTerm> = vs.iter().map(|v| (v.clone(), PairTerm::var(fresh.name(v)))).collect();
            let names = vs.iter().map(|v| match &map[v] {
                PairTerm::Var(n) => n.clone(),
                _ => unreachable!(),
            });
            let inner = rename_bound(b, fresh).substitute(&map);
            SFormula::Exists(names.collect(), Box::new(inner))
        }
        SFormula::And(v) => SFormula::And(v.iter().map(|x| rename_bound(x, fresh)).collect()),
        SFormula::Or(v) => SFormula::Or(v.iter().map(|x| rename_bound(x, fresh)).collect()),
        SFormula::Atom(_) => f.clone(),
    }
}
