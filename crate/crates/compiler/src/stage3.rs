//! Pairs as pairs of points `(n P1, r P2)`: membership in the cyclic groups
//! through halving on the twist, sums as point additions, and each ground
//! divisibility atom as the quadratic equations of the valuation argument.

use std::collections::HashMap;
use std::fmt;

use h10_core::{Atom, EngineConfig, PairTerm, SFormula};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointSort {
    /// A point of `Z P_i`; carries its membership constraint.
    Cyclic(usize),
    /// Any point `(X, h_i V)` with `X, V` in the base field.
    Twist(usize),
    /// Any point of the curve over the top field.
    General,
}

impl PointSort {
    /// The index `i` of the twist for the first two sorts.
    pub fn twist(&self) -> Option<usize> {
        match self {
            PointSort::Cyclic(i) | PointSort::Twist(i) => Some(*i),
            PointSort::General => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointVar {
    pub name: String,
    pub sort: PointSort,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PointConstraint {
    /// Declares points; their curve constraints hold where the scope is active.
    Exists(Vec<PointId>, Box<PointConstraint>),
    And(Vec<PointConstraint>),
    Or(Vec<PointConstraint>),
    Identity(PointId),
    /// `p = c P_i`.
    Multiple { p: PointId, c: i64 },
    /// `s = p + q` inside one twist.
    Sum { s: PointId, p: PointId, q: PointId },
    /// `t = a + b` with `a` on the first twist and `b` on the second.
    Split { t: PointId, a: PointId, b: PointId },
    /// `out = 2 inp` for affine general points.
    Double { out: PointId, inp: PointId },
    /// `x(t) y^2 + x(m) z^2 = 1` with `y`, `z` in the top field.
    Conic { k: i64, t: PointId, m: PointId, y: String, z: String },
}

/// A formula over points, with a table of point variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointFormula {
    pub points: Vec<PointVar>,
    pub root: PointConstraint,
}

impl PointFormula {
    pub fn sort(&self, p: PointId) -> PointSort {
        self.points[p.0].sort
    }

    pub fn name(&self, p: PointId) -> &str {
        &self.points[p.0].name
    }

    /// Number of constraints of each kind, for reports.
    pub fn census(&self) -> Vec<(&'static str, usize)> {
        let mut counts: Vec<(&'static str, usize)> =
            ["exists", "and", "or", "identity", "multiple", "sum", "split", "double", "conic"].iter().map(|k| (*k, 0)).collect();
        fn go(c: &PointConstraint, counts: &mut Vec<(&'static str, usize)>) {
            let i = match c {
                PointConstraint::Exists(_, b) => {
                    go(b, counts);
                    0
                }
                PointConstraint::And(v) => {
                    v.iter().for_each(|c| go(c, counts));
                    1
                }
                PointConstraint::Or(v) => {
                    v.iter().for_each(|c| go(c, counts));
                    2
                }
                PointConstraint::Identity(_) => 3,
                PointConstraint::Multiple { .. } => 4,
                PointConstraint::Sum { .. } => 5,
                PointConstraint::Split { .. } => 6,
                PointConstraint::Double { .. } => 7,
                PointConstraint::Conic { .. } => 8,
            };
            counts[i].1 += 1;
        }
        go(&self.root, &mut counts);
        counts
    }
}

struct Builder<'a> {
    cfg: &'a EngineConfig,
    points: Vec<PointVar>,
    counter: usize,
}

type Pair = (PointId, PointId);

impl Builder<'_> {
    fn point(&mut self, name: &str, sort: PointSort) -> PointId {
        self.points.push(PointVar { name: name.to_string(), sort });
        PointId(self.points.len() - 1)
    }

    fn aux(&mut self, stem: &str, sort: PointSort, decl: &mut Vec<PointId>) -> PointId {
        self.counter += 1;
        let p = self.point(&format!("{stem}~{}", self.counter), sort);
        decl.push(p);
        p
    }

    fn field_var(&mut self, stem: &str) -> String {
        self.counter += 1;
        format!("{stem}~{}", self.counter)
    }

    /// `P` in `Z P_i`: `P = 2 Q` or `P = 2 Q + P_i` with `Q` on the twist.
    fn membership(&mut self, p: PointId, i: usize) -> PointConstraint {
        let mut even = Vec::new();
        let q = self.aux("half", PointSort::Twist(i), &mut even);
        let even_case = PointConstraint::Exists(even, Box::new(PointConstraint::Sum { s: p, p: q, q }));
        let mut odd = Vec::new();
        let q = self.aux("half", PointSort::Twist(i), &mut odd);
        let r = self.aux("double", PointSort::Twist(i), &mut odd);
        let b = self.aux("base", PointSort::Twist(i), &mut odd);
        let odd_case = PointConstraint::Exists(
            odd,
            Box::new(PointConstraint::And(vec![
                PointConstraint::Sum { s: r, p: q, q },
                PointConstraint::Multiple { p: b, c: 1 },
                PointConstraint::Sum { s: p, p: r, q: b },
            ])),
        );
        PointConstraint::Or(vec![even_case, odd_case])
    }

    fn term(&mut self, t: &PairTerm, scope: &HashMap<String, Pair>, decl: &mut Vec<PointId>, out: &mut Vec<PointConstraint>) -> Pair {
        match t {
            PairTerm::Var(v) => scope[v],
            PairTerm::Const(a, b) => {
                let p = self.aux("const", PointSort::Twist(1), decl);
                let q = self.aux("const", PointSort::Twist(2), decl);
                out.push(PointConstraint::Multiple { p, c: *a });
                out.push(PointConstraint::Multiple { p: q, c: *b });
                (p, q)
            }
            PairTerm::Add(a, b) => {
                let (a, b) = (self.term(a, scope, decl, out), self.term(b, scope, decl, out));
                self.sum(a, b, decl, out)
            }
            PairTerm::Sub(a, b) => {
                let (a, b) = (self.term(a, scope, decl, out), self.term(b, scope, decl, out));
                let d = (self.aux("diff", PointSort::Twist(1), decl), self.aux("diff", PointSort::Twist(2), decl));
                out.push(PointConstraint::Sum { s: a.0, p: d.0, q: b.0 });
                out.push(PointConstraint::Sum { s: a.1, p: d.1, q: b.1 });
                d
            }
            PairTerm::Scale(k, a) => {
                let a = self.term(a, scope, decl, out);
                self.scale(*k, a, decl, out)
            }
            PairTerm::Mix(a, b) => {
                let (a, b) = (self.term(a, scope, decl, out), self.term(b, scope, decl, out));
                (a.0, b.1)
            }
        }
    }

    fn sum(&mut self, a: Pair, b: Pair, decl: &mut Vec<PointId>, out: &mut Vec<PointConstraint>) -> Pair {
        let s = (self.aux("sum", PointSort::Twist(1), decl), self.aux("sum", PointSort::Twist(2), decl));
        out.push(PointConstraint::Sum { s: s.0, p: a.0, q: b.0 });
        out.push(PointConstraint::Sum { s: s.1, p: a.1, q: b.1 });
        s
    }

    /// Double-and-add, then a negation when `k < 0`.
    fn scale(&mut self, k: i64, a: Pair, decl: &mut Vec<PointId>, out: &mut Vec<PointConstraint>) -> Pair {
        if k == 0 {
            return self.term(&PairTerm::Const(0, 0), &HashMap::new(), decl, out);
        }
        let mut acc: Option<Pair> = None;
        let mut pow = a;
        let mut e = k.unsigned_abs();
        loop {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => pow,
                    Some(x) => self.sum(x, pow, decl, out),
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            pow = self.sum(pow, pow, decl, out);
        }
        let acc = acc.expect("k != 0");
        if k > 0 {
            return acc;
        }
        let zero = self.term(&PairTerm::Const(0, 0), &HashMap::new(), decl, out);
        let n = (self.aux("neg", PointSort::Twist(1), decl), self.aux("neg", PointSort::Twist(2), decl));
        out.push(PointConstraint::Sum { s: zero.0, p: n.0, q: acc.0 });
        out.push(PointConstraint::Sum { s: zero.1, p: n.1, q: acc.1 });
        n
    }

    fn atom(&mut self, a: &Atom, scope: &HashMap<String, Pair>) -> PointConstraint {
        let mut decl = Vec::new();
        let mut out = Vec::new();
        match a {
            Atom::Plus(p, q, s) => {
                let (p, q, s) = (self.term(p, scope, &mut decl, &mut out), self.term(q, scope, &mut decl, &mut out), self.term(s, scope, &mut decl, &mut out));
                out.push(PointConstraint::Sum { s: s.0, p: p.0, q: q.0 });
                out.push(PointConstraint::Sum { s: s.1, p: p.1, q: q.1 });
            }
            Atom::Z(p) => {
                let p = self.term(p, scope, &mut decl, &mut out);
                out.push(PointConstraint::Identity(p.1));
            }
            Atom::W(..) => panic!("W must be eliminated before point lowering"),
            Atom::Divides { modulus, target, .. } => {
                let (a, b) = self.term(modulus, scope, &mut decl, &mut out);
                let (c, d) = self.term(target, scope, &mut decl, &mut out);
                out.push(PointConstraint::Multiple { p: b, c: 1 });
                let m = self.aux("modulus", PointSort::General, &mut decl);
                out.push(PointConstraint::Split { t: m, a, b });
                out.push(self.divides_body(m, c, d));
            }
        }
        PointConstraint::Exists(decl, Box::new(PointConstraint::And(out)))
    }

    /// The target `(0,0)` is divisible by everything; otherwise the
    /// quadratic equations for `k = 1, 2, ..., 2^alpha`.
    fn divides_body(&mut self, m: PointId, c: PointId, d: PointId) -> PointConstraint {
        let zero = PointConstraint::And(vec![PointConstraint::Identity(c), PointConstraint::Identity(d)]);
        let mut decl = Vec::new();
        let mut eqs = Vec::new();
        let mut t = self.aux("target", PointSort::General, &mut decl);
        eqs.push(PointConstraint::Split { t, a: c, b: d });
        for (j, k) in self.cfg.multipliers().into_iter().enumerate() {
            if j > 0 {
                let next = self.aux("target", PointSort::General, &mut decl);
                eqs.push(PointConstraint::Double { out: next, inp: t });
                t = next;
            }
            let (y, z) = (self.field_var("y"), self.field_var("z"));
            eqs.push(PointConstraint::Conic { k, t, m, y, z });
        }
        PointConstraint::Or(vec![zero, PointConstraint::Exists(decl, Box::new(PointConstraint::And(eqs)))])
    }

    fn formula(&mut self, f: &SFormula, scope: &mut HashMap<String, Pair>) -> PointConstraint {
        match f {
            SFormula::Atom(a) => self.atom(a, scope),
            SFormula::And(v) => PointConstraint::And(v.iter().map(|f| self.formula(f, scope)).collect()),
            SFormula::Or(v) => PointConstraint::Or(v.iter().map(|f| self.formula(f, scope)).collect()),
            SFormula::Exists(vs, body) => {
                let mut decl = Vec::new();
                let mut parts = Vec::new();
                let saved: Vec<(String, Option<Pair>)> = vs.iter().map(|v| (v.clone(), scope.get(v).copied())).collect();
                for v in vs {
                    let p = self.point(&format!("{v}.1"), PointSort::Cyclic(1));
                    let q = self.point(&format!("{v}.2"), PointSort::Cyclic(2));
                    decl.extend([p, q]);
                    parts.push(self.membership(p, 1));
                    parts.push(self.membership(q, 2));
                    scope.insert(v.clone(), (p, q));
                }
                parts.push(self.formula(body, scope));
                for (v, old) in saved {
                    match old {
                        Some(p) => scope.insert(v, p),
                        None => scope.remove(&v),
                    };
                }
                PointConstraint::Exists(decl, Box::new(PointConstraint::And(parts)))
            }
        }
    }
}

/// Lowers a ground formula; free pair variables are read existentially.
pub fn stage3_points(f: &SFormula, cfg: &EngineConfig) -> PointFormula {
    let mut b = Builder { cfg, points: Vec::new(), counter: 0 };
    let free: Vec<String> = f.free_vars().into_iter().collect();
    let closed = SFormula::exists(free, f.clone());
    let root = b.formula(&closed, &mut HashMap::new());
    PointFormula { points: b.points, root }
}

impl fmt::Display for PointFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(pf: &PointFormula, c: &PointConstraint, depth: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            let pad = "  ".repeat(depth);
            let n = |p: &PointId| pf.name(*p).to_string();
            match c {
                PointConstraint::Exists(ps, b) => {
                    writeln!(f, "{pad}exists {}", ps.iter().map(n).collect::<Vec<_>>().join(" "))?;
                    go(pf, b, depth + 1, f)
                }
                PointConstraint::And(v) => {
                    writeln!(f, "{pad}and")?;
                    v.iter().try_for_each(|c| go(pf, c, depth + 1, f))
                }
                PointConstraint::Or(v) => {
                    writeln!(f, "{pad}or")?;
                    v.iter().try_for_each(|c| go(pf, c, depth + 1, f))
                }
                PointConstraint::Identity(p) => writeln!(f, "{pad}{} = O", n(p)),
                PointConstraint::Multiple { p, c } => writeln!(f, "{pad}{} = {c} P{}", n(p), pf.sort(*p).twist().unwrap_or(0)),
                PointConstraint::Sum { s, p, q } => writeln!(f, "{pad}{} = {} + {}", n(s), n(p), n(q)),
                PointConstraint::Split { t, a, b } => writeln!(f, "{pad}{} = {} + {}", n(t), n(a), n(b)),
                PointConstraint::Double { out, inp } => writeln!(f, "{pad}{} = 2 {}", n(out), n(inp)),
                PointConstraint::Conic { k, t, m, y, z } => writeln!(f, "{pad}x({}) {y}^2 + x({}) {z}^2 = 1  [k = {k}]", n(t), n(m)),
            }
        }
        go(self, &self.root, 0, f)
    }
}
