//! Bounded brute-force satisfiability for positive systems of integer
//! polynomial equations: the differential-testing oracle.
//!
//! Every variable ranges over `[-bound, bound]`. Equations that are linear in
//! their last unassigned variable fix it directly; otherwise the solver
//! branches on disjunctions first and then on the most constrained variable.

use std::collections::BTreeMap;

type Mono = Vec<(usize, u32)>;

/// Sparse integer polynomial in numbered variables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IntPoly {
    terms: BTreeMap<Mono, i128>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly::default()
    }

    pub fn constant(c: i128) -> Self {
        let mut p = IntPoly::zero();
        if c != 0 {
            p.terms.insert(Vec::new(), c);
        }
        p
    }

    pub fn var(v: usize) -> Self {
        let mut p = IntPoly::zero();
        p.terms.insert(vec![(v, 1)], 1);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn push(&mut self, m: Mono, c: i128) {
        let e = self.terms.entry(m).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.retain(|_, c| *c != 0);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut p = self.clone();
        for (m, c) in &o.terms {
            p.push(m.clone(), *c);
        }
        p
    }

    pub fn scale(&self, k: i128) -> Self {
        if k == 0 {
            return IntPoly::zero();
        }
        IntPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(-1))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut p = IntPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let mut m: BTreeMap<usize, u32> = m1.iter().copied().collect();
                for (v, e) in m2 {
                    *m.entry(*v).or_insert(0) += e;
                }
                p.push(m.into_iter().collect(), c1 * c2);
            }
        }
        p
    }

    pub fn vars(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.terms.keys().flat_map(|m| m.iter().map(|(v, _)| *v)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Value under a full assignment of its variables; `None` on overflow.
    pub fn eval(&self, val: &[Option<i64>]) -> Option<i128> {
        let mut acc: i128 = 0;
        for (m, c) in &self.terms {
            let mut t = *c;
            for (v, e) in m {
                let x = val[*v]? as i128;
                for _ in 0..*e {
                    t = t.checked_mul(x)?;
                }
            }
            acc = acc.checked_add(t)?;
        }
        Some(acc)
    }

    /// `coef * v + rest` when `v` is the only unassigned variable and occurs linearly.
    fn linear_in(&self, v: usize, val: &[Option<i64>]) -> Option<(i128, i128)> {
        let (mut coef, mut rest) = (0i128, 0i128);
        for (m, c) in &self.terms {
            let mut t = *c;
            let mut deg = 0;
            for (u, e) in m {
                if *u == v {
                    deg = *e;
                    continue;
                }
                let x = val[*u]? as i128;
                for _ in 0..*e {
                    t = t.checked_mul(x)?;
                }
            }
            match deg {
                0 => rest = rest.checked_add(t)?,
                1 => coef = coef.checked_add(t)?,
                _ => return None,
            }
        }
        Some((coef, rest))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Constraint {
    /// `p = 0`.
    Eq(IntPoly),
    And(Vec<Constraint>),
    Or(Vec<Constraint>),
}

impl Constraint {
    pub fn truth() -> Self {
        Constraint::And(Vec::new())
    }

    pub fn falsity() -> Self {
        Constraint::Or(Vec::new())
    }
}

/// A positive existential problem over `names.len()` integer variables.
#[derive(Clone, Debug)]
pub struct Problem {
    pub names: Vec<String>,
    pub root: Constraint,
}

/// A satisfying assignment with every variable in `[-bound, bound]`, if any.
/// Variables the constraints leave free are reported as zero.
pub fn solve(p: &Problem, bound: i64) -> Option<Vec<i64>> {
    let mut val = vec![None; p.names.len()];
    let mut goals = Vec::new();
    flatten(p.root.clone(), &mut goals);
    if search(goals, &mut val, bound) {
        Some(val.into_iter().map(|v| v.unwrap_or(0)).collect())
    } else {
        None
    }
}

fn flatten(c: Constraint, out: &mut Vec<Constraint>) {
    match c {
        Constraint::And(v) => v.into_iter().for_each(|c| flatten(c, out)),
        Constraint::Or(mut v) if v.len() == 1 => flatten(v.pop().unwrap(), out),
        c => out.push(c),
    }
}

enum Step {
    Fail,
    Progress,
    Stuck,
}

/// Drops satisfied equations and fixes forced variables.
fn propagate(goals: &mut Vec<Constraint>, val: &mut [Option<i64>], bound: i64, trail: &mut Vec<usize>) -> Step {
    let mut progress = false;
    let mut i = 0;
    while i < goals.len() {
        if let Constraint::Eq(p) = &goals[i] {
            let free: Vec<usize> = p.vars().into_iter().filter(|v| val[*v].is_none()).collect();
            match free.len() {
                0 => {
                    if p.eval(val) != Some(0) {
                        return Step::Fail;
                    }
                    goals.swap_remove(i);
                    progress = true;
                    continue;
                }
                1 => {
                    if let Some((coef, rest)) = p.linear_in(free[0], val) {
                        if coef == 0 {
                            if rest != 0 {
                                return Step::Fail;
                            }
                        } else {
                            if rest % coef != 0 {
                                return Step::Fail;
                            }
                            let x = -rest / coef;
                            if x.abs() > bound as i128 {
                                return Step::Fail;
                            }
                            val[free[0]] = Some(x as i64);
                            trail.push(free[0]);
                        }
                        goals.swap_remove(i);
                        progress = true;
                        continue;
                    }
                }
                _ => {}
            }
        }
        i += 1;
    }
    if progress {
        Step::Progress
    } else {
        Step::Stuck
    }
}

fn search(mut goals: Vec<Constraint>, val: &mut Vec<Option<i64>>, bound: i64) -> bool {
    let mut trail = Vec::new();
    let ok = loop {
        match propagate(&mut goals, val, bound, &mut trail) {
            Step::Fail => break false,
            Step::Progress => continue,
            Step::Stuck => break branch(goals, val, bound),
        }
    };
    if !ok {
        for v in trail {
            val[v] = None;
        }
    }
    ok
}

fn branch(mut goals: Vec<Constraint>, val: &mut Vec<Option<i64>>, bound: i64) -> bool {
    if goals.is_empty() {
        return true;
    }
    if let Some(i) = goals.iter().position(|g| matches!(g, Constraint::Or(_))) {
        let Constraint::Or(alts) = goals.swap_remove(i) else { unreachable!() };
        return alts.into_iter().any(|alt| {
            let mut g = goals.clone();
            flatten(alt, &mut g);
            search(g, val, bound)
        });
    }
    // Most frequent unassigned variable among the remaining equations.
    let mut count: BTreeMap<usize, usize> = BTreeMap::new();
    for g in &goals {
        if let Constraint::Eq(p) = g {
            for v in p.vars().into_iter().filter(|v| val[*v].is_none()) {
                *count.entry(v).or_insert(0) += 1;
            }
        }
    }
    let Some((&v, _)) = count.iter().max_by_key(|(v, c)| (**c, std::cmp::Reverse(**v))) else {
        return true;
    };
    for x in candidates(bound) {
        val[v] = Some(x);
        if search(goals.clone(), val, bound) {
            return true;
        }
    }
    val[v] = None;
    false
}

/// `0, 1, -1, 2, -2, ...` up to the bound.
fn candidates(bound: i64) -> impl Iterator<Item = i64> {
    std::iter::once(0).chain((1..=bound).flat_map(|k| [k, -k]))
}

/// Checks an assignment against a constraint.
pub fn holds(c: &Constraint, val: &[i64]) -> bool {
    let v: Vec<Option<i64>> = val.iter().map(|x| Some(*x)).collect();
    fn go(c: &Constraint, v: &[Option<i64>]) -> bool {
        match c {
            Constraint::Eq(p) => p.eval(v) == Some(0),
            Constraint::And(cs) => cs.iter().all(|c| go(c, v)),
            Constraint::Or(cs) => cs.iter().any(|c| go(c, v)),
        }
    }
    go(c, &v)
}
