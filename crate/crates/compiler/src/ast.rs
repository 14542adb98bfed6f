//! Existential integer sentences.

use std::fmt;

use h10_core::oracle::{self, Constraint, IntPoly, Problem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Var(String),
    Const(i64),
    Add(Box<Term>, Box<Term>),
    Mul(Box<Term>, Box<Term>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    Eq(Term, Term),
    And(Vec<Formula>),
    Or(Vec<Formula>),
}

/// `exists vars . body`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntFormula {
    pub vars: Vec<String>,
    pub body: Formula,
}

impl Term {
    fn poly(&self, index: &dyn Fn(&str) -> usize) -> IntPoly {
        match self {
            Term::Var(v) => IntPoly::var(index(v)),
            Term::Const(c) => IntPoly::constant(*c as i128),
            Term::Add(a, b) => a.poly(index).add(&b.poly(index)),
            Term::Mul(a, b) => a.poly(index).mul(&b.poly(index)),
        }
    }

    pub fn eval(&self, env: &dyn Fn(&str) -> i64) -> i128 {
        match self {
            Term::Var(v) => env(v) as i128,
            Term::Const(c) => *c as i128,
            Term::Add(a, b) => a.eval(env) + b.eval(env),
            Term::Mul(a, b) => a.eval(env) * b.eval(env),
        }
    }
}

impl Formula {
    pub fn equations(&self) -> Vec<(&Term, &Term)> {
        match self {
            Formula::Eq(a, b) => vec![(a, b)],
            Formula::And(v) | Formula::Or(v) => v.iter().flat_map(|f| f.equations()).collect(),
        }
    }

    fn constraint(&self, index: &dyn Fn(&str) -> usize) -> Constraint {
        match self {
            Formula::Eq(a, b) => Constraint::Eq(a.poly(index).sub(&b.poly(index))),
            Formula::And(v) => Constraint::And(v.iter().map(|f| f.constraint(index)).collect()),
            Formula::Or(v) => Constraint::Or(v.iter().map(|f| f.constraint(index)).collect()),
        }
    }

    pub fn holds(&self, env: &dyn Fn(&str) -> i64) -> bool {
        match self {
            Formula::Eq(a, b) => a.eval(env) == b.eval(env),
            Formula::And(v) => v.iter().all(|f| f.holds(env)),
            Formula::Or(v) => v.iter().any(|f| f.holds(env)),
        }
    }
}

impl IntFormula {
    pub fn to_problem(&self) -> Problem {
        let index = |v: &str| self.vars.iter().position(|w| w == v).expect("declared variable");
        Problem { names: self.vars.clone(), root: self.body.constraint(&index) }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Const(c) => write!(f, "{c}"),
            Term::Add(a, b) => write!(f, "({a} + {b})"),
            Term::Mul(a, b) => write!(f, "{a} * {b}"),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[Formula], op: &str| v.iter().map(|x| format!("({x})")).collect::<Vec<_>>().join(op);
        match self {
            Formula::Eq(a, b) => write!(f, "{a} = {b}"),
            Formula::And(v) => write!(f, "{}", join(v, " and ")),
            Formula::Or(v) => write!(f, "{}", join(v, " or ")),
        }
    }
}

impl fmt::Display for IntFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.vars.is_empty() {
            write!(f, "{}", self.body)
        } else {
            write!(f, "exists {} . {}", self.vars.join(" "), self.body)
        }
    }
}

/// Brute-force truth with every variable in `[-bound, bound]`.
pub fn oracle_eval(f: &IntFormula, bound: i64) -> bool {
    oracle::solve(&f.to_problem(), bound).is_some()
}
