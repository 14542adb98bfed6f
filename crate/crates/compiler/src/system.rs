//! The target of compilation: polynomial equations in `z1, z2, h1, h2` and
//! numbered unknowns of sort `K` (the base field) or `L` (the top field).

use std::collections::HashMap;
use std::fmt;

use h10_algebra::{MPoly, RatFunc, Rational, VarSet};
use num_bigint::BigInt;
use num_integer::Integer;

pub const Z1: u32 = 0;
pub const Z2: u32 = 1;
pub const H1: u32 = 2;
pub const H2: u32 = 3;
/// Index of the first unknown inside polynomials.
pub const OFFSET: u32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VarSort {
    K,
    L,
}

impl fmt::Display for VarSort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", if *self == VarSort::K { "K" } else { "L" })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PolyEquation {
    pub poly: MPoly<Rational>,
    /// The source node the equation comes from.
    pub provenance: String,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct PolySystem {
    pub vars: Vec<(String, VarSort)>,
    pub equations: Vec<PolyEquation>,
}

impl PolySystem {
    /// Rendering names: the unknown `j` prints as `u{j}`.
    pub fn var_set(&self) -> VarSet {
        let mut names: Vec<String> = ["z1", "z2", "h1", "h2"].iter().map(|s| s.to_string()).collect();
        names.extend((0..self.vars.len()).map(|j| format!("u{j}")));
        VarSet::new(names)
    }

    pub fn var(j: usize) -> MPoly<Rational> {
        MPoly::var(OFFSET + j as u32)
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|(n, _)| n == name)
    }

    /// Whether no `h` symbol and no `L`-sorted unknown remains.
    pub fn is_restricted(&self) -> bool {
        self.vars.iter().all(|(_, s)| *s == VarSort::K)
            && self.equations.iter().all(|e| e.poly.degree_in(H1) <= 0 && e.poly.degree_in(H2) <= 0)
    }

    /// Whether every coefficient is an integer.
    pub fn has_integer_coefficients(&self) -> bool {
        self.equations.iter().all(|e| e.poly.terms().all(|(_, c)| c.is_integer()))
    }

    pub fn max_degree(&self) -> i64 {
        self.equations.iter().map(|e| e.poly.total_degree()).max().unwrap_or(0)
    }

    pub fn num_terms(&self) -> usize {
        self.equations.iter().map(|e| e.poly.num_terms()).sum()
    }
}

/// Scales a nonzero polynomial to integer coefficients without common factor
/// and with a positive leading coefficient.
pub fn primitive(p: &MPoly<Rational>) -> MPoly<Rational> {
    if p.is_zero() {
        return p.clone();
    }
    let l = p.terms().fold(BigInt::from(1), |l, (_, c)| l.lcm(c.denom()));
    let scaled = p.scale(&Rational::from_integer(l));
    let g = scaled.terms().fold(BigInt::from(0), |g, (_, c)| g.gcd(c.numer()));
    let mut out = scaled.scale(&Rational::new(1.into(), g));
    if out.lc() < Rational::from_integer(0.into()) {
        out = out.neg();
    }
    out
}

/// Values of unknowns, all stored in the top field.
pub type Assignment = HashMap<usize, h10_core::LElement>;

/// Evaluates an equation of an unrestricted system in `L`.
pub fn eval_in_l(t: &std::sync::Arc<h10_core::LTower>, p: &MPoly<Rational>, vals: &Assignment) -> h10_core::LElement {
    use h10_core::LElement;
    let zero = LElement::constant(t, Rational::from_integer(0.into()));
    let var = |v: u32| match v {
        Z1 => LElement::z(t, 1),
        Z2 => LElement::z(t, 2),
        H1 => LElement::h(t, 1),
        H2 => LElement::h(t, 2),
        j => vals.get(&((j - OFFSET) as usize)).cloned().unwrap_or_else(|| zero.clone()),
    };
    let lift = |c: &Rational| LElement::constant(t, c.clone());
    p.eval_with(&var, &lift, &zero)
}

/// Evaluates an equation of a restricted system in `K`.
pub fn eval_in_k(p: &MPoly<Rational>, vals: &HashMap<usize, RatFunc<Rational>>) -> RatFunc<Rational> {
    let zero = RatFunc::zero();
    let var = |v: u32| match v {
        Z1 => RatFunc::var(h10_core::lfield::Z1),
        Z2 => RatFunc::var(h10_core::lfield::Z2),
        H1 | H2 => panic!("h symbol in a restricted system"),
        j => vals.get(&((j - OFFSET) as usize)).cloned().unwrap_or_else(RatFunc::zero),
    };
    let lift = |c: &Rational| RatFunc::constant(c.clone());
    p.eval_with(&var, &lift, &zero)
}
