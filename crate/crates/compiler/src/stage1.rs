//! Integers as pairs `(n, 0)`: sums become `Plus` atoms and each product node
//! a fresh pair defined through divisibility and the swap relation.

use h10_core::{Atom, Fresh, PairTerm, SFormula};

use crate::ast::{Formula, IntFormula, Term};

struct Lowering {
    fresh: Fresh,
    /// Fresh pair variables and the atoms defining them, per equation.
    vars: Vec<String>,
    atoms: Vec<SFormula>,
}

impl Lowering {
    fn fresh_var(&mut self, stem: &str) -> String {
        let v = self.fresh.name(stem);
        self.vars.push(v.clone());
        v
    }

    fn term(&mut self, t: &Term) -> PairTerm {
        match t {
            Term::Var(v) => PairTerm::var(v.clone()),
            Term::Const(c) => PairTerm::Const(*c, 0),
            Term::Add(a, b) => {
                let (a, b) = (self.term(a), self.term(b));
                let s = PairTerm::var(self.fresh_var("sum"));
                self.atoms.push(SFormula::atom(Atom::Plus(a, b, s.clone())));
                s
            }
            Term::Mul(a, b) => {
                let (a, b) = (self.term(a), self.term(b));
                let t = PairTerm::var(self.fresh_var("prod"));
                let e = PairTerm::var(self.fresh_var("swap"));
                let modulus = a.plus(PairTerm::Const(0, 1));
                self.atoms.push(SFormula::atom(Atom::Z(t.clone())));
                self.atoms.push(SFormula::atom(Atom::Divides { modulus, target: t.clone().plus(e.clone()), safe: false }));
                self.atoms.push(SFormula::atom(Atom::W(e, b)));
                t
            }
        }
    }

    /// `lhs = rhs` with a sum on either side folded into the `Plus` atom.
    fn equation(&mut self, lhs: &Term, rhs: &Term) -> SFormula {
        let atom = match (lhs, rhs) {
            (Term::Add(a, b), r) | (r, Term::Add(a, b)) => {
                let (a, b, r) = (self.term(a), self.term(b), self.term(r));
                Atom::Plus(a, b, r)
            }
            (l, r) => {
                let (l, r) = (self.term(l), self.term(r));
                Atom::Plus(l, PairTerm::Const(0, 0), r)
            }
        };
        self.atoms.push(SFormula::atom(atom));
        let body = SFormula::And(std::mem::take(&mut self.atoms));
        SFormula::exists(std::mem::take(&mut self.vars), body)
    }

    fn formula(&mut self, f: &Formula) -> SFormula {
        match f {
            Formula::Eq(a, b) => self.equation(a, b),
            Formula::And(v) => SFormula::And(v.iter().map(|f| self.formula(f)).collect()),
            Formula::Or(v) => SFormula::Or(v.iter().map(|f| self.formula(f)).collect()),
        }
    }
}

/// Each integer variable becomes a pair variable with second component zero.
pub fn stage1_int_to_s(f: &IntFormula) -> SFormula {
    let mut l = Lowering { fresh: Fresh::default(), vars: Vec::new(), atoms: Vec::new() };
    let body = l.formula(&f.body);
    let mut parts: Vec<SFormula> = f.vars.iter().map(|v| SFormula::atom(Atom::Z(PairTerm::var(v.clone())))).collect();
    parts.push(body);
    SFormula::exists(f.vars.clone(), SFormula::And(parts))
}
