//! Sparse multivariate polynomials in graded-lexicographic order.
//!
//! Variables are indices; index 0 is the largest variable. Names live in a
//! [`VarSet`], which renders and parses the canonical text form.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::AlgebraError;
use crate::field::{ConstField, FieldElement, Rational};
use crate::upoly::{join_terms, paren_if_needed, UPoly};

/// Sparse exponent vector: `(variable, exponent)` pairs sorted by variable,
/// exponents positive.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(Vec<(u32, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: u32, e: u32) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(v, e)])
        }
    }

    pub fn from_pairs(mut pairs: Vec<(u32, u32)>) -> Self {
        pairs.retain(|&(_, e)| e > 0);
        pairs.sort_unstable();
        let mut out: Vec<(u32, u32)> = Vec::with_capacity(pairs.len());
        for (v, e) in pairs {
            match out.last_mut() {
                Some((lv, le)) if *lv == v => *le += e,
                _ => out.push((v, e)),
            }
        }
        Monomial(out)
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.0
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exp(&self, v: u32) -> u32 {
        self.0.iter().find(|&&(w, _)| w == v).map_or(0, |&(_, e)| e)
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &o.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / o` if `o` divides `self`.
    pub fn div(&self, o: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for &(v, e) in &self.0 {
            if j < o.0.len() && o.0[j].0 < v {
                return None;
            }
            if j < o.0.len() && o.0[j].0 == v {
                let f = o.0[j].1;
                j += 1;
                match e.cmp(&f) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => out.push((v, e - f)),
                }
            } else {
                out.push((v, e));
            }
        }
        if j < o.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    pub fn without(&self, v: u32) -> Monomial {
        Monomial(self.0.iter().copied().filter(|&(w, _)| w != v).collect())
    }

    pub fn pow(&self, k: u32) -> Monomial {
        if k == 0 {
            return Monomial::one();
        }
        Monomial(self.0.iter().map(|&(v, e)| (v, e * k)).collect())
    }

    /// Lexicographic comparison with variable 0 most significant.
    fn lex_cmp(&self, o: &Monomial) -> Ordering {
        let (a, b) = (&self.0, &o.0);
        let n = a.len().min(b.len());
        for k in 0..n {
            if a[k].0 != b[k].0 {
                return if a[k].0 < b[k].0 { Ordering::Greater } else { Ordering::Less };
            }
            if a[k].1 != b[k].1 {
                return a[k].1.cmp(&b[k].1);
            }
        }
        a.len().cmp(&b.len())
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        self.total_degree().cmp(&o.total_degree()).then_with(|| self.lex_cmp(o))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct MPoly<F> {
    terms: BTreeMap<Monomial, F>,
}

impl<F: ConstField> Default for MPoly<F> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<F: ConstField> MPoly<F> {
    pub fn zero() -> Self {
        MPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    pub fn constant(c: F) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(F::from_int(n))
    }

    pub fn var(v: u32) -> Self {
        Self::term(F::one(), Monomial::var(v, 1))
    }

    pub fn term(c: F, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MPoly { terms }
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Monomial, F)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(x) => {
                *x = x.add(&c);
                if x.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &F)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.contains_key(&Monomial::one()))
    }

    pub fn constant_value(&self) -> Option<F> {
        if self.is_zero() {
            Some(F::zero())
        } else if self.is_constant() {
            self.terms.get(&Monomial::one()).cloned()
        } else {
            None
        }
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    /// Leading term in grlex order.
    pub fn leading(&self) -> Option<(&Monomial, &F)> {
        self.terms.iter().next_back()
    }

    pub fn lc(&self) -> F {
        self.leading().map_or_else(F::zero, |(_, c)| c.clone())
    }

    pub fn total_degree(&self) -> i64 {
        self.terms.keys().map(|m| m.total_degree() as i64).max().unwrap_or(-1)
    }

    pub fn degree_in(&self, v: u32) -> i64 {
        if self.is_zero() {
            return -1;
        }
        self.terms.keys().map(|m| m.exp(v) as i64).max().unwrap_or(0)
    }

    /// Sorted list of variables that occur.
    pub fn variables(&self) -> Vec<u32> {
        let mut vs: Vec<u32> = self.terms.keys().flat_map(|m| m.0.iter().map(|&(v, _)| v)).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    pub fn add(&self, o: &Self) -> Self {
        let (big, small) = if self.terms.len() >= o.terms.len() { (self, o) } else { (o, self) };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.neg());
        }
        out
    }

    pub fn neg(&self) -> Self {
        MPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect() }
    }

    pub fn scale(&self, k: &F) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        MPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.mul(k))).collect() }
    }

    pub fn mul_term(&self, m: &Monomial, k: &F) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        MPoly { terms: self.terms.iter().map(|(mm, c)| (mm.mul(m), c.mul(k))).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        if o.terms.len() == 1 {
            let (m, c) = o.terms.iter().next().unwrap();
            return self.mul_term(m, c);
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            return o.mul_term(m, c);
        }
        let mut acc: std::collections::HashMap<Monomial, F> =
            std::collections::HashMap::with_capacity(self.terms.len() * o.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                let m = ma.mul(mb);
                let c = ca.mul(cb);
                acc.entry(m).and_modify(|x| *x = x.add(&c)).or_insert(c);
            }
        }
        MPoly { terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc
    }

    /// Multivariate division by `d`, exact or `None`.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (lm, lc) = d.leading().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let lci = lc.inv().unwrap();
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&c.inv().unwrap()));
        }
        let mut r = self.clone();
        let mut q = Self::zero();
        while let Some((m, c)) = r.leading().map(|(m, c)| (m.clone(), c.clone())) {
            let qm = m.div(&lm)?;
            let qc = c.mul(&lci);
            r = r.sub(&d.mul_term(&qm, &qc));
            q.add_term(qm, qc);
        }
        Some(q)
    }

    pub fn derivative(&self, v: u32) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let e = m.exp(v);
            if e == 0 {
                continue;
            }
            let nm = m.div(&Monomial::var(v, 1)).unwrap();
            out.add_term(nm, c.mul(&F::from_int(e as i64)));
        }
        out
    }

    /// Coefficients with respect to `v`: entry `k` is the coefficient of `v^k`.
    pub fn coeffs_in(&self, v: u32) -> Vec<Self> {
        let d = self.degree_in(v);
        if d < 0 {
            return Vec::new();
        }
        let mut out = vec![Self::zero(); d as usize + 1];
        for (m, c) in &self.terms {
            let e = m.exp(v) as usize;
            out[e].add_term(m.without(v), c.clone());
        }
        out
    }

    pub fn from_coeffs_in(v: u32, cs: &[Self]) -> Self {
        let mut out = Self::zero();
        for (k, c) in cs.iter().enumerate() {
            out = out.add(&c.mul_term(&Monomial::var(v, k as u32), &F::one()));
        }
        out
    }

    /// Leading coefficient with respect to `v`.
    pub fn lc_in(&self, v: u32) -> Self {
        self.coeffs_in(v).pop().unwrap_or_else(Self::zero)
    }

    /// Substitutes `v := q`.
    pub fn substitute(&self, v: u32, q: &Self) -> Self {
        let cs = self.coeffs_in(v);
        let mut acc = Self::zero();
        for c in cs.iter().rev() {
            acc = acc.mul(q).add(c);
        }
        acc
    }

    /// Renames variables through `f`.
    pub fn rename(&self, f: impl Fn(u32) -> u32) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| {
            (Monomial::from_pairs(m.0.iter().map(|&(v, e)| (f(v), e)).collect()), c.clone())
        }))
    }

    /// Evaluation into any field containing the coefficients.
    pub fn eval_with<E: FieldElement>(&self, vals: &dyn Fn(u32) -> E, lift: &dyn Fn(&F) -> E, zero: &E) -> E {
        let mut acc = zero.clone();
        for (m, c) in &self.terms {
            let mut t = lift(c);
            for &(v, e) in &m.0 {
                t = t.mul(&vals(v).pow(e as u64));
            }
            acc = acc.add(&t);
        }
        acc
    }

    pub fn eval(&self, vals: &[F]) -> F {
        self.eval_with(&|v| vals[v as usize].clone(), &|c| c.clone(), &F::zero())
    }

    pub fn to_upoly(&self, v: u32) -> Option<UPoly<F>> {
        let vs = self.variables();
        if vs.iter().any(|&w| w != v) {
            return None;
        }
        Some(UPoly::from_coeffs(
            self.coeffs_in(v).into_iter().map(|c| c.constant_value().unwrap()).collect(),
        ))
    }

    pub fn from_upoly(p: &UPoly<F>, v: u32) -> Self {
        Self::from_terms(
            p.coeffs().iter().enumerate().map(|(k, c)| (Monomial::var(v, k as u32), c.clone())),
        )
    }

    pub fn map<G: ConstField>(&self, f: impl Fn(&F) -> G) -> MPoly<G> {
        MPoly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Divides by the grlex leading coefficient.
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        self.scale(&self.lc().inv().unwrap())
    }

    /// Canonical text form with the given variable names.
    pub fn render(&self, names: &VarSet) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| {
                let mon: Vec<String> = m
                    .0
                    .iter()
                    .map(|&(v, e)| {
                        let n = names.name(v);
                        if e == 1 {
                            n
                        } else {
                            format!("{n}^{e}")
                        }
                    })
                    .collect();
                let mon = mon.join("*");
                let cs = c.to_string();
                if mon.is_empty() {
                    paren_if_needed(&cs)
                } else if c.is_one() {
                    mon
                } else if c.neg().is_one() {
                    format!("-{mon}")
                } else {
                    format!("{}*{mon}", paren_if_needed(&cs))
                }
            })
            .collect();
        join_terms(&parts)
    }
}

impl MPoly<Rational> {
    /// Parses the canonical text form (also accepts extra parentheses and `-`).
    pub fn parse(s: &str, names: &VarSet) -> Result<Self, AlgebraError> {
        let mut p = PolyParser { s: s.as_bytes(), i: 0, names };
        let r = p.expr()?;
        p.ws();
        if p.i != p.s.len() {
            return Err(AlgebraError::Parse(format!("trailing input at byte {}", p.i)));
        }
        Ok(r)
    }
}

impl<F: ConstField> fmt::Display for MPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs = self.variables();
        let n = vs.last().map_or(0, |&v| v + 1);
        f.write_str(&self.render(&VarSet::indexed("x", n as usize)))
    }
}

/// Ordered variable names; position is the variable index.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct VarSet {
    names: Arc<Vec<String>>,
}

impl VarSet {
    pub fn new(names: Vec<String>) -> Self {
        VarSet { names: Arc::new(names) }
    }

    pub fn from_strs(names: &[&str]) -> Self {
        Self::new(names.iter().map(|s| s.to_string()).collect())
    }

    pub fn indexed(prefix: &str, n: usize) -> Self {
        Self::new((0..n).map(|i| format!("{prefix}{i}")).collect())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, v: u32) -> String {
        self.names.get(v as usize).cloned().unwrap_or_else(|| format!("_v{v}"))
    }

    pub fn index(&self, name: &str) -> Option<u32> {
        self.names.iter().position(|n| n == name).map(|i| i as u32)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn push(&mut self, name: String) -> u32 {
        Arc::make_mut(&mut self.names).push(name);
        (self.names.len() - 1) as u32
    }
}

struct PolyParser<'a> {
    s: &'a [u8],
    i: usize,
    names: &'a VarSet,
}

impl PolyParser<'_> {
    fn ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.i).copied()
    }

    fn err<T>(&self, msg: &str) -> Result<T, AlgebraError> {
        Err(AlgebraError::Parse(format!("{msg} at byte {}", self.i)))
    }

    fn expr(&mut self) -> Result<MPoly<Rational>, AlgebraError> {
        let mut acc = if self.peek() == Some(b'-') {
            self.i += 1;
            self.term()?.neg()
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.i += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.i += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MPoly<Rational>, AlgebraError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.i += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Some(b'/') => {
                    self.i += 1;
                    let d = self.factor()?;
                    match d.constant_value() {
                        Some(c) if !c.is_zero() => acc = acc.scale(&c.recip()),
                        _ => return self.err("division by non-constant"),
                    }
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<MPoly<Rational>, AlgebraError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.i += 1;
            self.ws();
            let st = self.i;
            while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
                self.i += 1;
            }
            let e: u32 = std::str::from_utf8(&self.s[st..self.i])
                .unwrap()
                .parse()
                .or_else(|_| self.err("bad exponent"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MPoly<Rational>, AlgebraError> {
        match self.peek() {
            Some(b'(') => {
                self.i += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.i += 1;
                Ok(e)
            }
            Some(b'-') => {
                self.i += 1;
                Ok(self.factor()?.neg())
            }
            Some(c) if c.is_ascii_digit() => {
                let st = self.i;
                while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
                    self.i += 1;
                }
                let n: num_bigint::BigInt = std::str::from_utf8(&self.s[st..self.i]).unwrap().parse().unwrap();
                Ok(MPoly::constant(Rational::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let st = self.i;
                while self.i < self.s.len()
                    && (self.s[self.i].is_ascii_alphanumeric() || self.s[self.i] == b'_')
                {
                    self.i += 1;
                }
                let name = std::str::from_utf8(&self.s[st..self.i]).unwrap();
                match self.names.index(name) {
                    Some(v) => Ok(MPoly::var(v)),
                    None => self.err(&format!("unknown variable '{name}'")),
                }
            }
            _ => self.err("unexpected input"),
        }
    }
}
