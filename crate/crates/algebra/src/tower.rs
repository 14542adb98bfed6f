//! Towers of quadratic extensions `Q(sqrt d1, ..., sqrt dk)`.
//!
//! A tower is a persistent chain: each level adjoins the square root of an
//! element of the previous level that is certified not to be a square there.
//! Elements carry `2^k` rational coordinates over the monomial basis in the
//! generators; index bit `j` records the power of generator `j + 1`.

use std::fmt;
use std::sync::Arc;

use num_traits::Signed;
use once_cell::sync::Lazy;

use crate::error::AlgebraError;
use crate::field::{rational_sqrt, ConstField, FieldElement, Rational};
use crate::upoly::{join_terms, UPoly};
use crate::zp;

pub struct Tower {
    level: usize,
    parent: Option<Arc<Tower>>,
    radicand: Option<TowerElem>,
    certificate: Option<NonSquareCert>,
    name: String,
}

static BASE: Lazy<Arc<Tower>> = Lazy::new(|| {
    Arc::new(Tower { level: 0, parent: None, radicand: None, certificate: None, name: String::new() })
});

/// Replayable evidence that an element is not a square in its field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NonSquareCert {
    /// A negative rational.
    Negative,
    /// A rational whose numerator times denominator is a non-residue mod `prime`.
    NonResidue { prime: u64 },
    /// The norm to the previous level is a non-square there.
    NormNonSquare(Box<NonSquareCert>),
    /// An element `a` of the previous level with both `a` and `a/d` non-squares.
    Embedded { direct: Box<NonSquareCert>, twisted: Box<NonSquareCert> },
    /// No certificate of the above shapes; established by the exact square-root search.
    Exhaustive,
}

impl Tower {
    pub fn base() -> Arc<Tower> {
        BASE.clone()
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn dim(&self) -> usize {
        1 << self.level
    }

    pub fn parent(&self) -> Option<&Arc<Tower>> {
        self.parent.as_ref()
    }

    pub fn radicand(&self) -> Option<&TowerElem> {
        self.radicand.as_ref()
    }

    pub fn certificate(&self) -> Option<&NonSquareCert> {
        self.certificate.as_ref()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Tower at `level`, which must not exceed this one's.
    pub fn ancestor(self: &Arc<Self>, level: usize) -> Arc<Tower> {
        assert!(level <= self.level, "ancestor level above tower");
        let mut t = self.clone();
        while t.level > level {
            t = t.parent.clone().expect("parent below top");
        }
        t
    }

    /// Structural equality: same radicands at every level.
    pub fn same(a: &Arc<Tower>, b: &Arc<Tower>) -> bool {
        if Arc::ptr_eq(a, b) {
            return true;
        }
        if a.level != b.level {
            return false;
        }
        match (&a.parent, &b.parent, &a.radicand, &b.radicand) {
            (Some(pa), Some(pb), Some(ra), Some(rb)) => Tower::same(pa, pb) && ra.c == rb.c,
            (None, None, _, _) => true,
            _ => false,
        }
    }

    pub fn is_ancestor_of(a: &Arc<Tower>, b: &Arc<Tower>) -> bool {
        a.level <= b.level && Tower::same(a, &b.ancestor(a.level))
    }

    /// Adjoins `sqrt(d)` after checking that `d` is not already a square.
    pub fn adjoin_sqrt(self: &Arc<Self>, d: &TowerElem) -> Result<Arc<Tower>, AlgebraError> {
        let name = format!("s{}", self.level + 1);
        self.adjoin_sqrt_named(d, &name)
    }

    pub fn adjoin_sqrt_named(
        self: &Arc<Self>,
        d: &TowerElem,
        name: &str,
    ) -> Result<Arc<Tower>, AlgebraError> {
        let d = self.embed(d);
        if d.is_zero() || d.sqrt().is_some() {
            return Err(AlgebraError::AlreadySquare);
        }
        let cert = certify_nonsquare_elem(&d);
        Ok(Arc::new(Tower {
            level: self.level + 1,
            parent: Some(self.clone()),
            radicand: Some(d),
            certificate: Some(cert),
            name: name.to_string(),
        }))
    }

    /// Adjoins `sqrt(d)` when needed; returns the tower and the root.
    pub fn ensure_sqrt(self: &Arc<Self>, d: &TowerElem) -> (Arc<Tower>, TowerElem) {
        let d = self.embed(d);
        if let Some(r) = d.sqrt() {
            return (self.clone(), r);
        }
        let t = self.adjoin_sqrt(&d).expect("non-square checked");
        let g = t.generator();
        (t, g)
    }

    /// The generator adjoined at this level.
    pub fn generator(self: &Arc<Self>) -> TowerElem {
        assert!(self.level > 0, "base field has no generator");
        let mut c = vec![rz(); self.dim()];
        c[self.dim() / 2] = Rational::from_integer(1.into());
        TowerElem { tower: self.clone(), c }
    }

    /// Generator number `j` (1-based) embedded into this tower.
    pub fn gen(self: &Arc<Self>, j: usize) -> TowerElem {
        self.embed(&self.ancestor(j).generator())
    }

    pub fn zero(self: &Arc<Self>) -> TowerElem {
        TowerElem { tower: self.clone(), c: vec![rz(); self.dim()] }
    }

    pub fn from_rational(self: &Arc<Self>, q: &Rational) -> TowerElem {
        let mut c = vec![rz(); self.dim()];
        c[0] = q.clone();
        TowerElem { tower: self.clone(), c }
    }

    pub fn from_int(self: &Arc<Self>, n: i64) -> TowerElem {
        self.from_rational(&Rational::from_integer(n.into()))
    }

    pub fn embed(self: &Arc<Self>, e: &TowerElem) -> TowerElem {
        if Arc::ptr_eq(&e.tower, self) {
            return e.clone();
        }
        assert!(Tower::is_ancestor_of(&e.tower, self), "element does not live in a subfield of this tower");
        let mut c = e.c.clone();
        c.resize(self.dim(), rz());
        TowerElem { tower: self.clone(), c }
    }

    /// Replays every level's non-square certificate.
    pub fn verify(&self) -> bool {
        match (&self.parent, &self.radicand, &self.certificate) {
            (None, _, _) => true,
            (Some(p), Some(d), Some(cert)) => p.verify() && verify_nonsquare(d, cert),
            _ => false,
        }
    }

    pub fn generator_names(&self) -> Vec<String> {
        let mut v = Vec::new();
        let mut t = Some(self);
        while let Some(tt) = t {
            if tt.level > 0 {
                v.push(tt.name.clone());
            }
            t = tt.parent.as_deref();
        }
        v.reverse();
        v
    }
}

impl fmt::Debug for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut chain = Vec::new();
        let mut t = Some(self);
        while let Some(tt) = t {
            if let Some(d) = &tt.radicand {
                chain.push(format!("{} = sqrt({})", tt.name, d));
            }
            t = tt.parent.as_deref();
        }
        chain.reverse();
        if chain.is_empty() {
            write!(f, "Q")
        } else {
            write!(f, "Q({})", chain.join(", "))
        }
    }
}

/// Deepest of two compatible towers.
pub fn common_tower(a: &Arc<Tower>, b: &Arc<Tower>) -> Arc<Tower> {
    if Arc::ptr_eq(a, b) {
        return a.clone();
    }
    let (hi, lo) = if a.level >= b.level { (a, b) } else { (b, a) };
    assert!(Tower::is_ancestor_of(lo, hi), "elements from incompatible towers");
    hi.clone()
}

#[derive(Clone)]
pub struct TowerElem {
    tower: Arc<Tower>,
    c: Vec<Rational>,
}

fn sub_slice(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn add_slice(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn all_zero(a: &[Rational]) -> bool {
    a.iter().all(|x| x.is_zero())
}

fn mul_c(t: &Tower, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if t.level == 0 {
        return vec![&a[0] * &b[0]];
    }
    let h = a.len() / 2;
    let p = t.parent.as_deref().unwrap();
    let d = &t.radicand.as_ref().unwrap().c;
    let (a0, a1) = a.split_at(h);
    let (b0, b1) = b.split_at(h);
    let a1z = all_zero(a1);
    let b1z = all_zero(b1);
    let mut out = Vec::with_capacity(2 * h);
    if a1z && b1z {
        out.extend(mul_c(p, a0, b0));
        out.extend(std::iter::repeat_with(rz).take(h));
    } else if a1z {
        out.extend(mul_c(p, a0, b0));
        out.extend(mul_c(p, a0, b1));
    } else if b1z {
        out.extend(mul_c(p, a0, b0));
        out.extend(mul_c(p, a1, b0));
    } else {
        let lo = add_slice(&mul_c(p, a0, b0), &mul_c(p, d, &mul_c(p, a1, b1)));
        let hi = add_slice(&mul_c(p, a0, b1), &mul_c(p, a1, b0));
        out.extend(lo);
        out.extend(hi);
    }
    out
}

fn inv_c(t: &Tower, a: &[Rational]) -> Option<Vec<Rational>> {
    if t.level == 0 {
        return if a[0].is_zero() { None } else { Some(vec![a[0].recip()]) };
    }
    let h = a.len() / 2;
    let p = t.parent.as_deref().unwrap();
    let d = &t.radicand.as_ref().unwrap().c;
    let (a0, a1) = a.split_at(h);
    if all_zero(a1) {
        let i = inv_c(p, a0)?;
        let mut out = i;
        out.extend(std::iter::repeat_with(rz).take(h));
        return Some(out);
    }
    let norm = sub_slice(&mul_c(p, a0, a0), &mul_c(p, d, &mul_c(p, a1, a1)));
    let ni = inv_c(p, &norm)?;
    let mut out = mul_c(p, a0, &ni);
    out.extend(mul_c(p, a1, &ni).into_iter().map(|x| -x));
    Some(out)
}

fn sqrt_c(t: &Tower, a: &[Rational]) -> Option<Vec<Rational>> {
    if t.level == 0 {
        return rational_sqrt(&a[0]).map(|r| vec![r]);
    }
    let h = a.len() / 2;
    let p = t.parent.as_deref().unwrap();
    let d = &t.radicand.as_ref().unwrap().c;
    let (a0, a1) = a.split_at(h);
    let zeros = || std::iter::repeat_with(rz).take(h);
    if all_zero(a1) {
        if let Some(s) = sqrt_c(p, a0) {
            let mut out = s;
            out.extend(zeros());
            return Some(out);
        }
        let dinv = inv_c(p, d)?;
        let s = sqrt_c(p, &mul_c(p, a0, &dinv))?;
        let mut out: Vec<Rational> = zeros().collect();
        out.extend(s);
        return Some(out);
    }
    let norm = sub_slice(&mul_c(p, a0, a0), &mul_c(p, d, &mul_c(p, a1, a1)));
    let n = sqrt_c(p, &norm)?;
    let half = Rational::new(1.into(), 2.into());
    for sign in [1i32, -1] {
        let cand: Vec<Rational> = if sign == 1 { add_slice(a0, &n) } else { sub_slice(a0, &n) };
        let cand: Vec<Rational> = cand.iter().map(|x| x * &half).collect();
        if let Some(x) = sqrt_c(p, &cand) {
            if all_zero(&x) {
                continue;
            }
            let two_x: Vec<Rational> = x.iter().map(|v| v * Rational::from_integer(2.into())).collect();
            let y = mul_c(p, a1, &inv_c(p, &two_x)?);
            let mut out = x;
            out.extend(y);
            if mul_c(t, &out, &out) == a {
                return Some(out);
            }
        }
    }
    None
}

impl TowerElem {
    pub fn tower(&self) -> &Arc<Tower> {
        &self.tower
    }

    pub fn coords(&self) -> &[Rational] {
        &self.c
    }

    pub fn from_coords(tower: &Arc<Tower>, c: Vec<Rational>) -> Self {
        assert_eq!(c.len(), tower.dim(), "coordinate count must match tower degree");
        TowerElem { tower: tower.clone(), c }
    }

    pub fn rational(q: Rational) -> Self {
        Tower::base().from_rational(&q)
    }

    /// Rational value if the element lies in the base field.
    pub fn as_rational(&self) -> Option<Rational> {
        if all_zero(&self.c[1..]) {
            Some(self.c[0].clone())
        } else {
            None
        }
    }

    /// Smallest level of the tower containing this element.
    pub fn min_level(&self) -> usize {
        let last = self.c.iter().rposition(|x| !x.is_zero()).unwrap_or(0);
        (usize::BITS - last.leading_zeros()) as usize
    }

    /// The same element expressed in the smallest ancestor containing it.
    pub fn shrink(&self) -> TowerElem {
        let l = self.min_level();
        let t = self.tower.ancestor(l);
        TowerElem { c: self.c[..t.dim()].to_vec(), tower: t }
    }

    fn pair(&self, o: &TowerElem) -> (Arc<Tower>, Vec<Rational>, Vec<Rational>) {
        if Arc::ptr_eq(&self.tower, &o.tower) {
            return (self.tower.clone(), self.c.clone(), o.c.clone());
        }
        let t = common_tower(&self.tower, &o.tower);
        let a = t.embed(self).c;
        let b = t.embed(o).c;
        (t, a, b)
    }

    /// Negates the top generator.
    pub fn conjugate_top(&self) -> TowerElem {
        if self.tower.level == 0 {
            return self.clone();
        }
        let h = self.c.len() / 2;
        let mut c = self.c.clone();
        for x in &mut c[h..] {
            *x = -x.clone();
        }
        TowerElem { tower: self.tower.clone(), c }
    }

    /// Norm to the previous level.
    pub fn norm_down(&self) -> TowerElem {
        let p = self.tower.parent.clone().expect("base has no norm");
        let n = self.mul(&self.conjugate_top());
        TowerElem { c: n.c[..p.dim()].to_vec(), tower: p }
    }

    /// Halves `(lo, hi)` with `self = lo + hi * top generator`.
    pub fn split_top(&self) -> (TowerElem, TowerElem) {
        let p = self.tower.parent.clone().expect("base has no generator");
        let h = self.c.len() / 2;
        (
            TowerElem { tower: p.clone(), c: self.c[..h].to_vec() },
            TowerElem { tower: p, c: self.c[h..].to_vec() },
        )
    }

    fn basis_name(&self, idx: usize) -> String {
        let names = self.tower.generator_names();
        let mut parts = Vec::new();
        for (j, n) in names.iter().enumerate() {
            if idx >> j & 1 == 1 {
                parts.push(n.clone());
            }
        }
        parts.join("*")
    }
}

impl PartialEq for TowerElem {
    fn eq(&self, o: &Self) -> bool {
        if Arc::ptr_eq(&self.tower, &o.tower) {
            return self.c == o.c;
        }
        let (hi, lo) = if self.tower.level >= o.tower.level { (self, o) } else { (o, self) };
        if !Tower::is_ancestor_of(&lo.tower, &hi.tower) {
            return false;
        }
        hi.c[..lo.c.len()] == lo.c[..] && all_zero(&hi.c[lo.c.len()..])
    }
}

impl fmt::Debug for TowerElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for TowerElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if i == 0 {
                parts.push(c.to_string());
                continue;
            }
            let b = self.basis_name(i);
            let one = Rational::from_integer(1.into());
            let t = if *c == one {
                b
            } else if *c == -one {
                format!("-{b}")
            } else if c.is_integer() {
                format!("{c}*{b}")
            } else if c.is_negative() {
                format!("-({})*{b}", -c)
            } else {
                format!("({c})*{b}")
            };
            parts.push(t);
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", join_terms(&parts))
        }
    }
}

impl FieldElement for TowerElem {
    fn zero_like(&self) -> Self {
        self.tower.zero()
    }
    fn one_like(&self) -> Self {
        self.tower.from_int(1)
    }
    fn int_like(&self, n: i64) -> Self {
        self.tower.from_int(n)
    }
    fn is_zero(&self) -> bool {
        all_zero(&self.c)
    }
    fn add(&self, rhs: &Self) -> Self {
        let (t, a, b) = self.pair(rhs);
        TowerElem { tower: t, c: add_slice(&a, &b) }
    }
    fn sub(&self, rhs: &Self) -> Self {
        let (t, a, b) = self.pair(rhs);
        TowerElem { tower: t, c: sub_slice(&a, &b) }
    }
    fn mul(&self, rhs: &Self) -> Self {
        let (t, a, b) = self.pair(rhs);
        let c = mul_c(&t, &a, &b);
        TowerElem { tower: t, c }
    }
    fn neg(&self) -> Self {
        TowerElem { tower: self.tower.clone(), c: self.c.iter().map(|x| -x).collect() }
    }
    fn inv(&self) -> Option<Self> {
        inv_c(&self.tower, &self.c).map(|c| TowerElem { tower: self.tower.clone(), c })
    }
}

impl ConstField for TowerElem {
    fn zero() -> Self {
        Tower::base().zero()
    }
    fn one() -> Self {
        Tower::base().from_int(1)
    }
    fn from_int(n: i64) -> Self {
        Tower::base().from_int(n)
    }
    fn from_rational(q: &Rational) -> Self {
        Tower::base().from_rational(q)
    }
    fn sqrt(&self) -> Option<Self> {
        sqrt_c(&self.tower, &self.c).map(|c| TowerElem { tower: self.tower.clone(), c })
    }
    fn factor_squarefree(p: &UPoly<Self>) -> Result<Vec<UPoly<Self>>, AlgebraError> {
        crate::factor::trager(p)
    }
}

/// Builds a certificate that `d` (nonzero, known non-square) is not a square.
pub fn certify_nonsquare_elem(d: &TowerElem) -> NonSquareCert {
    let t = d.tower.clone();
    if t.level == 0 {
        return certify_nonsquare_rational(&d.c[0]);
    }
    let (lo, hi) = d.split_top();
    if hi.is_zero() {
        let rad = t.radicand.as_ref().unwrap();
        let twisted = lo.div(rad).expect("radicand nonzero");
        if lo.sqrt().is_none() && twisted.sqrt().is_none() {
            return NonSquareCert::Embedded {
                direct: Box::new(certify_nonsquare_elem(&lo)),
                twisted: Box::new(certify_nonsquare_elem(&twisted)),
            };
        }
        return NonSquareCert::Exhaustive;
    }
    let n = d.norm_down();
    if !n.is_zero() && n.sqrt().is_none() {
        return NonSquareCert::NormNonSquare(Box::new(certify_nonsquare_elem(&n)));
    }
    NonSquareCert::Exhaustive
}

pub fn certify_nonsquare_rational(q: &Rational) -> NonSquareCert {
    if q.is_negative() {
        return NonSquareCert::Negative;
    }
    let nd = q.numer() * q.denom();
    for p in zp::small_primes().take(4000) {
        let r = zp::bigint_mod(&nd, p);
        if r != 0 && zp::legendre(r, p) == -1 {
            return NonSquareCert::NonResidue { prime: p };
        }
    }
    NonSquareCert::Exhaustive
}

/// Independent replay of a non-square certificate.
pub fn verify_nonsquare(d: &TowerElem, cert: &NonSquareCert) -> bool {
    match cert {
        NonSquareCert::Negative => d.tower.level == 0 && d.c[0].is_negative(),
        NonSquareCert::NonResidue { prime } => {
            if d.tower.level != 0 || !zp::is_prime_u64(*prime) || *prime == 2 {
                return false;
            }
            let nd = d.c[0].numer() * d.c[0].denom();
            let r = zp::bigint_mod(&nd, *prime);
            r != 0 && zp::legendre(r, *prime) == -1
        }
        NonSquareCert::NormNonSquare(inner) => {
            d.tower.level > 0 && verify_nonsquare(&d.norm_down(), inner)
        }
        NonSquareCert::Embedded { direct, twisted } => {
            if d.tower.level == 0 {
                return false;
            }
            let (lo, hi) = d.split_top();
            let rad = d.tower.radicand.as_ref().unwrap();
            hi.is_zero()
                && verify_nonsquare(&lo, direct)
                && verify_nonsquare(&lo.div(rad).unwrap(), twisted)
        }
        NonSquareCert::Exhaustive => !d.is_zero() && d.sqrt().is_none(),
    }
}

fn rz() -> Rational {
    <Rational as ConstField>::zero()
}
