//! Restriction of scalars from `L` to `K`: every `L` unknown becomes four `K`
//! unknowns on the basis `1, h1, h2, h1 h2`, and every equation splits into
//! its four coordinates after reducing `h_i^2` to `f_i(z_i)`.

use std::collections::HashMap;

use h10_algebra::{MPoly, Monomial, RatFunc, Rational};
use h10_core::CurveParams;

use crate::system::{primitive, Assignment, PolyEquation, PolySystem, VarSort, H1, H2, OFFSET, Z1, Z2};

type P = MPoly<Rational>;

const BASIS: [&str; 4] = ["1", "h1", "h2", "h1*h2"];

/// Unknowns of the restricted system, in terms of those of the original one.
#[derive(Clone, Debug, PartialEq)]
pub struct Restriction {
    pub system: PolySystem,
    /// For every original unknown, the indices of its coordinates.
    pub coords: Vec<Vec<usize>>,
}

impl Restriction {
    /// Coordinates of an assignment of the original unknowns.
    pub fn restrict_assignment(&self, a: &Assignment) -> HashMap<usize, RatFunc<Rational>> {
        let mut out = HashMap::new();
        for (j, value) in a {
            for (k, idx) in self.coords[*j].iter().enumerate() {
                out.insert(*idx, value.coord(k).clone());
            }
        }
        out
    }
}

fn f_poly(params: &CurveParams, z: u32) -> P {
    let z = P::var(z);
    z.pow(3).add(&z.scale(&params.a)).add(&P::constant(params.b.clone()))
}

/// Replaces `h_i^2` by `f_i`, leaving every `h` exponent below two.
pub fn reduce_h(p: &P, params: &CurveParams) -> P {
    let f = [f_poly(params, Z1), f_poly(params, Z2)];
    let mut powers: HashMap<(usize, u32), P> = HashMap::new();
    let mut out = P::zero();
    for (m, c) in p.terms() {
        let (e1, e2) = (m.exp(H1), m.exp(H2));
        if e1 < 2 && e2 < 2 {
            out.add_term(m.clone(), c.clone());
            continue;
        }
        let rest = m.without(H1).without(H2).mul(&Monomial::var(H1, e1 % 2)).mul(&Monomial::var(H2, e2 % 2));
        let mut term = P::term(c.clone(), rest);
        for (i, e) in [(0, e1 / 2), (1, e2 / 2)] {
            if e > 0 {
                let fp = powers.entry((i, e)).or_insert_with(|| f[i].pow(e));
                term = term.mul(fp);
            }
        }
        out = out.add(&term);
    }
    out
}

/// The four coordinates of a polynomial whose `h` exponents are below two.
fn components(p: &P) -> [P; 4] {
    let mut out = [P::zero(), P::zero(), P::zero(), P::zero()];
    for (m, c) in p.terms() {
        let k = (m.exp(H1) + 2 * m.exp(H2)) as usize;
        out[k].add_term(m.without(H1).without(H2), c.clone());
    }
    out
}

pub fn stage5_restrict(sys: &PolySystem, params: &CurveParams) -> Restriction {
    let mut vars = Vec::new();
    let mut coords = Vec::new();
    for (name, sort) in &sys.vars {
        match sort {
            VarSort::K => {
                coords.push(vec![vars.len()]);
                vars.push((name.clone(), VarSort::K));
            }
            VarSort::L => {
                coords.push((0..4).map(|k| vars.len() + k).collect());
                vars.extend((0..4).map(|k| (format!("{name}.{k}"), VarSort::K)));
            }
        }
    }
    let basis = [P::one(), P::var(H1), P::var(H2), P::var(H1).mul(&P::var(H2))];
    // Coordinates combined once per `L` unknown.
    let lifted: Vec<Option<P>> = sys
        .vars
        .iter()
        .zip(&coords)
        .map(|((_, s), idx)| {
            (*s == VarSort::L).then(|| {
                idx.iter().zip(&basis).fold(P::zero(), |acc, (i, b)| acc.add(&PolySystem::var(*i).mul(b)))
            })
        })
        .collect();
    // Original unknowns are moved past every new index before substituting.
    let shift = OFFSET + vars.len() as u32;
    let mut equations = Vec::new();
    for eq in &sys.equations {
        let mut p = eq.poly.rename(|v| if v < OFFSET { v } else { v + shift });
        for v in p.variables() {
            if v < OFFSET {
                continue;
            }
            let j = (v - OFFSET - shift) as usize;
            p = match &lifted[j] {
                Some(q) => p.substitute(v, q),
                None => p.rename(|w| if w == v { OFFSET + coords[j][0] as u32 } else { w }),
            };
        }
        let p = reduce_h(&p, params);
        for (k, c) in components(&p).into_iter().enumerate() {
            if !c.is_zero() {
                let provenance = format!("{} [coefficient of {}]", eq.provenance, BASIS[k]);
                equations.push(PolyEquation { poly: primitive(&c), provenance });
            }
        }
    }
    Restriction { system: PolySystem { vars, equations }, coords }
}
