//! Certificates that a rational function is not a square, via a place of odd order.

use crate::error::AlgebraError;
use crate::field::ConstField;
use crate::mgcd;
use crate::mpoly::MPoly;
use crate::ratfunc::RatFunc;

/// A squarefree polynomial `place` with `ord_place(d)` odd. When
/// `irreducible` is false the place may be a product of several prime
/// divisors, all of which then carry the same odd order.
#[derive(Clone, Debug, PartialEq)]
pub struct NonSquareWitness<F> {
    pub place: MPoly<F>,
    pub order: i64,
    pub irreducible: bool,
}

/// Order of `d` along the hypersurface of the squarefree polynomial `place`.
pub fn order_at<F: ConstField>(d: &RatFunc<F>, place: &MPoly<F>) -> i64 {
    if d.num().is_zero() {
        return i64::MAX;
    }
    mgcd::multiplicity(d.num(), place) as i64 - mgcd::multiplicity(d.den(), place) as i64
}

fn is_linear_primitive<F: ConstField>(p: &MPoly<F>) -> bool {
    p.variables().into_iter().any(|v| {
        p.degree_in(v) == 1 && mgcd::content_in(p, v).is_constant()
    })
}

/// Finds a place of odd order, or reports that `d` is a constant times a square.
pub fn certify_nonsquare<F: ConstField>(
    d: &RatFunc<F>,
    factor_bound: usize,
) -> Result<NonSquareWitness<F>, AlgebraError> {
    if d.num().is_zero() {
        return Err(AlgebraError::Unsupported("zero is a square".into()));
    }
    let (_, ns) = mgcd::squarefree(d.num());
    let (_, ds) = mgcd::squarefree(d.den());
    let cands = ns
        .into_iter()
        .map(|(p, m)| (p, m as i64))
        .chain(ds.into_iter().map(|(p, m)| (p, -(m as i64))));
    for (p, m) in cands {
        if m % 2 == 0 {
            continue;
        }
        let mut place = p;
        let mut irreducible = is_linear_primitive(&place);
        if !irreducible {
            let vs = place.variables();
            if vs.len() == 1 {
                let u = place.to_upoly(vs[0]).unwrap();
                if u.deg() as usize <= factor_bound {
                    let (_, fs) = u.factor(factor_bound)?;
                    place = MPoly::from_upoly(&fs[0].0, vs[0]);
                    irreducible = true;
                }
            }
        }
        return Ok(NonSquareWitness { order: order_at(d, &place), place, irreducible });
    }
    Err(AlgebraError::Unsupported("every squarefree part has even multiplicity".into()))
}

/// Replays a witness: the place is squarefree and the order is odd.
pub fn verify_witness<F: ConstField>(d: &RatFunc<F>, w: &NonSquareWitness<F>) -> bool {
    if w.place.is_constant() {
        return false;
    }
    let sqf = mgcd::squarefree(&w.place).1;
    let squarefree = sqf.iter().all(|(_, m)| *m == 1);
    let ord = order_at(d, &w.place);
    squarefree && ord == w.order && ord % 2 != 0
}
