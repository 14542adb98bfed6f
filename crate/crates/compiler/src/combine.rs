//! One equation from many: `p = 0 and q = 0` holds over `K` exactly when
//! `den(d) p^2 - num(d) q^2 = 0`, as long as `d` is not a square in `K`.

use h10_algebra::nonsquare::verify_witness;
use h10_algebra::{MPoly, NonSquareWitness, RatFunc, Rational};

use crate::system::{primitive, PolyEquation, PolySystem};

type P = MPoly<Rational>;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CombineError {
    #[error("the non-square witness does not verify")]
    BadWitness,
    #[error("the system still has unknowns over the top field; restrict it first")]
    Unrestricted,
    #[error("the system has no equation")]
    Empty,
    #[error("the combined equation exceeds {0} terms")]
    TooLarge(usize),
}

/// `den(d) p^2 - num(d) q^2`.
pub fn combine_pair(p: &P, q: &P, d: &RatFunc<Rational>) -> P {
    d.den().mul(&p.square()).sub(&d.num().mul(&q.square()))
}

/// Upper bound on the number of terms of `c p^2`, checked before expanding.
fn square_bound(p: &P, c: &P) -> usize {
    let t = p.num_terms();
    (t * (t + 1) / 2).saturating_mul(c.num_terms())
}

/// Folds the equations pairwise, balanced, so each polynomial is squared
/// only about `log2(n)` times.
pub fn combine_single(
    sys: &PolySystem,
    d: &RatFunc<Rational>,
    witness: &NonSquareWitness<Rational>,
    max_terms: usize,
) -> Result<PolyEquation, CombineError> {
    if !verify_witness(d, witness) {
        return Err(CombineError::BadWitness);
    }
    if !sys.is_restricted() {
        return Err(CombineError::Unrestricted);
    }
    let mut level: Vec<P> = sys.equations.iter().map(|e| e.poly.clone()).collect();
    if level.is_empty() {
        return Err(CombineError::Empty);
    }
    while level.len() > 1 {
        let mut next = Vec::with_capacity(level.len().div_ceil(2));
        for pair in level.chunks(2) {
            let p = match pair {
                [p, q] => {
                    if square_bound(p, d.den()) + square_bound(q, d.num()) > max_terms {
                        return Err(CombineError::TooLarge(max_terms));
                    }
                    primitive(&combine_pair(p, q, d))
                }
                [p] => p.clone(),
                _ => unreachable!(),
            };
            next.push(p);
        }
        level = next;
    }
    let provenance = format!("combination of {} equations through d = {}", sys.equations.len(), d);
    Ok(PolyEquation { poly: level.pop().unwrap(), provenance })
}
