//! Exact arithmetic: rationals, quadratic towers, univariate and multivariate
//! polynomials, factorization and rational functions.

pub mod error;
pub mod factor;
pub mod field;
pub mod heugcd;
pub mod mgcd;
pub mod modgcd;
pub mod mpoly;
pub mod nonsquare;
pub mod ratfunc;
pub mod tower;
pub mod upoly;
pub mod zp;

pub use error::AlgebraError;
pub use field::{q, qq, ConstField, FieldElement, Rational};
pub use mpoly::{MPoly, Monomial, VarSet};
pub use nonsquare::{certify_nonsquare, order_at, NonSquareWitness};
pub use ratfunc::{RatFunc, URatFunc};
pub use tower::{NonSquareCert, Tower, TowerElem};
pub use upoly::UPoly;
