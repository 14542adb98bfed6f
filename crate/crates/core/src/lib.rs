//! Elliptic curves over function fields and the algebraic checks of the
//! divisibility model: valuations, divisors, square classes and conics.

pub mod cfunc;
pub mod conic;
pub mod curve;
pub mod divisor;
pub mod engine;
pub mod error;
pub mod lfield;
pub mod oracle;
pub mod series;
pub mod sformula;
pub mod valuation;

pub use cfunc::{CurveFunction, FnCtx};
pub use conic::{
    find_obstruction, solve_conic, verify_obstruction, verify_solution, ConicBounds, ConicInstance, ConicOutcome, ConicSolution, LocalObstruction,
    SearchReport, Strategy,
};
pub use curve::{Curve, CurveParams, CurvePoint};
pub use error::{CoreError, Result};
pub use lfield::{x_combination, LElement, LExpr, LTower};
pub use divisor::{
    divisor_of, is_square_over_closure, pullback_x, pullback_x_group_law, unit_at, unit_at_place, verify_ratio_witness, square_classes_distinct, Divisor, DivisorOptions, Place, PlaceKind,
    PlaceWitness, RootSign, SquareVerdict,
};
pub use valuation::{change_generators, lemma_square_gate, GateOutcome, RefutationWitness, ValuationOutcome, Valuer};
pub use engine::{
    build_equations, decode, define_divides, define_w, encode_pair, model_add, replay_certificate, replay_refutation, DivInstance, Engine,
    EngineConfig, Equation, EquationBundle, ModelElement, Verdict,
};
pub use sformula::{evaluate_atom, oracle_eval, Atom, Fresh, OracleVerdict, PairTerm, SFormula, SFormulaTemplate};
