//! The whole compiler as a pure function of source text and configuration.

use std::collections::HashMap;

use h10_algebra::{certify_nonsquare, NonSquareWitness, RatFunc, Rational};
use h10_core::{oracle, SFormula};

use crate::ast::IntFormula;
use crate::combine::{combine_single, CombineError};
use crate::config::Config;
use crate::parser::{parse, ParseError};
use crate::stage1::stage1_int_to_s;
use crate::stage2::stage2_eliminate;
use crate::stage3::{stage3_points, PointFormula};
use crate::stage4::{pair_values, stage4_lower, stage4_lower_with_witness, WitnessError};
use crate::stage5::{stage5_restrict, Restriction};
use crate::system::{Assignment, PolyEquation, PolySystem, Z1};

#[derive(Debug, thiserror::Error)]
pub enum CompileError {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Combine(#[from] CombineError),
    #[error(transparent)]
    Witness(#[from] WitnessError),
    #[error("z1 has no non-square certificate: {0}")]
    NonSquare(String),
    #[error("no satisfying assignment with every component in [-{0}, {0}]")]
    NoSolution(i64),
}

#[derive(Clone, Debug)]
pub struct Compiled {
    pub source: IntFormula,
    pub pairs: SFormula,
    pub ground: SFormula,
    pub points: PointFormula,
    /// Equations over the top field.
    pub system: PolySystem,
    /// Equations over `Q(z1, z2)`.
    pub restricted: Restriction,
    pub single: Option<PolyEquation>,
}

/// `z1` with its certificate of being a non-square in `Q(z1, z2)`.
pub fn z1_nonsquare(cfg: &Config) -> Result<(RatFunc<Rational>, NonSquareWitness<Rational>), CompileError> {
    let d = RatFunc::var(Z1);
    let w = certify_nonsquare(&d, cfg.engine.factor_bound).map_err(|e| CompileError::NonSquare(e.to_string()))?;
    Ok((d, w))
}

pub fn compile_formula(source: IntFormula, cfg: &Config) -> Result<Compiled, CompileError> {
    let pairs = stage1_int_to_s(&source);
    let ground = stage2_eliminate(&pairs, &cfg.engine);
    let points = stage3_points(&ground, &cfg.engine);
    let system = stage4_lower(&points, &cfg.engine.params);
    let restricted = stage5_restrict(&system, &cfg.engine.params);
    let single = if cfg.single_equation {
        let (d, w) = z1_nonsquare(cfg)?;
        Some(combine_single(&restricted.system, &d, &w, cfg.max_terms)?)
    } else {
        None
    };
    Ok(Compiled { source, pairs, ground, points, system, restricted, single })
}

pub fn compile(src: &str, cfg: &Config) -> Result<Compiled, CompileError> {
    compile_formula(parse(src)?, cfg)
}

/// Values of every unknown, over the top field and restricted to `K`.
#[derive(Clone, Debug)]
pub struct FullWitness {
    pub pairs: HashMap<String, (i64, i64)>,
    pub top: Assignment,
    pub restricted: HashMap<usize, RatFunc<Rational>>,
}

/// Finds pair values for the ground formula by bounded search, then carries
/// them through the group law to every unknown of the emitted systems.
pub fn witness(c: &Compiled, cfg: &Config, bound: i64) -> Result<FullWitness, CompileError> {
    let problem = c.ground.to_problem();
    let sol = oracle::solve(&problem, bound).ok_or(CompileError::NoSolution(bound))?;
    let mut pairs: HashMap<String, (i64, i64)> = HashMap::new();
    for (name, v) in problem.names.iter().zip(&sol) {
        let (stem, k) = name.rsplit_once('.').expect("component names end in .0 or .1");
        let e = pairs.entry(stem.to_string()).or_default();
        if k == "0" {
            e.0 = *v;
        } else {
            e.1 = *v;
        }
    }
    let pv = pair_values(&c.points, &pairs);
    let lowered = stage4_lower_with_witness(&c.points, &cfg.engine.params, pv)?;
    debug_assert_eq!(lowered.system, c.system);
    let top = lowered.witness.expect("witness requested");
    let restricted = c.restricted.restrict_assignment(&top);
    Ok(FullWitness { pairs, top, restricted })
}
