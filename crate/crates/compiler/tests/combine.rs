use std::collections::HashMap;

mod common;

use h10_algebra::{q, FieldElement, MPoly, RatFunc, Rational};
use h10_compiler::combine::{combine_pair, combine_single, CombineError};
use h10_compiler::config::Config;
use h10_compiler::pipeline::z1_nonsquare;
use h10_compiler::system::{eval_in_k, PolyEquation, PolySystem, VarSort};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn system(polys: Vec<MPoly<Rational>>, nvars: usize) -> PolySystem {
    PolySystem {
        vars: (0..nvars).map(|j| (format!("x{j}"), VarSort::K)).collect(),
        equations: polys.into_iter().map(|poly| PolyEquation { poly, provenance: String::new() }).collect(),
    }
}

#[test]
fn zero_pair_combines_to_zero() {
    let (d, w) = z1_nonsquare(&Config::default()).unwrap();
    assert_eq!(w.order, 1);
    let x = PolySystem::var(0);
    let eq = combine_single(&system(vec![x.clone(), x.clone()], 1), &d, &w, 1000).unwrap();
    let mut vals = HashMap::new();
    vals.insert(0, RatFunc::zero());
    assert!(eval_in_k(&eq.poly, &vals).is_zero());
}

#[test]
fn equal_pair_forces_the_common_root() {
    let (d, _) = z1_nonsquare(&Config::default()).unwrap();
    let p = PolySystem::var(0).sub(&MPoly::one());
    let combined = combine_pair(&p, &p, &d);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let x = common::random_k(&mut rng);
        let vals: HashMap<_, _> = [(0, x.clone())].into_iter().collect();
        assert_eq!(eval_in_k(&combined, &vals).is_zero(), x.is_one());
    }
    let vals: HashMap<_, _> = [(0, RatFunc::one())].into_iter().collect();
    assert!(eval_in_k(&combined, &vals).is_zero());
}

#[test]
fn combining_needs_a_valid_witness_and_a_restricted_system() {
    let (d, mut w) = z1_nonsquare(&Config::default()).unwrap();
    let x = PolySystem::var(0);
    let mut sys = system(vec![x.clone()], 1);
    sys.vars[0].1 = VarSort::L;
    assert_eq!(combine_single(&sys, &d, &w, 1000), Err(CombineError::Unrestricted));
    w.order = 2;
    assert_eq!(combine_single(&system(vec![x], 1), &d, &w, 1000), Err(CombineError::BadWitness));
}

#[test]
fn combined_equation_has_the_same_solutions_on_samples() {
    let (d, w) = z1_nonsquare(&Config::default()).unwrap();
    let solved = common::combiner_sweep(&d, &w, 1000, 11).unwrap();
    assert!(solved > 150, "{solved} samples solved the system");
}

#[test]
fn balanced_fold_of_many_equations() {
    let (d, w) = z1_nonsquare(&Config::default()).unwrap();
    let polys: Vec<_> = (0..5).map(|j| PolySystem::var(j).sub(&MPoly::from_int(j as i64))).collect();
    let eq = combine_single(&system(polys, 5), &d, &w, 100_000).unwrap();
    let sol: HashMap<_, _> = (0..5).map(|j| (j, RatFunc::constant(q(j as i64)))).collect();
    assert!(eval_in_k(&eq.poly, &sol).is_zero());
    for j in 0..5 {
        let mut off = sol.clone();
        off.insert(j, RatFunc::constant(q(j as i64 + 1)));
        assert!(!eval_in_k(&eq.poly, &off).is_zero());
    }
    assert_eq!(combine_single(&system(vec![], 0), &d, &w, 10), Err(CombineError::Empty));
}
