mod common;

use h10_algebra::MPoly;
use h10_compiler::stage5::{reduce_h, stage5_restrict};
use h10_compiler::system::{PolyEquation, PolySystem, VarSort, H1};
use h10_core::CurveParams;

#[test]
fn restriction_is_a_ring_isomorphism_on_samples() {
    common::restriction_sweep(1000, 7).unwrap();
}

#[test]
fn defining_relation_restricts_to_nothing() {
    let params = CurveParams::default();
    let h = MPoly::var(H1);
    let z = MPoly::var(0);
    let rel = h.square().sub(&z.pow(3).add(&z).add(&MPoly::one()));
    assert!(reduce_h(&rel, &params).is_zero());
    let sys = PolySystem { vars: vec![], equations: vec![PolyEquation { poly: rel, provenance: "h1".into() }] };
    assert!(stage5_restrict(&sys, &params).system.equations.is_empty());
}

#[test]
fn base_unknowns_pass_through() {
    let params = CurveParams::default();
    let x = PolySystem::var(0);
    let sys = PolySystem {
        vars: vec![("x".into(), VarSort::K)],
        equations: vec![PolyEquation { poly: x.mul(&MPoly::var(0)).sub(&MPoly::one()), provenance: "x z1 = 1".into() }],
    };
    let r = stage5_restrict(&sys, &params);
    assert_eq!(r.system.vars, sys.vars);
    assert_eq!(r.system.equations.len(), 1);
    assert_eq!(r.system.equations[0].poly, sys.equations[0].poly);
}
