use h10_algebra::{q, ConstField, FieldElement, Rational, Tower, TowerElem, UPoly, URatFunc};
use h10_core::conic::{lift_fn, square_class, tower_ctx, TFn};
use h10_core::{
    find_obstruction, solve_conic, verify_obstruction, verify_solution, ConicBounds, ConicInstance, ConicOutcome,
    ConicSolution, CurveFunction, CurveParams, FnCtx,
};
use proptest::prelude::*;
use std::sync::Arc;

fn ctx() -> Arc<FnCtx<TowerElem>> {
    tower_ctx(&q(1), &q(1))
}

/// `x(n (z, h))` with constants in the tower.
fn xm(n: i64) -> TFn {
    let qctx = FnCtx::<Rational>::over_q(&CurveParams::default());
    lift_fn(&ctx(), CurveFunction::generic_multiple(&qctx, n).x().unwrap())
}

fn constant(n: i64) -> TFn {
    TFn::constant(&ctx(), TowerElem::from_int(n))
}

fn solved(inst: &ConicInstance) -> ConicSolution {
    match solve_conic(inst, &Tower::base(), ConicBounds::default()) {
        ConicOutcome::Solved(s) => s,
        ConicOutcome::NotFoundWithinBounds(r) => panic!("{r}"),
    }
}

#[test]
fn pythagorean_over_q() {
    let inst = ConicInstance::new(constant(1), constant(1), "pythagoras").unwrap();
    let s = solved(&inst);
    assert_eq!(s.tower.level(), 0);
    assert_eq!((s.y.clone(), s.z.clone(), s.w.clone()), (TFn::constant(&ctx(), TowerElem::rational(h10_algebra::qq(3, 5))), TFn::constant(&ctx(), TowerElem::rational(h10_algebra::qq(4, 5))), constant(1)));
    assert!(s.strong && verify_solution(&inst, &s));
}

#[test]
fn verification_rejects_bad_vectors() {
    let inst = ConicInstance::new(constant(1), constant(1), "pythagoras").unwrap();
    let s = solved(&inst);
    let zero = ConicSolution { y: constant(0), z: constant(0), w: constant(0), strong: false, ..s.clone() };
    assert!(!verify_solution(&inst, &zero));
    let bumped = ConicSolution { y: s.y.add(&constant(1)), ..s.clone() };
    assert!(!verify_solution(&inst, &bumped));
    let weak = ConicSolution { y: constant(1), z: constant(0), w: constant(1), strong: true, ..s };
    assert!(!verify_solution(&inst, &weak));
    assert!(ConicInstance::new(constant(0), constant(1), "degenerate").is_none());
}

#[test]
fn equal_coefficients_closed_form() {
    let inst = ConicInstance::new(xm(1), xm(1), "a = b").unwrap();
    let s = solved(&inst);
    assert_eq!(s.strategy, h10_core::Strategy::EqualCoefficients);
    assert_eq!(s.tower.level(), 1);
    assert!(s.strong && verify_solution(&inst, &s));
    let (y, z) = s.dehomogenize().unwrap();
    assert!(inst.a.mul(&y.square()).add(&inst.b.mul(&z.square())).is_one());
}

#[test]
fn doubled_point_needs_sqrt_two() {
    let inst = ConicInstance::new(xm(2), xm(1), "x(2Q), x(Q)").unwrap();
    let s = solved(&inst);
    assert!(s.strong && verify_solution(&inst, &s));
    assert!(s.tower.level() <= 2);
    assert_eq!(s.trail(), vec!["s1 = sqrt(2)".to_string()]);
}

#[test]
fn quadrupled_point_is_locally_obstructed() {
    let inst = ConicInstance::new(xm(4), xm(1), "x(4Q), x(Q)").unwrap();
    let ConicOutcome::NotFoundWithinBounds(r) = solve_conic(&inst, &Tower::base(), ConicBounds::default()) else {
        panic!("no solution over Q is expected");
    };
    let o = r.obstruction.expect("obstruction over Q");
    assert!(verify_obstruction(&inst, &o));
    let moved = h10_core::LocalObstruction { root: (o.root + 1) % o.prime, ..o.clone() };
    assert!(!verify_obstruction(&inst, &moved));
    let other = ConicInstance::new(xm(2), xm(1), "solvable").unwrap();
    assert!(!verify_obstruction(&other, &o));
    let t = Tower::base().adjoin_sqrt(&TowerElem::from_int(-1)).unwrap().adjoin_sqrt(&TowerElem::from_int(2)).unwrap();
    let o2 = find_obstruction(&inst, &t, 2000).expect("obstruction over Q(i, sqrt 2)");
    assert!(verify_obstruction(&inst, &o2));
}

#[test]
fn square_class_strips_squares_and_curve_factor() {
    let c = ctx();
    let f = c.f.clone();
    let p = UPoly::from_coeffs(vec![TowerElem::from_int(3), TowerElem::one()]);
    let g = TFn::from_z(&c, URatFunc::from_poly(p.mul(&p).mul(&f).scale(&TowerElem::from_int(5))));
    let (a, s) = square_class(&g).unwrap();
    assert_eq!(a, UPoly::constant(TowerElem::from_int(5)));
    assert_eq!(TFn::from_z(&c, URatFunc::from_poly(a)).mul(&s.square()), g);
}

fn small_fn() -> impl Strategy<Value = TFn> {
    (prop::collection::vec(-4i64..=4, 1..4), prop::collection::vec(-4i64..=4, 0..3)).prop_map(|(c, d)| {
        let lift = |v: &[i64]| URatFunc::from_poly(UPoly::<Rational>::from_ints(v));
        lift_fn(&ctx(), &CurveFunction::new(&FnCtx::<Rational>::over_q(&CurveParams::default()), lift(&c), lift(&d)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn equal_family_always_verifies(a in small_fn()) {
        prop_assume!(!a.is_zero());
        let inst = ConicInstance::new(a.clone(), a, "random a = b").unwrap();
        if let ConicOutcome::Solved(s) = solve_conic(&inst, &Tower::base(), ConicBounds::default()) {
            prop_assert!(verify_solution(&inst, &s));
        } else {
            prop_assert!(false, "closed form must apply");
        }
    }

    #[test]
    fn scaling_preserves_solutions(l in small_fn()) {
        prop_assume!(!l.is_zero());
        let inst = ConicInstance::new(xm(2), xm(1), "x(2Q), x(Q)").unwrap();
        let s = solved(&inst);
        prop_assert!(verify_solution(&inst, &s.scaled(&l)));
    }
}
