use std::collections::HashMap;

use h10_algebra::{q, qq, ConstField, FieldElement, MPoly, Rational};
use h10_compiler::ast::{Formula, Term};
use h10_compiler::parser::parse;
use h10_compiler::stage1::stage1_int_to_s;
use h10_compiler::stage2::{is_ground, stage2_eliminate};
use h10_compiler::stage3::{stage3_points, PointConstraint, PointFormula, PointId, PointSort, PointVar};
use h10_compiler::stage4::{stage4_lower, stage4_lower_with_witness, PointValue};
use h10_compiler::system::{eval_in_l, PolySystem, H1, H2, OFFSET, Z1, Z2};
use h10_core::{oracle_eval, Atom, CurveParams, EngineConfig, LTower, OracleVerdict, PairTerm, SFormula};

fn count(f: &SFormula, pred: impl Fn(&Atom) -> bool) -> usize {
    f.atoms().into_iter().filter(|a| pred(a)).count()
}

#[test]
fn parses_the_sample_sentences() {
    let f = parse("exists x . x + x = 4").unwrap();
    assert_eq!(f.vars, vec!["x"]);
    let x = || Box::new(Term::Var("x".into()));
    assert_eq!(f.body, Formula::Eq(Term::Add(x(), x()), Term::Const(4)));
    let g = parse("exists x . x * x = 2").unwrap();
    assert_eq!(g.body, Formula::Eq(Term::Mul(x(), x()), Term::Const(2)));
    let h = parse("exists x y . (x + x = 4) and (x * y = 6)").unwrap();
    assert!(matches!(h.body, Formula::And(ref v) if v.len() == 2));
}

#[test]
fn syntax_errors_carry_positions() {
    let e = parse("exists x . x + = 3").unwrap_err();
    assert_eq!((e.line, e.col), (1, 16));
    let e = parse("exists x .\n  y = 1").unwrap_err();
    assert_eq!(e.line, 2);
    assert!(parse("exists x . not x = 1").is_err());
    assert!(parse("exists x x . x = 1").is_err());
}

#[test]
fn stage1_doubling_sentence() {
    let s = stage1_int_to_s(&parse("exists x . x + x = 4").unwrap());
    let atoms = s.atoms();
    assert!(atoms.contains(&&Atom::Z(PairTerm::var("x"))));
    assert!(atoms.contains(&&Atom::Plus(PairTerm::var("x"), PairTerm::var("x"), PairTerm::Const(4, 0))));
    assert_eq!(atoms.len(), 2);
    assert_eq!(oracle_eval(&s, 5), OracleVerdict::TrueWithinBound);
}

#[test]
fn stage1_constant_equation_is_true() {
    let s = stage1_int_to_s(&parse("0 = 0").unwrap());
    assert_eq!(oracle_eval(&s, 0), OracleVerdict::TrueWithinBound);
    let s = stage1_int_to_s(&parse("0 = 1").unwrap());
    assert_eq!(oracle_eval(&s, 3), OracleVerdict::FalseWithinBound);
}

#[test]
fn stage1_product_uses_divides_and_swap() {
    let s = stage1_int_to_s(&parse("exists x y . x * y = 6").unwrap());
    assert_eq!(count(&s, |a| matches!(a, Atom::Divides { safe: false, .. })), 1);
    assert_eq!(count(&s, |a| matches!(a, Atom::W(..))), 1);
    let div = s.atoms().into_iter().find(|a| matches!(a, Atom::Divides { .. })).unwrap().clone();
    let Atom::Divides { modulus, .. } = div else { unreachable!() };
    assert_eq!(modulus, PairTerm::var("x").plus(PairTerm::Const(0, 1)));
    assert_eq!(oracle_eval(&s, 10), OracleVerdict::TrueWithinBound);
}

#[test]
fn stage2_expands_w_and_divides() {
    let cfg = EngineConfig::default();
    let w = SFormula::atom(Atom::W(PairTerm::var("p"), PairTerm::var("q")));
    let out = stage2_eliminate(&w, &cfg);
    assert_eq!(count(&out, |a| matches!(a, Atom::Divides { safe: true, .. })), 2);
    assert_eq!(out.atoms().len(), 2);

    let d = SFormula::atom(Atom::Divides { modulus: PairTerm::var("p"), target: PairTerm::var("q"), safe: false });
    let out = stage2_eliminate(&d, &cfg);
    assert!(is_ground(&out));
    assert!(matches!(out, SFormula::Exists(ref v, _) if v.len() == 1));
    assert_eq!(count(&out, |a| matches!(a, Atom::Divides { safe: true, .. })), 3);

    let plain = SFormula::atom(Atom::Plus(PairTerm::var("a"), PairTerm::var("b"), PairTerm::var("c")));
    assert_eq!(stage2_eliminate(&plain, &cfg), plain);
}

#[test]
fn stage3_divides_has_two_conics_and_one_doubling() {
    let cfg = EngineConfig::default();
    let d = SFormula::atom(Atom::Divides { modulus: PairTerm::var("p"), target: PairTerm::var("q"), safe: true });
    let pf = stage3_points(&d, &cfg);
    let census: HashMap<_, _> = pf.census().into_iter().collect();
    assert_eq!(census["conic"], 2);
    assert_eq!(census["double"], 1);
    let z = SFormula::atom(Atom::Z(PairTerm::var("p")));
    let census: HashMap<_, _> = stage3_points(&z, &cfg).census().into_iter().collect();
    // Membership of the two components uses three sums each.
    assert_eq!((census["identity"], census["sum"], census["split"], census["conic"]), (1, 6, 0, 0));
}

fn formula(points: Vec<(&str, PointSort)>, root: PointConstraint) -> PointFormula {
    PointFormula { points: points.into_iter().map(|(n, s)| PointVar { name: n.into(), sort: s }).collect(), root }
}

/// Evaluates with `z1, z2, h1, h2` and every unknown given as rationals.
fn eval_q(p: &MPoly<Rational>, fixed: [Rational; 4], vals: &HashMap<usize, Rational>) -> Rational {
    let var = |v: u32| match v {
        Z1 | Z2 | H1 | H2 => fixed[v as usize].clone(),
        j => vals.get(&((j - OFFSET) as usize)).cloned().unwrap_or_else(|| q(0)),
    };
    p.eval_with(&var, &|c: &Rational| c.clone(), &q(0))
}

#[test]
fn stage4_doubling_block_accepts_twice_zero_one() {
    let pf = formula(
        vec![("P", PointSort::General), ("D", PointSort::General)],
        PointConstraint::Exists(vec![PointId(0), PointId(1)], Box::new(PointConstraint::Double { out: PointId(1), inp: PointId(0) })),
    );
    let sys = stage4_lower(&pf, &CurveParams::default());
    assert!(sys.has_integer_coefficients());
    let idx = |n: &str| sys.vars.iter().position(|(m, _)| m.starts_with(n)).unwrap();
    let vals: HashMap<usize, Rational> = [
        (idx("P.X"), q(0)),
        (idx("P.Y"), q(1)),
        (idx("P.e"), q(0)),
        (idx("D.X"), qq(1, 4)),
        (idx("D.Y"), qq(-9, 8)),
        (idx("D.e"), q(0)),
        (idx("inv"), q(1)),
        (idx("slope"), qq(1, 2)),
    ]
    .into_iter()
    .collect();
    // h_i^2 = f_i at z = 0, so the defining relations hold too.
    let fixed = [q(0), q(0), q(1), q(1)];
    for e in &sys.equations {
        assert!(eval_q(&e.poly, fixed.clone(), &vals).is_zero(), "{}", e.provenance);
    }
    let mut wrong = vals.clone();
    wrong.insert(idx("D.Y"), qq(9, 8));
    assert!(sys.equations.iter().any(|e| !eval_q(&e.poly, fixed.clone(), &wrong).is_zero()));
}

#[test]
fn stage4_sum_with_identity_needs_no_inverse() {
    let (p, o, s) = (PointId(0), PointId(1), PointId(2));
    let pf = formula(
        vec![("P", PointSort::Twist(1)), ("O", PointSort::Twist(1)), ("S", PointSort::Twist(1))],
        PointConstraint::Exists(
            vec![p, o, s],
            Box::new(PointConstraint::And(vec![
                PointConstraint::Multiple { p, c: 3 },
                PointConstraint::Identity(o),
                PointConstraint::Sum { s, p, q: o },
            ])),
        ),
    );
    let params = CurveParams::default();
    let lowered = stage4_lower_with_witness(&pf, &params, HashMap::new()).unwrap();
    let w = lowered.witness.unwrap();
    let sys = &lowered.system;
    let t = LTower::new(params);
    for e in &sys.equations {
        assert!(eval_in_l(&t, &e.poly, &w).is_zero(), "{}", e.provenance);
    }
    for (j, (name, _)) in sys.vars.iter().enumerate() {
        if name.starts_with("inv") || name.starts_with("slope") {
            assert!(!w.contains_key(&j), "{name} was needed");
        }
    }
    let case = sys.vars.iter().position(|(n, _)| n.starts_with("case")).unwrap();
    assert_eq!(w[&case], h10_core::LElement::constant(&t, q(1)));
    // A wrong sum is rejected before any equation is written.
    let mut bad = HashMap::new();
    bad.insert(s, PointValue::Twist(4));
    assert!(stage4_lower_with_witness(&pf, &CurveParams::default(), bad).is_err());
}

#[test]
fn stage4_conic_equation_vanishes_on_a_certified_solution() {
    use h10_core::conic::{lift_fn, tower_ctx};
    use h10_core::{solve_conic, ConicInstance, ConicOutcome, CurveFunction, FnCtx};
    use h10_algebra::{Tower, TowerElem};

    let (t, m) = (PointId(0), PointId(1));
    let pf = formula(
        vec![("T", PointSort::General), ("M", PointSort::General)],
        PointConstraint::Exists(vec![t, m], Box::new(PointConstraint::Conic { k: 1, t, m, y: "y".into(), z: "z".into() })),
    );
    let params = CurveParams::default();
    let sys: PolySystem = stage4_lower(&pf, &params);
    let eq = sys.equations.iter().find(|e| e.provenance.contains("^2 = 1") && !e.provenance.contains("affine")).unwrap();

    let ctx = tower_ctx(&params.a, &params.b);
    let qctx = FnCtx::<Rational>::over_q(&params);
    let x = |n: i64| lift_fn(&ctx, CurveFunction::generic_multiple(&qctx, n).x().unwrap());
    let inst = ConicInstance::new(x(2), x(1), "x(2Q), x(Q)").unwrap();
    let ConicOutcome::Solved(sol) = solve_conic(&inst, &Tower::base(), Default::default()) else { panic!("solvable") };
    let (y, z) = sol.dehomogenize().unwrap();
    let idx = |n: &str| sys.vars.iter().position(|(v, _)| v.starts_with(n)).unwrap() as u32 + OFFSET;
    let zero = h10_core::conic::TFn::constant(&ctx, TowerElem::from_int(0));
    let var = |v: u32| {
        if v == idx("T.X") {
            inst.a.clone()
        } else if v == idx("M.X") {
            inst.b.clone()
        } else if v == idx("y") {
            y.clone()
        } else if v == idx("z") {
            z.clone()
        } else {
            zero.clone()
        }
    };
    let lift = |c: &Rational| h10_core::conic::TFn::constant(&ctx, TowerElem::rational(c.clone()));
    assert!(eq.poly.eval_with(&var, &lift, &zero).is_zero());
}
