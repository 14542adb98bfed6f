use std::collections::HashMap;
use std::sync::OnceLock;

use h10_core::conic::verify_obstruction;
use h10_core::lfield::{l_curve, point_combination};
use h10_core::{
    build_equations, decode, define_divides, define_w, encode_pair, model_add, oracle_eval, pullback_x, replay_certificate, replay_refutation,
    x_combination, CoreError, CurveFunction, DivInstance, Engine, EngineConfig, FnCtx, OracleVerdict, PairTerm, RootSign, SFormula, Fresh, Verdict,
};
use proptest::prelude::*;

fn engine() -> &'static Engine {
    static E: OnceLock<Engine> = OnceLock::new();
    E.get_or_init(|| Engine::new(EngineConfig::default()).unwrap())
}

fn c(a: i64, b: i64) -> PairTerm {
    PairTerm::Const(a, b)
}

fn holds(f: &SFormula, bound: i64) -> bool {
    oracle_eval(f, bound) == OracleVerdict::TrueWithinBound
}

fn w_holds(p: (i64, i64), q: (i64, i64)) -> bool {
    let cfg = EngineConfig::default();
    holds(&define_w(&cfg).instantiate(&[c(p.0, p.1), c(q.0, q.1)], &mut Fresh::default()), 0)
}

#[test]
fn config_validation() {
    assert!(EngineConfig::default().validate().is_ok());
    let with = |f: fn(&mut EngineConfig)| {
        let mut c = EngineConfig::default();
        f(&mut c);
        c.validate()
    };
    assert!(matches!(with(|c| c.m0 = 0), Err(CoreError::InvalidConfig(_))));
    assert!(matches!(with(|c| c.alpha = 0), Err(CoreError::InvalidConfig(_))));
    assert!(matches!(with(|c| c.d = 0), Err(CoreError::InvalidConfig(_))));
    assert!(matches!(with(|c| { c.exceptional.insert(1); }), Err(CoreError::InvalidConfig(_))));
    assert!(matches!(with(|c| { c.exceptional.insert(3); }), Err(CoreError::InvalidConfig(_))));
    assert!(with(|c| {
        c.exceptional.insert(3);
        c.d = 3;
    })
    .is_ok());
}

#[test]
fn equations_for_two_two_one() {
    let e = engine();
    let b = e.build_equations(DivInstance::new(2, 2, 1)).unwrap();
    assert_eq!(b.equations.len(), 2);
    let t = e.tower();
    assert_eq!(b.equations[0].a, x_combination(t, 2, 1).unwrap());
    assert_eq!(b.equations[1].a, x_combination(t, 4, 2).unwrap());
    assert!(b.equations.iter().all(|q| q.b == x_combination(t, 2, 1).unwrap()));
    assert_eq!(b.equations.iter().map(|q| q.k).collect::<Vec<_>>(), vec![1, 2]);
}

#[test]
fn equations_reject_the_identity() {
    let e = engine();
    assert_eq!(e.build_equations(DivInstance::new(1, 0, 0)).unwrap_err(), CoreError::ExceptionalPoint { n: 0, r: 0 });
}

#[test]
fn equation_coefficients_are_x_of_points_on_the_curve() {
    let e = engine();
    let t = e.tower();
    let b = e.build_equations(DivInstance::new(1, 1, 2)).unwrap();
    for q in &b.equations {
        let p = point_combination(t, q.k, 2 * q.k);
        assert!(l_curve(t).on_curve(&p));
        assert_eq!(p.x(), Some(&q.a));
    }
}

#[test]
fn exceptional_moduli_are_refused() {
    let mut cfg = EngineConfig::default();
    cfg.exceptional.insert(2);
    cfg.d = 2;
    let e = Engine::new(cfg).unwrap();
    assert!(matches!(e.refute(DivInstance::new(2, 1, 1)), Err(CoreError::NotApplicable(_))));
    assert!(matches!(e.build_equations(DivInstance::new(2, 1, 1)), Err(CoreError::NotApplicable(_))));
}

#[test]
fn refutation_examples() {
    let e = engine();
    for (m, n, r) in [(1, 1, 2), (0, 1, 1)] {
        let inst = DivInstance::new(m, n, r);
        let v = e.refute(inst).unwrap();
        let Verdict::Refuted { k, witness, square_classes } = &v else { panic!("{inst}: {v}") };
        assert_eq!(*k, 1);
        assert!(replay_refutation(e.config(), e.tower(), inst, witness).unwrap());
        assert!(square_classes.as_ref().unwrap().distinct);
        assert_eq!(witness.residue, pullback_x(e.tower().curve_ctx(), inst.s(), r, RootSign::Plus).unwrap());
    }
    assert!(matches!(e.refute(DivInstance::new(2, 2, 1)), Err(CoreError::NotApplicable(_))));
}

#[test]
fn tampered_refutations_do_not_replay() {
    let e = engine();
    let inst = DivInstance::new(1, 1, 2);
    let Verdict::Refuted { witness, .. } = e.refute(inst).unwrap() else { panic!() };
    let other = DivInstance::new(1, 2, 2);
    assert!(!replay_refutation(e.config(), e.tower(), DivInstance::new(0, 1, 2), &witness).unwrap());
    let mut w = witness.clone();
    w.order_b = 2;
    assert!(!replay_refutation(e.config(), e.tower(), inst, &w).unwrap());
    let mut w = witness;
    w.residue = pullback_x(e.tower().curve_ctx(), 1, 1, RootSign::Plus).unwrap();
    assert!(!replay_refutation(e.config(), e.tower(), inst, &w).unwrap());
    assert!(other.holds());
}

#[test]
fn certification_of_the_equal_family() {
    let e = engine();
    for m in -3..=3 {
        let inst = DivInstance::new(m, m, 1);
        let v = e.certify(inst).unwrap();
        let Verdict::Certified(sols) = &v else { panic!("{inst}: {v}") };
        assert_eq!(sols.len(), 2);
        assert!(replay_certificate(e, inst, sols).unwrap());
        assert!(sols.last().unwrap().1.tower.level() <= 2);
    }
    assert!(matches!(e.certify(DivInstance::new(1, 1, 2)), Err(CoreError::NotApplicable(_))));
}

#[test]
fn doubled_instances_stop_at_a_verified_obstruction() {
    let e = engine();
    let v = e.certify(DivInstance::new(1, 2, 2)).unwrap();
    let Verdict::Inconclusive { report: Some(rep), .. } = &v else { panic!("{v}") };
    let (_, inst) = e.conic_instances(2).unwrap().pop().unwrap();
    assert!(verify_obstruction(&inst, rep.obstruction.as_ref().unwrap()));
}

#[test]
fn zero_second_component_is_exceptional_for_certification() {
    let v = engine().certify(DivInstance::new(2, 0, 0)).unwrap();
    assert!(matches!(v, Verdict::Inconclusive { .. }));
}

/// Both directions over `m` in `[-3, 3]` and `n, r` in `[-2, 2]`.
#[test]
fn soundness_sweep() {
    let e = engine();
    for m in -3..=3 {
        for n in -2..=2 {
            for r in -2..=2 {
                let inst = DivInstance::new(m, n, r);
                if inst.holds() {
                    assert!(matches!(e.refute(inst), Err(CoreError::NotApplicable(_))));
                    assert!(!e.certify(inst).unwrap().is_refuted());
                } else {
                    assert!(matches!(e.certify(inst), Err(CoreError::NotApplicable(_))));
                    let v = e.refute(inst).unwrap();
                    assert!(v.is_refuted(), "{inst}: {v}");
                }
            }
        }
    }
}

#[test]
fn w_examples() {
    assert!(w_holds((1, 2), (2, 1)));
    assert!(w_holds((0, 0), (0, 0)));
    assert!(!w_holds((1, 0), (0, 0)));
}

#[test]
fn w_template_matches_the_swap_on_the_window() {
    let cfg = EngineConfig::default();
    let t = define_w(&cfg);
    for m in -10..=10 {
        for n in -10..=10 {
            for r in -10..=10 {
                for s in [-10, -3, 0, 1, 7, 10, n - 1, m] {
                    let f = t.instantiate(&[c(m, n), c(r, s)], &mut Fresh::default());
                    assert_eq!(holds(&f, 0), m == s && n == r, "W(({m},{n}),({r},{s}))");
                }
            }
        }
    }
}

fn divides_holds(cfg: &EngineConfig, m: i64, n: i64, r: i64) -> bool {
    let f = define_divides(cfg).instantiate(&[c(m, 1), c(n, r)], &mut Fresh::default());
    holds(&f, 10)
}

#[test]
fn divides_examples() {
    let cfg = EngineConfig::default();
    assert!(divides_holds(&cfg, 2, 6, 3));
    for n in -10..=10 {
        assert!(divides_holds(&cfg, 1, n, n));
    }
    assert!(!divides_holds(&cfg, 2, 5, 1));
}

#[test]
fn divides_template_matches_on_the_window() {
    let cfg = EngineConfig::default();
    for m in -10..=10 {
        for n in -10..=10 {
            for r in -10..=10 {
                assert_eq!(divides_holds(&cfg, m, n, r), n == m * r, "({m},1) | ({n},{r})");
            }
        }
    }
}

#[test]
fn divides_template_with_an_exceptional_set() {
    let mut cfg = EngineConfig { m0: 2, d: 3, ..EngineConfig::default() };
    cfg.exceptional.extend([0, 1, 3, 4]);
    cfg.validate().unwrap();
    for m in -4..=4 {
        for (n, r) in [(0, 0), (m, 1), (2 * m, 2), (m + 1, 1), (3, -1)] {
            assert_eq!(divides_holds(&cfg, m, n, r), n == m * r);
        }
    }
    let t = define_divides(&cfg).instantiate(&[PairTerm::var("p"), PairTerm::var("q")], &mut Fresh::default());
    assert!(t.atoms().iter().all(|a| match a {
        h10_core::Atom::Divides { safe, .. } => *safe,
        _ => true,
    }));
}

#[test]
fn divides_needs_one_in_the_modulus() {
    let cfg = EngineConfig::default();
    let f = define_divides(&cfg).instantiate(&[c(2, 0), c(0, 0)], &mut Fresh::default());
    assert!(!holds(&f, 10));
}

#[test]
fn encode_decode_round_trip() {
    let cfg = EngineConfig::default();
    let ctx = FnCtx::<h10_algebra::Rational>::over_q(&cfg.params);
    let mut cache = HashMap::new();
    for n in -4..=4 {
        for r in -4..=4 {
            let e = encode_pair(&cfg, &ctx, n, r).unwrap();
            assert_eq!(decode(&cfg, &ctx, &e).unwrap(), (n, r));
            cache.insert((n, r), e);
        }
    }
    assert!(cache[&(0, 0)].first.is_infinity() && cache[&(0, 0)].second.is_infinity());
    assert_eq!(cache[&(1, 0)].first, CurveFunction::generic_point(&ctx));
    for ((n, r), a) in &cache {
        for (n2, r2) in [(1, 0), (0, 1), (-2, 1), (1, -3)] {
            if let Some(b) = cache.get(&(n + n2, r + r2)) {
                assert_eq!(&model_add(&ctx, a, &cache[&(n2, r2)]), b);
            }
        }
    }
    assert!(matches!(encode_pair(&cfg, &ctx, 13, 0), Err(CoreError::WindowExceeded(_))));
    let small = EngineConfig { window: 2, ..EngineConfig::default() };
    let e = encode_pair(&cfg, &ctx, 3, 0).unwrap();
    assert!(matches!(decode(&small, &ctx, &e), Err(CoreError::WindowExceeded(_))));
}

#[test]
fn sum_point_matches_the_combination() {
    let cfg = EngineConfig::default();
    let e = engine();
    let ctx = e.tower().curve_ctx();
    let m = encode_pair(&cfg, ctx, 2, -1).unwrap();
    assert_eq!(m.sum_point(e.tower()).unwrap(), point_combination(e.tower(), 2, -1));
}

#[test]
fn bundle_matches_a_plain_build() {
    let cfg = EngineConfig { alpha: 2, ..EngineConfig::default() };
    let t = h10_core::LTower::new(cfg.params.clone());
    let b = build_equations(&cfg, &t, DivInstance::new(0, 1, 0)).unwrap();
    assert_eq!(b.equations.iter().map(|q| q.k).collect::<Vec<_>>(), vec![1, 2, 4]);
    assert_eq!(b.equations[2].a, x_combination(&t, 4, 0).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn w_template_far_from_the_origin(m in -1000i64..1000, n in -1000i64..1000, swap in any::<bool>(), dr in -2i64..=2) {
        let (r, s) = if swap { (n, m) } else { (n + dr, m - dr) };
        prop_assert_eq!(w_holds((m, n), (r, s)), m == s && n == r);
    }

    #[test]
    fn divides_template_with_other_parameters(m0 in 1i64..4, d in 1i64..4, m in -5i64..=5, r in -3i64..=3, off in -1i64..=1) {
        let cfg = EngineConfig { m0, d, ..EngineConfig::default() };
        let n = m * r + off;
        prop_assert_eq!(divides_holds(&cfg, m, n, r), off == 0);
    }
}
