use std::sync::Arc;
use std::time::Instant;

use h10_algebra::{FieldElement, MPoly, RatFunc, Rational};
use h10_core::valuation::{change_generators, restore_generators};
use h10_core::{
    lemma_square_gate, x_combination, CoreError, CurveParams, GateOutcome, LElement, LExpr, LTower, RootSign, Valuer,
};
use proptest::prelude::*;

fn tower() -> Arc<LTower> {
    LTower::new(CurveParams::default())
}

#[test]
fn change_generators_examples() {
    let t = tower();
    let z2 = LElement::z(&t, 2);
    assert_eq!(change_generators(&t, 0, &z2).unwrap().elem, z2);
    let f = x_combination(&t, 1, 1).unwrap();
    assert_eq!(change_generators(&t, 1, &f).unwrap().elem, z2);
    let g = change_generators(&t, 1, &z2).unwrap();
    assert_eq!(g.elem, x_combination(&t, -1, 1).unwrap());
    assert_eq!(restore_generators(&t, &g).unwrap(), z2);
    let h2 = LElement::h(&t, 2);
    let g = change_generators(&t, -1, &h2).unwrap();
    assert_eq!(restore_generators(&t, &g).unwrap(), h2);
}

#[test]
fn valuation_examples() {
    let t = tower();
    for m in [-2i64, 0, 1, 2] {
        let v = Valuer::new(&t, m, RootSign::Plus).unwrap();
        assert_eq!(v.w(&LExpr::xcomb(m, 1)).unwrap().order, 1);
        assert_eq!(v.w(&LExpr::xcomb(m, 1).pow(3)).unwrap().order, 3);
        let w = v.w(&LExpr::xcomb(m + 1, 1)).unwrap();
        assert_eq!(w.order, 0);
        assert_eq!(w.unit_residue, v.predicted_residue(m + 1, 1).unwrap());
    }
}

#[test]
fn series_and_explicit_routes_agree() {
    let t = tower();
    for m in -1i64..=1 {
        let v = Valuer::new(&t, m, RootSign::Plus).unwrap();
        for (n, r) in [(1, 0), (0, 1), (1, 1), (2, 1), (-1, 1), (1, -1)] {
            let s = Instant::now();
            let a = v.w(&LExpr::xcomb(n, r)).unwrap();
            let b = v.explicit(&x_combination(&t, n, r).unwrap()).unwrap();
            assert_eq!(a, b, "m={m} (n,r)=({n},{r})");
            assert!(s.elapsed().as_secs() < 60);
        }
    }
}

#[test]
fn gate_examples() {
    let t = tower();
    let v = Valuer::new(&t, 1, RootSign::Plus).unwrap();
    let b = LExpr::xcomb(1, 1);
    match lemma_square_gate(&v, &LExpr::xcomb(2, 1), &b, 64).unwrap() {
        GateOutcome::Refuted(w) => assert!(w.verify()),
        other => panic!("{other:?}"),
    }
    let a2 = LExpr::xcomb(2, 1).pow(2);
    assert_eq!(lemma_square_gate(&v, &a2, &b, 64).unwrap(), GateOutcome::Possible);
    assert!(matches!(lemma_square_gate(&v, &b, &b, 64), Err(CoreError::NotApplicable(_))));
}

#[test]
fn needs_rational_root_of_b() {
    let t = LTower::new(CurveParams::new(Rational::from_integer(1.into()), Rational::from_integer(2.into())).unwrap());
    assert!(Valuer::new(&t, 0, RootSign::Plus).is_err());
}

fn small_elem() -> impl Strategy<Value = LElement> {
    prop::collection::vec((0u32..2, 0u32..2, -2i64..=2), 1..4).prop_flat_map(|terms| {
        (Just(terms), 0usize..4).prop_map(|(terms, slot)| {
            let t = tower();
            let mut p = MPoly::zero();
            for (a, b, c) in terms {
                p = p.add(&MPoly::var(0).pow(a).mul(&MPoly::var(1).pow(b)).scale(&Rational::from_integer(c.into())));
            }
            let mut cs = [RatFunc::zero(), RatFunc::zero(), RatFunc::zero(), RatFunc::zero()];
            cs[slot] = RatFunc::from_poly(p);
            cs[0] = cs[0].add(&RatFunc::one());
            LElement::new(&t, cs)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn orders_are_additive(f in small_elem(), g in small_elem(), m in -1i64..=1) {
        prop_assume!(!f.is_zero() && !g.is_zero());
        let v = Valuer::new(&tower(), m, RootSign::Plus).unwrap();
        let wf = v.explicit(&f).unwrap();
        let wg = v.explicit(&g).unwrap();
        let wfg = v.explicit(&f.mul(&g)).unwrap();
        prop_assert_eq!(wfg.order, wf.order + wg.order);
        prop_assert_eq!(wfg.unit_residue, wf.unit_residue.mul(&wg.unit_residue));
        let s = f.add(&g);
        if !s.is_zero() {
            let ws = v.explicit(&s).unwrap();
            prop_assert!(ws.order >= wf.order.min(wg.order));
            if wf.order != wg.order {
                prop_assert_eq!(ws.order, wf.order.min(wg.order));
            }
        }
    }
}
