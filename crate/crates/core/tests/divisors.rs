use h10_algebra::{q, FieldElement, Rational, URatFunc, UPoly};
use h10_core::divisor::verify_place_witness;
use h10_core::{
    divisor_of, is_square_over_closure, pullback_x, square_classes_distinct, CurveFunction, CurveParams, DivisorOptions,
    FnCtx, PlaceKind, RootSign,
};
use proptest::prelude::*;
use std::sync::Arc;

fn ctx() -> Arc<FnCtx<Rational>> {
    FnCtx::<Rational>::over_q(&CurveParams::default())
}

fn opts() -> DivisorOptions {
    DivisorOptions::default()
}

#[test]
fn divisor_of_x() {
    let c = ctx();
    let d = divisor_of(&CurveFunction::z(&c), opts()).unwrap();
    assert_eq!(d.entries().len(), 3, "{d}");
    let split: Vec<_> = d.entries().iter().filter(|(p, _)| p.kind == PlaceKind::Split).collect();
    assert_eq!(split.len(), 2);
    assert!(split.iter().all(|(p, o)| *o == 1 && p.base == UPoly::x()));
    let brs: Vec<_> = split.iter().map(|(p, _)| p.branch.clone().unwrap().num().coeff(0)).collect();
    assert!(brs.contains(&q(1)) && brs.contains(&q(-1)));
    let inf = d.entries().iter().find(|(p, _)| p.kind == PlaceKind::Infinity).unwrap();
    assert_eq!(inf.1, -2);
    assert_eq!(d.degree(), 0);
}

#[test]
fn divisor_of_y_and_square() {
    let c = ctx();
    let d = divisor_of(&CurveFunction::h(&c), opts()).unwrap();
    assert_eq!(d.entries().len(), 2, "{d}");
    let (p, o) = &d.entries().iter().find(|(p, _)| p.kind == PlaceKind::Ramified).unwrap();
    assert_eq!((p.degree(), *o), (3, 1));
    assert_eq!(d.zero_count(), 3);
    let z = CurveFunction::z(&c);
    let d2 = divisor_of(&z.square(), opts()).unwrap();
    assert_eq!(d2, divisor_of(&z, opts()).unwrap().scale(2));
}

#[test]
fn square_verdicts() {
    let c = ctx();
    let z = CurveFunction::z(&c);
    let v = is_square_over_closure(&z, 64).unwrap();
    let w = v.witness().unwrap();
    assert_eq!(w.order, 1);
    assert_eq!(w.place.base, UPoly::x());
    assert!(verify_place_witness(&z, w));
    assert!(is_square_over_closure(&z.square(), 64).unwrap().is_square());
    let p11 = pullback_x(&c, 1, 1, RootSign::Plus).unwrap();
    let w = is_square_over_closure(&p11, 64).unwrap();
    assert!(verify_place_witness(&p11, w.witness().unwrap()));
    let r = square_classes_distinct(&[z.clone(), z.pow(3)], 64).unwrap();
    assert!(!r.distinct);
    let x2 = pullback_x(&c, 2, 0, RootSign::Plus).unwrap();
    assert!(square_classes_distinct(&[z.clone(), x2], 64).unwrap().distinct);
    assert!(square_classes_distinct(&[z], 64).unwrap().distinct);
}

#[test]
fn pullback_examples() {
    let c = ctx();
    assert_eq!(pullback_x(&c, 1, 0, RootSign::Plus).unwrap(), CurveFunction::z(&c));
    assert!(pullback_x(&c, 0, 1, RootSign::Plus).is_err());
    let e = CurveFunction::curve(&c);
    let z = CurveFunction::z(&c);
    let h = CurveFunction::h(&c);
    let one = z.one_like();
    let lam = one.sub(&h).div(&z.neg()).unwrap();
    assert_eq!(pullback_x(&c, 1, 1, RootSign::Plus).unwrap(), lam.square().sub(&z));
    let _ = e;
}

#[test]
fn simple_zero_counts() {
    let c = ctx();
    for s in 1..=2i64 {
        for r in 0..=2i64 {
            let x = pullback_x(&c, s, r, RootSign::Plus).unwrap();
            let d = divisor_of(&x, opts()).unwrap();
            assert_eq!(d.zero_count(), 2 * s * s, "({s},{r}) {d}");
            assert!(d.zeros_simple(), "({s},{r}) {d}");
            let dc = divisor_of(&x, DivisorOptions { refine: false, factor_bound: 64 }).unwrap();
            assert_eq!(dc.zero_count(), 2 * s * s);
        }
    }
}

fn small_fn() -> impl Strategy<Value = CurveFunction<Rational>> {
    let poly = prop::collection::vec(-3i64..=3, 1..4);
    (poly.clone(), poly.clone(), poly).prop_map(|(a, b, d)| {
        let c = ctx();
        let den = UPoly::from_ints(&d).add(&UPoly::monomial(q(1), 3));
        let cc = URatFunc::new(UPoly::from_ints(&a), den).unwrap();
        CurveFunction::new(&c, cc, URatFunc::from_poly(UPoly::from_ints(&b)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]
    #[test]
    fn divisor_is_homomorphism(f in small_fn(), g in small_fn()) {
        prop_assume!(!f.is_zero() && !g.is_zero());
        let df = divisor_of(&f, opts()).unwrap();
        let dg = divisor_of(&g, opts()).unwrap();
        let dfg = divisor_of(&f.mul(&g), opts()).unwrap();
        prop_assert_eq!(df.degree(), 0);
        prop_assert_eq!(dfg.clone(), df.add(&dg), "f={} g={}", f, g);
    }

    #[test]
    fn squares_have_even_divisors(f in small_fn()) {
        prop_assume!(!f.is_zero());
        prop_assert!(is_square_over_closure(&f.square(), 64).unwrap().is_square());
    }
}
