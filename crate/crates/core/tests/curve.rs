use h10_algebra::{q, qq, Rational};
use h10_core::lfield::{base_point, l_curve, point_combination};
use h10_core::{x_combination, Curve, CurveParams, CurvePoint, LElement, LTower};

fn e() -> Curve<Rational> {
    CurveParams::default().over_q()
}

fn pt(x: Rational, y: Rational) -> CurvePoint<Rational> {
    CurvePoint::Affine(x, y)
}

#[test]
fn multiples_of_zero_one() {
    let c = e();
    let p = pt(q(0), q(1));
    assert_eq!(c.mul(2, &p), pt(qq(1, 4), qq(-9, 8)));
    assert_eq!(c.mul(3, &p), pt(q(72), q(611)));
    assert!(c.on_curve(&p));
    assert!(!c.on_curve(&pt(q(1), q(1))));
    assert!(c.on_curve(&CurvePoint::Infinity));
    assert_eq!(c.add(&p, &CurvePoint::Infinity), p);
    assert_eq!(c.add(&p, &c.neg(&p)), CurvePoint::Infinity);
}

#[test]
fn invalid_curves() {
    assert!(Curve::new(q(1), q(0)).is_err());
    assert!(Curve::new(q(-3), q(2)).is_err());
}

#[test]
fn small_combinations_in_l() {
    let t = LTower::new(CurveParams::default());
    assert_eq!(x_combination(&t, 1, 0).unwrap(), LElement::z(&t, 1));
    assert_eq!(x_combination(&t, 0, 1).unwrap(), LElement::z(&t, 2));
    assert_eq!(x_combination(&t, -1, 0).unwrap(), LElement::z(&t, 1));
    assert!(x_combination(&t, 0, 0).is_err());
    let lc = l_curve(&t);
    let direct = lc.add(&base_point(&t, 1), &base_point(&t, 2));
    assert!(lc.on_curve(&direct));
    assert_eq!(x_combination(&t, 1, 1).unwrap(), *direct.x().unwrap());
    for (n, r) in [(2, 1), (1, -2), (-2, 2), (3, 1)] {
        let p = point_combination(&t, n, r);
        assert!(lc.on_curve(&p), "({n},{r})");
        assert_eq!(x_combination(&t, n, r).unwrap(), *p.x().unwrap(), "({n},{r})");
        assert_eq!(x_combination(&t, -n, -r).unwrap(), *p.x().unwrap());
    }
}
