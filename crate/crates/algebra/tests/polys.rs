use h10_algebra::factor::{factor_over, zassenhaus};
use h10_algebra::mgcd;
use h10_algebra::{q, qq, ConstField, FieldElement, MPoly, RatFunc, Rational, Tower, TowerElem, UPoly, VarSet};
use proptest::prelude::*;

fn up(cs: &[i64]) -> UPoly<Rational> {
    UPoly::from_ints(cs)
}

fn product(fs: &[(UPoly<Rational>, u32)]) -> UPoly<Rational> {
    fs.iter().fold(UPoly::one(), |acc, (f, m)| acc.mul(&f.pow(*m)))
}

fn small_poly() -> impl Strategy<Value = UPoly<Rational>> {
    prop::collection::vec(-6i64..=6, 0..7).prop_map(|v| up(&v))
}

#[test]
fn swinnerton_dyer_is_irreducible() {
    let f = up(&[1, 0, -10, 0, 1]);
    let fs = zassenhaus(&f).unwrap();
    assert_eq!(fs.len(), 1);
}

#[test]
fn cyclotomic_split() {
    let f = up(&[-1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]);
    let (_, fs) = f.factor(64).unwrap();
    let mut degs: Vec<i64> = fs.iter().map(|(g, _)| g.deg()).collect();
    degs.sort();
    assert_eq!(degs, vec![1, 1, 2, 2, 2, 4]);
    assert_eq!(product(&fs), f);
}

#[test]
fn repeated_and_mixed_factors() {
    let a = up(&[1, 1]);
    let b = up(&[2, 0, 3]);
    let c = up(&[-5, 1, 0, 7]);
    let f = a.pow(3).mul(&b.pow(2)).mul(&c).scale(&qq(3, 5));
    let (lc, fs) = f.factor(64).unwrap();
    assert_eq!(lc, qq(189, 5));
    assert_eq!(product(&fs).scale(&lc), f);
    assert_eq!(fs.len(), 3);
}

#[test]
fn degree_bound_is_enforced() {
    let f = up(&[1, 0, 0, 0, 0, 1, 1]);
    assert!(f.factor(4).is_err());
}

#[test]
fn trager_splits_x4_plus_1_over_gaussian_field() {
    let t = Tower::base().adjoin_sqrt(&TowerElem::rational(q(-1))).unwrap();
    let f: UPoly<TowerElem> = UPoly::from_ints(&[1, 0, 0, 0, 1]);
    let (_, fs) = factor_over(&f, &t, 64).unwrap();
    assert_eq!(fs.len(), 2);
    let prod = fs.iter().fold(UPoly::<TowerElem>::one(), |a, (g, _)| a.mul(g));
    assert_eq!(prod, f);
    for (g, _) in &fs {
        assert_eq!(g.deg(), 2);
        assert_eq!(g.coeff(0).tower().level(), t.level());
    }
}

#[test]
fn trager_over_two_level_tower() {
    let t1 = Tower::base().adjoin_sqrt(&TowerElem::rational(q(2))).unwrap();
    let t2 = t1.adjoin_sqrt(&t1.from_int(3)).unwrap();
    let f: UPoly<TowerElem> = UPoly::from_ints(&[1, 0, -10, 0, 1]);
    let (_, fs) = factor_over(&f, &t2, 64).unwrap();
    assert_eq!(fs.len(), 4);
    for (g, _) in &fs {
        assert_eq!(g.deg(), 1);
        assert!(f.eval(&g.coeff(0).neg()).is_zero());
    }
}

#[test]
fn mpoly_render_parse_roundtrip_fixed() {
    let vs = VarSet::from_strs(&["z1", "z2", "h1"]);
    let p = MPoly::parse("3*z1^2*z2 - 1/2*h1 + z2^3 - 7 + (z1 - z2)^2", &vs).unwrap();
    let s = p.render(&vs);
    assert_eq!(MPoly::parse(&s, &vs).unwrap(), p);
}

#[test]
fn multivariate_gcd_recovers_common_factor() {
    let vs = VarSet::from_strs(&["x", "y", "z"]);
    let g = MPoly::parse("x*y - z^2 + 3", &vs).unwrap();
    let a = MPoly::parse("x^2 + y*z - 1", &vs).unwrap().mul(&g);
    let b = MPoly::parse("y^3 - x + 2*z", &vs).unwrap().mul(&g);
    assert_eq!(mgcd::gcd(&a, &b), g.monic());
}

#[test]
fn multivariate_squarefree() {
    let vs = VarSet::from_strs(&["x", "y"]);
    let a = MPoly::parse("x + y^2", &vs).unwrap();
    let b = MPoly::parse("y - 2", &vs).unwrap();
    let p = a.pow(3).mul(&b.pow(2)).scale(&q(5));
    let (u, parts) = mgcd::squarefree(&p);
    assert_eq!(u, q(5));
    let rebuilt = parts.iter().fold(MPoly::one(), |acc, (f, m)| acc.mul(&f.pow(*m))).scale(&u);
    assert_eq!(rebuilt, p);
    assert!(parts.iter().any(|(f, m)| *m == 3 && *f == a.monic()));
}

#[test]
fn certify_nonsquare_finds_odd_place() {
    let vs = VarSet::from_strs(&["z1", "z2"]);
    let d = RatFunc::new(MPoly::parse("z1*z2^2", &vs).unwrap(), MPoly::parse("(z2+1)^4", &vs).unwrap()).unwrap();
    let w = h10_algebra::certify_nonsquare(&d, 64).unwrap();
    assert_eq!(w.place, MPoly::var(0));
    assert_eq!(w.order, 1);
    assert!(h10_algebra::nonsquare::verify_witness(&d, &w));
    let sq = RatFunc::new(MPoly::parse("4*z1^2", &vs).unwrap(), MPoly::one()).unwrap();
    assert!(h10_algebra::certify_nonsquare(&sq, 64).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn upoly_ring_axioms(a in small_poly(), b in small_poly(), c in small_poly()) {
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.add(&b).sub(&b), a.clone());
    }

    #[test]
    fn divmod_reconstructs(a in small_poly(), b in small_poly()) {
        prop_assume!(!b.is_zero());
        let (qq, r) = a.divmod(&b).unwrap();
        prop_assert_eq!(qq.mul(&b).add(&r), a);
        prop_assert!(r.deg() < b.deg());
    }

    #[test]
    fn gcd_divides_both_and_is_maximal(a in small_poly(), b in small_poly(), c in small_poly()) {
        prop_assume!(!c.is_zero());
        let x = a.mul(&c);
        let y = b.mul(&c);
        let g = x.gcd(&y);
        if !x.is_zero() || !y.is_zero() {
            prop_assert!(g.divides(&x) || x.is_zero());
            prop_assert!(g.divides(&y) || y.is_zero());
            prop_assert!(c.divides(&g));
            prop_assert_eq!(g.clone(), UPoly::euclid_gcd(&x, &y));
        }
    }

    #[test]
    fn factor_reconstructs(a in small_poly(), b in small_poly()) {
        let f = a.mul(&b);
        prop_assume!(f.deg() >= 1);
        let (lc, fs) = f.factor(64).unwrap();
        prop_assert_eq!(product(&fs).scale(&lc), f);
        for (g, _) in &fs {
            prop_assert!(g.lc().is_one());
            if g.deg() <= 3 {
                // Low-degree irreducibility: no rational roots and no quadratic split.
                let roots = g.roots(64).unwrap();
                prop_assert!(g.deg() == 1 || roots.is_empty());
            }
        }
    }

    #[test]
    fn tower_field_axioms(v in prop::collection::vec(-5i64..=5, 12)) {
        let t1 = Tower::base().adjoin_sqrt(&TowerElem::rational(q(-1))).unwrap();
        let t = t1.adjoin_sqrt(&t1.from_int(2)).unwrap();
        let mk = |s: &[i64]| TowerElem::from_coords(&t, s.iter().map(|&x| q(x)).collect());
        let (a, b, c) = (mk(&v[0..4]), mk(&v[4..8]), mk(&v[8..12]));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        if !a.is_zero() {
            prop_assert!(a.mul(&a.inv().unwrap()).is_one());
        }
        let sq = a.square();
        let r = sq.sqrt().unwrap();
        prop_assert!(r == a || r == a.neg());
    }

    #[test]
    fn mpoly_roundtrip(terms in prop::collection::vec((-9i64..=9, 0u32..3, 0u32..3, 0u32..2), 0..6)) {
        let vs = VarSet::from_strs(&["z1", "z2", "h"]);
        let p = MPoly::from_terms(terms.iter().map(|&(c, a, b, e)| {
            (h10_algebra::Monomial::from_pairs(vec![(0, a), (1, b), (2, e)]), qq(c, 2))
        }));
        prop_assert_eq!(MPoly::parse(&p.render(&vs), &vs).unwrap(), p);
    }

    #[test]
    fn ratfunc_field_ops(a in small_poly(), b in small_poly(), c in small_poly()) {
        prop_assume!(!b.is_zero() && !c.is_zero());
        let fa = RatFunc::from_poly(MPoly::from_upoly(&a, 0));
        let fb = RatFunc::new(MPoly::from_upoly(&c, 1), MPoly::from_upoly(&b, 0)).unwrap();
        let s = fa.add(&fb).sub(&fb);
        prop_assert_eq!(s, fa.clone());
        let p = fa.mul(&fb).div(&fb).unwrap();
        prop_assert_eq!(p, fa);
    }
}

#[test]
fn rational_sqrt_exact() {
    assert_eq!(qq(9, 4).sqrt(), Some(qq(3, 2)));
    assert_eq!(q(2).sqrt(), None);
    assert_eq!(<Rational as ConstField>::from_int(-4).sqrt(), None);
}

#[test]
fn tower_certificates_replay() {
    let t1 = Tower::base().adjoin_sqrt(&TowerElem::rational(q(-1))).unwrap();
    let t2 = t1.adjoin_sqrt(&t1.from_int(2)).unwrap();
    let i = t2.gen(1);
    let t3 = t2.adjoin_sqrt(&i.add(&t2.from_int(1))).unwrap();
    assert!(t3.verify());
    assert!(t1.adjoin_sqrt(&t1.from_int(-4)).is_err());
    let s = t1.from_int(2).mul(&t1.generator());
    assert_eq!(s.sqrt().map(|r| r.square()), Some(s));
}

proptest! {
    #[test]
    fn sqrt_mod_squares_back(a in 0u64..10_000, pi in 0usize..40) {
        let p = h10_algebra::zp::small_primes().nth(pi).unwrap();
        match h10_algebra::zp::sqrt_mod(a, p) {
            Some(r) => prop_assert_eq!(r * r % p, a % p),
            None => prop_assert_eq!(h10_algebra::zp::legendre(a, p), -1),
        }
    }
}
