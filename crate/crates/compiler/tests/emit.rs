use h10_algebra::MPoly;
use h10_compiler::config::Config;
use h10_compiler::emit::{emit, read};
use h10_compiler::pipeline::compile;
use h10_compiler::system::{PolyEquation, PolySystem, VarSort};

#[test]
fn empty_system() {
    let text = emit(&PolySystem::default(), "00");
    let back = read(&text).unwrap();
    assert_eq!(back.system, PolySystem::default());
    assert_eq!(back.config_hash, "00");
    assert!(text.ends_with("equations 0\n"));
}

#[test]
fn one_equation_round_trips_byte_identically() {
    let x = PolySystem::var(0);
    let poly = x.square().mul(&MPoly::var(0)).sub(&MPoly::var(1).scale(&h10_algebra::qq(3, 1))).add(&MPoly::from_int(-7));
    let sys = PolySystem {
        vars: vec![("x#1.X~3".into(), VarSort::K)],
        equations: vec![PolyEquation { poly, provenance: "a / b [coefficient of h1]".into() }],
    };
    let text = emit(&sys, "abc");
    let back = read(&text).unwrap();
    assert_eq!(back.system, sys);
    assert_eq!(emit(&back.system, &back.config_hash), text);
}

#[test]
fn compiled_sentence_round_trips() {
    let cfg = Config::default();
    let c = compile("exists x . x + x = 4", &cfg).unwrap();
    let text = emit(&c.restricted.system, &cfg.hash());
    let back = read(&text).unwrap();
    assert_eq!(back.system.equations.len(), c.restricted.system.equations.len());
    assert_eq!(back.system, c.restricted.system);
    assert_eq!(emit(&back.system, &back.config_hash), text);
    assert_eq!(text, emit(&compile("exists x . x + x = 4", &cfg).unwrap().restricted.system, &cfg.hash()));
}

#[test]
fn reader_rejects_damage() {
    let text = emit(&PolySystem { vars: vec![("x".into(), VarSort::K)], equations: vec![] }, "00");
    assert!(read(&text.replace("u0 K", "u1 K")).is_err());
    assert!(read(&text.replace("h10-system 1", "h10-system 2")).is_err());
    assert!(read(&format!("{text}extra\n")).is_err());
}

#[test]
fn config_parsing_and_hash() {
    let c = Config::from_toml("alpha = 2\nm0 = 5\nd = 10\nexceptional = [3, -1]\n[curve]\na = \"-1/4\"\nb = 1\n").unwrap();
    assert_eq!(c.engine.alpha, 2);
    assert_eq!(c.engine.params.a, h10_algebra::qq(-1, 4));
    assert_ne!(c.hash(), Config::default().hash());
    assert_eq!(Config::from_toml("").unwrap().hash(), Config::default().hash());
    assert!(Config::from_toml("m0 = 0").is_err());
    assert!(Config::from_toml("unknown = 1").is_err());
    assert!(Config::from_toml("[curve]\na = 0\nb = 0").is_err());
}

fn build(terms: &[(i64, Vec<u8>)]) -> MPoly<h10_algebra::Rational> {
    let mut p = MPoly::from_int(0);
    for (c, exps) in terms {
        let mut t = MPoly::from_int(*c);
        for (v, e) in exps.iter().enumerate() {
            for _ in 0..*e {
                t = t.mul(&MPoly::var(v as u32));
            }
        }
        p = p.add(&t);
    }
    p
}

proptest::proptest! {
    #[test]
    fn random_systems_round_trip(
        eqs in proptest::collection::vec(
            proptest::collection::vec((-50i64..50, proptest::collection::vec(0u8..3, 6)), 0..5),
            0..4,
        ),
        sorts in proptest::collection::vec(proptest::bool::ANY, 2),
    ) {
        let vars = sorts.iter().enumerate().map(|(j, k)| (format!("v{j}"), if *k { VarSort::K } else { VarSort::L })).collect();
        let equations = eqs.iter().enumerate().map(|(i, t)| PolyEquation { poly: build(t), provenance: format!("eq {i}") }).collect();
        let sys = PolySystem { vars, equations };
        let text = emit(&sys, "ff");
        let back = read(&text).unwrap();
        proptest::prop_assert_eq!(&back.system, &sys);
        proptest::prop_assert_eq!(emit(&back.system, &back.config_hash), text);
    }
}
