use h10_algebra::FieldElement;
use h10_compiler::config::Config;
use h10_compiler::pipeline::{compile, witness};
use h10_compiler::system::{eval_in_k, eval_in_l};
use h10_core::LTower;

#[test]
fn doubling_sentence_replays_exactly() {
    let cfg = Config::default();
    let c = compile("exists x . x + x = 4", &cfg).unwrap();
    println!("{} points, {} equations over L, {} over K", c.points.points.len(), c.system.equations.len(), c.restricted.system.equations.len());
    let w = witness(&c, &cfg, 4).unwrap();
    assert_eq!(w.pairs["x"], (2, 0));
    let t = LTower::new(cfg.engine.params.clone());
    for e in &c.system.equations {
        assert!(eval_in_l(&t, &e.poly, &w.top).is_zero(), "{}", e.provenance);
    }
    for e in &c.restricted.system.equations {
        assert!(eval_in_k(&e.poly, &w.restricted).is_zero(), "{}", e.provenance);
    }
}

#[test]
fn product_sentence_size() {
    let cfg = Config::default();
    let c = compile("exists x y . x * y = 6", &cfg).unwrap();
    println!("{:?}", c.points.census());
    println!("{} vars, {} equations over L, max degree {}, {} terms", c.system.vars.len(), c.system.equations.len(), c.system.max_degree(), c.system.num_terms());
    println!("{} vars, {} equations over K, max degree {}, {} terms", c.restricted.system.vars.len(), c.restricted.system.equations.len(), c.restricted.system.max_degree(), c.restricted.system.num_terms());
}
