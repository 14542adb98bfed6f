//! Sentences and samplers shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::Arc;

use h10_algebra::{q, FieldElement, MPoly, NonSquareWitness, RatFunc, Rational};
use h10_compiler::ast::oracle_eval as int_oracle;
use h10_compiler::combine::combine_single;
use h10_compiler::parser::parse;
use h10_compiler::stage1::stage1_int_to_s;
use h10_compiler::stage2::stage2_eliminate;
use h10_compiler::stage5::stage5_restrict;
use h10_compiler::system::{eval_in_k, Assignment, PolyEquation, PolySystem, VarSort};
use h10_core::{oracle_eval, CurveParams, EngineConfig, LElement, LTower, OracleVerdict};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SENTENCES: [&str; 22] = [
    "exists x . x + x = 4",
    "exists x . x * x = 2",
    "exists x y . x * y = 6",
    "exists x . x + 3 = 1",
    "exists x . x * x = 9",
    "exists x y . x + y = 3 and x * y = 2",
    "exists x . x * x + x = 6",
    "exists x . x * 2 = 7",
    "exists x y . x * y = 0 and x + y = 5",
    "exists x . x + x + x = 9",
    "exists x y . (x = 2 or x = 3) and x * y = 9",
    "exists x . x = 5 and x = 6",
    "exists x . 0 = 0",
    "exists x y . x * y = 7 and x + 1 = y",
    "exists x . x * x * x = 8",
    "exists x y z . x + y = z and x * z = 4",
    "exists x . 3 * x = 5",
    "exists x y . x * x = y and y + y = 8",
    "exists x . x + 1 = 1",
    "exists x y . x * y + 4 = 0 and x + y = 0",
    "exists x . (x + 1) * (x + 1) = 4",
    "exists x y . x * y = 5 or x + y = 20",
];

/// Oracle truth of the source, of stage 1 and of stage 2 at the same bound,
/// or the first sentence where they differ.
pub fn differential(cfg: &EngineConfig, bound: i64) -> Result<(usize, usize), String> {
    let (mut yes, mut no) = (0, 0);
    for src in SENTENCES {
        let f = parse(src).map_err(|e| format!("{src}: {e}"))?;
        let expected = int_oracle(&f, bound);
        let s1 = stage1_int_to_s(&f);
        let s2 = stage2_eliminate(&s1, cfg);
        let t = |v: OracleVerdict| v == OracleVerdict::TrueWithinBound;
        if t(oracle_eval(&s1, bound)) != expected {
            return Err(format!("stage 1 changes the truth of {src}"));
        }
        if t(oracle_eval(&s2, bound)) != expected {
            return Err(format!("stage 2 changes the truth of {src}"));
        }
        if expected {
            yes += 1
        } else {
            no += 1
        }
    }
    Ok((yes, no))
}

fn random_poly(rng: &mut ChaCha8Rng) -> MPoly<Rational> {
    let mut p = MPoly::zero();
    for _ in 0..rng.gen_range(1..4) {
        let (i, j) = (rng.gen_range(0..3), rng.gen_range(0..3));
        let m = MPoly::var(0).pow(i).mul(&MPoly::var(1).pow(j));
        p = p.add(&m.scale(&q(rng.gen_range(-4..=4))));
    }
    p
}

fn random_base(rng: &mut ChaCha8Rng) -> RatFunc<Rational> {
    let num = random_poly(rng);
    let den = loop {
        let d = if rng.gen_bool(0.5) { MPoly::one() } else { random_poly(rng) };
        if !d.is_zero() {
            break d;
        }
    };
    RatFunc::new(num, den).unwrap()
}

pub fn random_l(t: &Arc<LTower>, rng: &mut ChaCha8Rng) -> LElement {
    LElement::new(t, [random_base(rng), random_base(rng), random_base(rng), random_base(rng)])
}

/// A small element of `Q(z1, z2)`.
pub fn random_k(rng: &mut ChaCha8Rng) -> RatFunc<Rational> {
    let z = |i: u32| RatFunc::<Rational>::var(i);
    let c = |n: i64| RatFunc::constant(q(n));
    let a = c(rng.gen_range(-5..=5)).add(&c(rng.gen_range(-3..=3)).mul(&z(0))).add(&c(rng.gen_range(-3..=3)).mul(&z(1)));
    let b = c(rng.gen_range(1..=4)).add(&c(rng.gen_range(0..=2)).mul(&z(0).mul(&z(1))));
    a.div(&b).unwrap()
}

/// `u v - w` and `u + v - s` over `L`.
pub fn ring_system() -> PolySystem {
    let v = PolySystem::var;
    let vars = ["u", "v", "w", "s"].iter().map(|n| (n.to_string(), VarSort::L)).collect();
    let equations = vec![
        PolyEquation { poly: v(0).mul(&v(1)).sub(&v(2)), provenance: "product".into() },
        PolyEquation { poly: v(0).add(&v(1)).sub(&v(3)), provenance: "sum".into() },
    ];
    PolySystem { vars, equations }
}

/// On random pairs `(a, b)`, the restricted ring equations hold at the
/// coordinates of `a b` and `a + b` and fail at a perturbed product.
pub fn restriction_sweep(samples: usize, seed: u64) -> Result<(), String> {
    let params = CurveParams::default();
    let t = LTower::new(params.clone());
    let r = stage5_restrict(&ring_system(), &params);
    if !r.system.is_restricted() || r.system.vars.len() != 16 {
        return Err("restricted ring system has the wrong shape".into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..samples {
        let (a, b) = (random_l(&t, &mut rng), random_l(&t, &mut rng));
        let mut vals: Assignment = HashMap::new();
        vals.insert(0, a.clone());
        vals.insert(1, b.clone());
        vals.insert(2, a.mul(&b));
        vals.insert(3, a.add(&b));
        let coords = r.restrict_assignment(&vals);
        if let Some(e) = r.system.equations.iter().find(|e| !eval_in_k(&e.poly, &coords).is_zero()) {
            return Err(format!("sample {i}: {} fails", e.provenance));
        }
        vals.insert(2, a.mul(&b).add(&LElement::h(&t, 1)));
        let coords = r.restrict_assignment(&vals);
        if r.system.equations.iter().all(|e| eval_in_k(&e.poly, &coords).is_zero()) {
            return Err(format!("sample {i}: a perturbed product passes"));
        }
    }
    Ok(())
}

fn system(polys: Vec<MPoly<Rational>>, nvars: usize) -> PolySystem {
    PolySystem {
        vars: (0..nvars).map(|j| (format!("x{j}"), VarSort::K)).collect(),
        equations: polys.into_iter().map(|poly| PolyEquation { poly, provenance: String::new() }).collect(),
    }
}

/// For `p = den(a) x - num(a)` and `q = den(b) y - num(b)`, checks that the
/// combined equation vanishes exactly where both do, at points that solve
/// both, one, or neither. Returns how many samples solved the system.
pub fn combiner_sweep(
    d: &RatFunc<Rational>,
    w: &NonSquareWitness<Rational>,
    samples: usize,
    seed: u64,
) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (x, y) = (PolySystem::var(0), PolySystem::var(1));
    let mut solutions = 0;
    for i in 0..samples {
        let (a, b) = (random_k(&mut rng), random_k(&mut rng));
        let p = a.den().mul(&x).sub(a.num());
        let q = b.den().mul(&y).sub(b.num());
        let eq = combine_single(&system(vec![p.clone(), q.clone()], 2), d, w, 100_000).map_err(|e| e.to_string())?;
        let (xv, yv) = match rng.gen_range(0..4) {
            0 => (a.clone(), b.clone()),
            1 => (a.clone(), random_k(&mut rng)),
            2 => (random_k(&mut rng), b.clone()),
            _ => (random_k(&mut rng), random_k(&mut rng)),
        };
        let vals: HashMap<_, _> = [(0, xv), (1, yv)].into_iter().collect();
        let both = eval_in_k(&p, &vals).is_zero() && eval_in_k(&q, &vals).is_zero();
        if eval_in_k(&eq.poly, &vals).is_zero() != both {
            return Err(format!("sample {i}: combined equation disagrees"));
        }
        solutions += both as usize;
    }
    Ok(solutions)
}

