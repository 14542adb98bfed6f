//! Elimination of `W` and of divisibility atoms whose modulus may fall in the
//! exceptional set, through the engine's existential definitions.

use h10_core::{define_divides, define_w, Atom, EngineConfig, Fresh, SFormula};

pub fn stage2_eliminate(f: &SFormula, cfg: &EngineConfig) -> SFormula {
    let w = define_w(cfg);
    let div = define_divides(cfg);
    let mut fresh = Fresh::default();
    let expand_w = |f: &SFormula, fresh: &mut Fresh| {
        f.map_atoms(&mut |a| match a {
            Atom::W(p, q) => w.instantiate(&[p.clone(), q.clone()], fresh),
            a => SFormula::atom(a.clone()),
        })
    };
    let with_divides = f.map_atoms(&mut |a| match a {
        Atom::Divides { modulus, target, safe: false } => div.instantiate(&[modulus.clone(), target.clone()], &mut fresh),
        a => SFormula::atom(a.clone()),
    });
    expand_w(&with_divides, &mut fresh)
}

/// Whether only `Plus`, `Z` and safe divisibility atoms remain.
pub fn is_ground(f: &SFormula) -> bool {
    f.atoms().iter().all(|a| matches!(a, Atom::Plus(..) | Atom::Z(_) | Atom::Divides { safe: true, .. }))
}
