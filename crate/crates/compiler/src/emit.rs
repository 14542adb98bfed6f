//! Text form of a compiled system:
//!
//! ```text
//! h10-system 1
//! tool h10 <version>
//! config sha256:<hex>
//! vars <count>
//! u<j> <K|L> <name>
//! equations <count>
//! # <provenance>
//! <polynomial in z1, z2, h1, h2, u0, u1, ...>
//! ```
//!
//! Output depends only on the system and the config hash, so a reader
//! followed by a writer reproduces the input byte for byte.

use std::fmt::Write;

use h10_algebra::{MPoly, Rational};

use crate::system::{PolyEquation, PolySystem, VarSort};

pub const FORMAT: &str = "h10-system 1";

#[derive(Clone, Debug, PartialEq)]
pub struct Emitted {
    pub tool_version: String,
    pub config_hash: String,
    pub system: PolySystem,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ReadError {
    pub line: usize,
    pub message: String,
}

pub fn emit(sys: &PolySystem, config_hash: &str) -> String {
    let names = sys.var_set();
    let mut out = String::new();
    let _ = writeln!(out, "{FORMAT}");
    let _ = writeln!(out, "tool h10 {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(out, "config sha256:{config_hash}");
    let _ = writeln!(out, "vars {}", sys.vars.len());
    for (j, (name, sort)) in sys.vars.iter().enumerate() {
        let _ = writeln!(out, "u{j} {sort} {name}");
    }
    let _ = writeln!(out, "equations {}", sys.equations.len());
    for e in &sys.equations {
        let _ = writeln!(out, "# {}", e.provenance);
        let _ = writeln!(out, "{}", e.poly.render(&names));
    }
    out
}

pub fn read(src: &str) -> Result<Emitted, ReadError> {
    let mut lines = src.lines().enumerate().map(|(i, l)| (i + 1, l));
    let mut next = |what: &str| lines.next().ok_or_else(|| ReadError { line: 0, message: format!("missing {what}") });
    let err = |line: usize, message: String| ReadError { line, message };

    let (n, l) = next("format line")?;
    if l != FORMAT {
        return Err(err(n, format!("expected `{FORMAT}`")));
    }
    let (n, l) = next("tool line")?;
    let tool_version = l.strip_prefix("tool h10 ").ok_or_else(|| err(n, "expected `tool h10 <version>`".into()))?.to_string();
    let (n, l) = next("config line")?;
    let config_hash = l.strip_prefix("config sha256:").ok_or_else(|| err(n, "expected `config sha256:<hex>`".into()))?.to_string();
    let count = |n: usize, l: &str, key: &str| -> Result<usize, ReadError> {
        l.strip_prefix(key)
            .and_then(|c| c.parse().ok())
            .ok_or_else(|| err(n, format!("expected `{}<count>`", key)))
    };
    let (n, l) = next("vars line")?;
    let nvars = count(n, l, "vars ")?;
    let mut sys = PolySystem::default();
    for j in 0..nvars {
        let (n, l) = next("variable")?;
        let mut parts = l.splitn(3, ' ');
        let (id, sort, name) = (parts.next(), parts.next(), parts.next());
        if id != Some(&format!("u{j}")) {
            return Err(err(n, format!("expected unknown u{j}")));
        }
        let sort = match sort {
            Some("K") => VarSort::K,
            Some("L") => VarSort::L,
            _ => return Err(err(n, "sort must be K or L".into())),
        };
        let name = name.ok_or_else(|| err(n, "missing name".into()))?;
        sys.vars.push((name.to_string(), sort));
    }
    let names = sys.var_set();
    let (n, l) = next("equations line")?;
    let neqs = count(n, l, "equations ")?;
    for _ in 0..neqs {
        let (n, l) = next("provenance")?;
        let provenance = l.strip_prefix("# ").ok_or_else(|| err(n, "expected `# <provenance>`".into()))?.to_string();
        let (n, l) = next("polynomial")?;
        let poly = MPoly::<Rational>::parse(l, &names).map_err(|e| err(n, e.to_string()))?;
        sys.equations.push(PolyEquation { poly, provenance });
    }
    if let Some((n, _)) = lines.next() {
        return Err(err(n, "trailing content".into()));
    }
    Ok(Emitted { tool_version, config_hash, system: sys })
}
