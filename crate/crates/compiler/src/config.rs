//! TOML configuration. Every key is optional:
//!
//! ```toml
//! alpha = 1
//! exceptional = []      # moduli the valuation argument must avoid
//! m0 = 1
//! d = 1
//! [curve]
//! a = "1"               # integers or rationals such as "-1/4"
//! b = "1"
//! [conic]
//! degree_bound = 6
//! max_tower_extensions = 2
//! step_budget = 20000
//! obstruction_primes = 400
//! [compiler]
//! single_equation = false
//! max_terms = 200000
//! ```

use std::collections::BTreeSet;

use h10_algebra::Rational;
use h10_core::{ConicBounds, CurveParams, EngineConfig};
use serde::Deserialize;
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("config syntax: {0}")]
    Syntax(String),
    #[error("config value: {0}")]
    Value(String),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Number {
    Int(i64),
    Text(String),
}

impl Number {
    fn rational(&self) -> Result<Rational, ConfigError> {
        match self {
            Number::Int(n) => Ok(Rational::from_integer((*n).into())),
            Number::Text(s) => {
                let s = s.trim();
                let (n, d) = s.split_once('/').unwrap_or((s, "1"));
                let parse = |t: &str| t.trim().parse::<i64>().map_err(|_| ConfigError::Value(format!("not a rational: {s}")));
                let (n, d) = (parse(n)?, parse(d)?);
                if d == 0 {
                    return Err(ConfigError::Value(format!("zero denominator in {s}")));
                }
                Ok(Rational::new(n.into(), d.into()))
            }
        }
    }
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct CurveSection {
    a: Option<Number>,
    b: Option<Number>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct ConicSection {
    degree_bound: Option<usize>,
    max_tower_extensions: Option<usize>,
    step_budget: Option<u64>,
    obstruction_primes: Option<usize>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct CompilerSection {
    single_equation: Option<bool>,
    max_terms: Option<usize>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    alpha: Option<u32>,
    exceptional: Option<Vec<i64>>,
    m0: Option<i64>,
    d: Option<i64>,
    factor_bound: Option<usize>,
    window: Option<i64>,
    #[serde(default)]
    curve: CurveSection,
    #[serde(default)]
    conic: ConicSection,
    #[serde(default)]
    compiler: CompilerSection,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    pub engine: EngineConfig,
    pub single_equation: bool,
    pub max_terms: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config { engine: EngineConfig::default(), single_equation: false, max_terms: 200_000 }
    }
}

impl Config {
    pub fn from_toml(src: &str) -> Result<Self, ConfigError> {
        let raw: RawConfig = toml::from_str(src).map_err(|e| ConfigError::Syntax(e.to_string()))?;
        let mut c = Config::default();
        let e = &mut c.engine;
        e.alpha = raw.alpha.unwrap_or(e.alpha);
        if let Some(u) = raw.exceptional {
            e.exceptional = u.into_iter().collect::<BTreeSet<_>>();
        }
        e.m0 = raw.m0.unwrap_or(e.m0);
        e.d = raw.d.unwrap_or(e.d);
        e.factor_bound = raw.factor_bound.unwrap_or(e.factor_bound);
        e.window = raw.window.unwrap_or(e.window);
        let a = raw.curve.a.map(|n| n.rational()).transpose()?.unwrap_or(e.params.a.clone());
        let b = raw.curve.b.map(|n| n.rational()).transpose()?.unwrap_or(e.params.b.clone());
        e.params = CurveParams::new(a, b).map_err(|err| ConfigError::Value(err.to_string()))?;
        let k = &raw.conic;
        let d = ConicBounds::default();
        e.conic = ConicBounds {
            degree_bound: k.degree_bound.unwrap_or(d.degree_bound),
            max_tower_extensions: k.max_tower_extensions.unwrap_or(d.max_tower_extensions),
            step_budget: k.step_budget.unwrap_or(d.step_budget),
            obstruction_primes: k.obstruction_primes.unwrap_or(d.obstruction_primes),
        };
        c.single_equation = raw.compiler.single_equation.unwrap_or(c.single_equation);
        c.max_terms = raw.compiler.max_terms.unwrap_or(c.max_terms);
        c.engine.validate().map_err(|err| ConfigError::Value(err.to_string()))?;
        Ok(c)
    }

    /// Every resolved value, one per line, in a fixed order.
    pub fn canonical(&self) -> String {
        let e = &self.engine;
        let u: Vec<String> = e.exceptional.iter().map(|u| u.to_string()).collect();
        let k = e.conic;
        format!(
            "alpha = {}\nexceptional = [{}]\nm0 = {}\nd = {}\nfactor_bound = {}\nwindow = {}\ncurve.a = {}\ncurve.b = {}\n\
             conic.degree_bound = {}\nconic.max_tower_extensions = {}\nconic.step_budget = {}\nconic.obstruction_primes = {}\n\
             compiler.single_equation = {}\ncompiler.max_terms = {}\n",
            e.alpha,
            u.join(", "),
            e.m0,
            e.d,
            e.factor_bound,
            e.window,
            e.params.a,
            e.params.b,
            k.degree_bound,
            k.max_tower_extensions,
            k.step_budget,
            k.obstruction_primes,
            self.single_equation,
            self.max_terms
        )
    }

    /// SHA-256 of the canonical form, in hex.
    pub fn hash(&self) -> String {
        Sha256::digest(self.canonical().as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }
}
