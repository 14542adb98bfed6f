use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use h10_algebra::{ConstField, Rational, Tower, TowerElem};
use h10_compiler::ast::oracle_eval as int_oracle;
use h10_compiler::config::Config;
use h10_compiler::emit::emit;
use h10_compiler::parser::parse;
use h10_compiler::pipeline::compile_formula;
use h10_compiler::system::PolySystem;
use h10_core::conic::{lift_fn, tower_ctx, TFn};
use h10_core::divisor::{divisor_of, pullback_x, DivisorOptions};
use h10_core::{
    oracle_eval, solve_conic, verify_obstruction, verify_solution, ConicInstance, ConicOutcome, CurveFunction, DivInstance,
    Engine, FnCtx, OracleVerdict,
};

#[derive(Parser)]
#[command(name = "h10", version, about = "Existential integer sentences to polynomial equations over Q(z1, z2)")]
struct Cli {
    /// TOML configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compiles a sentence and prints a summary of each stage.
    Compile {
        file: PathBuf,
        /// Folds the restricted system into one equation.
        #[arg(long)]
        single_equation: bool,
        /// Writes the final system to this path (`-` for standard output).
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Bounded truth of a sentence before and after the pair encoding.
    Oracle {
        file: PathBuf,
        #[arg(long, default_value_t = 10)]
        bound: i64,
    },
    /// Decides whether (m, 1) divides (n, r) through the quadratic equations.
    Divcheck {
        #[arg(allow_hyphen_values = true)]
        m: i64,
        #[arg(allow_hyphen_values = true)]
        n: i64,
        #[arg(allow_hyphen_values = true)]
        r: i64,
        #[arg(long, conflicts_with = "certify")]
        refute: bool,
        #[arg(long)]
        certify: bool,
    },
    /// Divisor of x(s P + r T) on the curve, with T a root point.
    Divisor {
        #[arg(allow_hyphen_values = true)]
        s: i64,
        #[arg(allow_hyphen_values = true)]
        r: i64,
    },
    /// Solves a named conic a y^2 + b z^2 = w^2.
    Conic {
        #[arg(long, value_enum)]
        case: ConicCase,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ConicCase {
    /// a = b = 1.
    Pythagoras,
    /// a = b = x(Q).
    Equal,
    /// a = x(2Q), b = x(Q).
    Doubled,
    /// a = x(4Q), b = x(Q).
    Quadrupled,
}

fn load_config(path: Option<&Path>) -> Result<Config, String> {
    match path {
        None => Ok(Config::default()),
        Some(p) => {
            let src = std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
            Config::from_toml(&src).map_err(|e| format!("{}: {e}", p.display()))
        }
    }
}

fn read_source(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn describe(label: &str, s: &PolySystem) {
    println!(
        "{label}: {} unknowns, {} equations, max degree {}, {} terms",
        s.vars.len(),
        s.equations.len(),
        s.max_degree(),
        s.num_terms()
    );
}

fn run(cli: Cli) -> Result<(), String> {
    let mut cfg = load_config(cli.config.as_deref())?;
    match cli.command {
        Command::Compile { file, single_equation, emit: out } => {
            cfg.single_equation |= single_equation;
            let f = parse(&read_source(&file)?).map_err(|e| format!("{}:{e}", file.display()))?;
            let c = compile_formula(f, &cfg).map_err(|e| e.to_string())?;
            println!("sentence: {}", c.source);
            println!("pair atoms: {}", c.pairs.atoms().len());
            println!("ground atoms: {}", c.ground.atoms().len());
            let census: Vec<String> = c.points.census().iter().map(|(k, n)| format!("{k} {n}")).collect();
            println!("point constraints: {}", census.join(", "));
            describe("over L", &c.system);
            describe("over K", &c.restricted.system);
            let fin = match &c.single {
                Some(eq) => {
                    println!("single equation: degree {}, {} terms", eq.poly.total_degree(), eq.poly.num_terms());
                    PolySystem { vars: c.restricted.system.vars.clone(), equations: vec![eq.clone()] }
                }
                None => c.restricted.system.clone(),
            };
            if let Some(path) = out {
                let text = emit(&fin, &cfg.hash());
                if path.as_os_str() == "-" {
                    print!("{text}");
                } else {
                    std::fs::write(&path, text).map_err(|e| format!("{}: {e}", path.display()))?;
                    println!("wrote {}", path.display());
                }
            }
        }
        Command::Oracle { file, bound } => {
            let f = parse(&read_source(&file)?).map_err(|e| format!("{}:{e}", file.display()))?;
            let c = compile_formula(f, &Config { single_equation: false, ..cfg.clone() }).map_err(|e| e.to_string())?;
            let show = |b: bool| if b { "true" } else { "false" };
            println!("integers: {} within bound {bound}", show(int_oracle(&c.source, bound)));
            println!("pairs: {} within bound {bound}", show(oracle_eval(&c.pairs, bound) == OracleVerdict::TrueWithinBound));
            println!("ground: {} within bound {bound}", show(oracle_eval(&c.ground, bound) == OracleVerdict::TrueWithinBound));
        }
        Command::Divcheck { m, n, r, refute, certify } => {
            let engine = Engine::new(cfg.engine.clone()).map_err(|e| e.to_string())?;
            let inst = DivInstance::new(m, n, r);
            let v = if refute {
                engine.refute(inst)
            } else if certify {
                engine.certify(inst)
            } else {
                engine.decide(inst)
            };
            println!("{inst}: {}", v.map_err(|e| e.to_string())?);
        }
        Command::Divisor { s, r } => {
            let ctx = FnCtx::<Rational>::over_q(&cfg.engine.params);
            let f = pullback_x(&ctx, s, r, cfg.engine.sign).map_err(|e| e.to_string())?;
            let opts = DivisorOptions { factor_bound: cfg.engine.factor_bound, ..DivisorOptions::default() };
            let d = divisor_of(&f, opts).map_err(|e| e.to_string())?;
            println!("x = {f}");
            println!("div = {d}");
        }
        Command::Conic { case } => {
            let p = &cfg.engine.params;
            let ctx = tower_ctx(&p.a, &p.b);
            let qctx = FnCtx::<Rational>::over_q(p);
            let x = |n: i64| lift_fn(&ctx, CurveFunction::generic_multiple(&qctx, n).x().expect("nonzero multiple"));
            let one = TFn::constant(&ctx, TowerElem::from_int(1));
            let (a, b, tag) = match case {
                ConicCase::Pythagoras => (one.clone(), one, "1, 1"),
                ConicCase::Equal => (x(1), x(1), "x(Q), x(Q)"),
                ConicCase::Doubled => (x(2), x(1), "x(2Q), x(Q)"),
                ConicCase::Quadrupled => (x(4), x(1), "x(4Q), x(Q)"),
            };
            let inst = ConicInstance::new(a, b, tag).expect("nonzero coefficients");
            match solve_conic(&inst, &Tower::base(), cfg.engine.conic) {
                ConicOutcome::Solved(s) => {
                    println!("{tag}: {s}");
                    println!("verified: {}", verify_solution(&inst, &s));
                }
                ConicOutcome::NotFoundWithinBounds(rep) => {
                    println!("{tag}: {rep}");
                    if let Some(o) = &rep.obstruction {
                        println!("obstruction verified: {}", verify_obstruction(&inst, o));
                    }
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
