//! `lorentzlab`: batch front end. Every command prints one JSON report on
//! stdout and a one-line summary on stderr. Exit codes: 0 yes/success,
//! 1 no (the report carries a witness), 2 input error.

mod commands;
mod input;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "lorentzlab", version, about = "Exact checks for Lorentzian and hereditary Lorentzian polynomials")]
pub struct Cli {
    /// Worker threads for tuple enumeration; verdicts do not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    pub parallel: usize,
    /// Re-derive every emitted witness and record the outcome in the report.
    #[arg(long, global = true)]
    pub verify_witness: bool,
    /// Include wall-clock timing in the report (breaks byte-identical output).
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Lorentzian tests on the nonnegative orthant or a polyhedral cone.
    #[command(subcommand)]
    Poly(PolyCmd),
    /// Hereditary structure, verdicts and reconstruction from weights.
    #[command(subcommand)]
    Hereditary(HereditaryCmd),
    /// Stellar subdivision of a polynomial at a face of Δ_f.
    Subdivide(StepArgs),
    /// Inverse of `subdivide`: eliminate `--vertex`.
    Weld(StepArgs),
    /// Subdivide/weld chains.
    #[command(subcommand)]
    Chain(ChainCmd),
    /// Lattices of flats, characteristic polynomials and Bergman fans.
    #[command(subcommand)]
    Matroid(MatroidCmd),
    /// Volumes, volume polynomials and mixed volumes of simple polytopes.
    #[command(subcommand)]
    Polytope(PolytopeCmd),
    /// Simplicial fans and degree functionals on them.
    #[command(subcommand)]
    Fan(FanCmd),
}

#[derive(Subcommand, Debug)]
pub enum PolyCmd {
    /// Orthant Lorentzian test.
    Lorentzian {
        /// Polynomial file (text grammar or JSON), or an inline polynomial.
        poly: String,
        #[arg(long, value_enum, default_value_t = Method::Exchange)]
        method: Method,
    },
    /// K-Lorentzian test for the cone spanned by the generators in `--cone`.
    KLorentzian {
        poly: String,
        #[arg(long)]
        cone: String,
    },
    /// Sampling refutation of the defining conditions over random cone points
    /// (seeded by LORENTZLAB_SEED).
    Definitional {
        poly: String,
        #[arg(long)]
        cone: String,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Method {
    /// M-convex support plus Hessians.
    Exchange,
    /// H-connected support plus Hessians.
    Connectivity,
}

#[derive(Subcommand, Debug)]
pub enum HereditaryCmd {
    /// Δ_f, L_f, strength and facet weights.
    Check { poly: String },
    /// Hereditary Lorentzian verdict with connectivity and signature certificates.
    Lorentzian {
        poly: String,
        /// Candidate cone point, comma separated; may be repeated.
        #[arg(long = "hint")]
        hints: Vec<String>,
    },
    /// The unique polynomial with given facet weights.
    FromWeights { weights: String },
}

#[derive(Args, Debug)]
pub struct StepArgs {
    pub poly: String,
    /// Face labels, comma separated.
    #[arg(long)]
    pub face: String,
    /// Positive rational coefficients, comma separated.
    #[arg(long)]
    pub coeffs: String,
    /// Label of the new vertex (subdivide) or the eliminated one (weld).
    #[arg(long)]
    pub vertex: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum ChainCmd {
    /// Apply a JSON list of `{kind, face, c, vertex?}` steps.
    Apply { poly: String, chain: String },
}

#[derive(Subcommand, Debug)]
pub enum MatroidCmd {
    Flats { matroid: String },
    Charpoly { matroid: String },
    /// Log-concavity of the reduced characteristic polynomial through pol_L.
    Hrw { matroid: String },
    /// Bergman fan with its volume functional and verdict.
    Bergman { matroid: String },
}

#[derive(Subcommand, Debug)]
pub enum PolytopeCmd {
    Volume { polytope: String },
    Polynomial { polytope: String },
    /// Mixed volume of `dim` bodies sharing a normal fan, scaled so that
    /// V(K,…,K) = dim!·Vol(K).
    Mixed { polytopes: Vec<String> },
    /// Alexandrov–Fenchel inequality for bodies sharing a normal fan.
    Af { polytopes: Vec<String> },
}

#[derive(Subcommand, Debug)]
pub enum FanCmd {
    /// Fan axioms, balanced weights and the functional's verdict.
    Check {
        fan: String,
        /// Weights file; the volume functional is used when omitted.
        #[arg(long)]
        weights: Option<String>,
        #[arg(long = "hint")]
        hints: Vec<String>,
    },
    /// Subdivide at a ray and transport the functional.
    Subdivide {
        fan: String,
        #[arg(long)]
        ray: String,
        #[arg(long, default_value = "r0")]
        label: String,
        #[arg(long)]
        weights: Option<String>,
    },
    /// Compare two functionals on overlapping maximal cones.
    Bijection {
        fan: String,
        other: String,
        #[arg(long)]
        weights: Option<String>,
        #[arg(long)]
        other_weights: Option<String>,
    },
    /// Transport a functional along a JSON list of fan steps.
    Transport {
        fan: String,
        steps: String,
        #[arg(long)]
        weights: Option<String>,
    },
}

/// What a command produced: the report body and whether the answer is yes.
pub struct Outcome {
    pub verdict: &'static str,
    pub body: Value,
    pub summary: String,
}

impl Outcome {
    pub fn new(yes: bool, body: Value, summary: impl Into<String>) -> Outcome {
        Outcome { verdict: if yes { "yes" } else { "no" }, body, summary: summary.into() }
    }

    pub fn success(body: Value, summary: impl Into<String>) -> Outcome {
        Outcome::with("success", body, summary)
    }

    /// `vacuous` and `consistent` also exit 0.
    pub fn with(verdict: &'static str, body: Value, summary: impl Into<String>) -> Outcome {
        Outcome { verdict, body, summary: summary.into() }
    }
}

#[derive(Debug)]
pub struct InputError(pub String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> InputError {
        InputError(e.to_string())
    }
}

/// Writes the report; a closed stdout (e.g. `| head`) is not an error.
fn emit(report: &Value) {
    let text = serde_json::to_string_pretty(report).expect("report serializes");
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let cli = Cli::parse();
    let start = Instant::now();
    let result = commands::run(&cli);
    let secs = start.elapsed().as_secs_f64();
    match result {
        Ok(out) => {
            let mut report = json!({ "command": argv, "verdict": out.verdict });
            if let (Value::Object(r), Value::Object(b)) = (&mut report, out.body) {
                r.extend(b);
            }
            if cli.timing {
                report["timing_seconds"] = json!(secs);
            }
            emit(&report);
            eprintln!("{}: {} ({secs:.2}s)", out.verdict, out.summary);
            if out.verdict == "no" {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(InputError(msg)) => {
            emit(&json!({ "command": argv, "verdict": "error", "error": msg }));
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
