//! Command-line surface over the exact LP engine.
//!
//! Subcommands: `solve`, `certify`, `vertices`, `descent`, `farkas`,
//! `workingset`, `render`. All numeric output is rational strings; exit codes
//! encode the outcome (0 optimal/success, 2 unbounded, 3 infeasible,
//! 4 verification failed, 1 usage or data errors).

pub mod json;
pub mod render;

use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use lpcert::{
    check_certificate, descend_to_vertex, enumerate_vertices, farkas, find_feasible_point,
    optimal_working_set_at, parse_lp, parse_matrix, parse_vector, solve_with, DescentEnd, Error,
    FarkasOutcome, FeasibilityOutcome, MixedLp, Rational, SolveOptions, SolveOutcome, Vector,
    Verdict, DEFAULT_SUBSET_CAP,
};

use json::{
    rationals_to_strings, CertificateJson, CertifyJson, DescentJson, FarkasJson, TraceJson,
};
use render::RenderConfig;

pub const ENV_SUBSET_CAP: &str = "LPCERT_SUBSET_CAP";

#[derive(Debug)]
pub enum CliError {
    Lp(Error),
    Io(std::io::Error),
    Json(serde_json::Error),
    Usage(String),
    NotTwoDimensional(usize),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Lp(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
            CliError::Json(e) => write!(f, "{e}"),
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::NotTwoDimensional(n) => {
                write!(f, "render needs a two-variable instance, this one has {n}")
            }
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lp(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Json(e)
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "lpcert",
    version,
    about = "Exact rational LP solving with verifiable optimality certificates"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve an LP file and write a certificate document
    Solve {
        lp: PathBuf,
        /// Permutation of 1..=m_I assigning an ε power to each inequality
        #[arg(long, value_name = "I,J,K")]
        epsilon_order: Option<String>,
        /// Feasible starting point (skips the feasibility phase)
        #[arg(long, value_name = "X1,X2,...")]
        start: Option<String>,
        /// Cross-check the outcome against brute-force vertex enumeration
        #[arg(long)]
        oracle_check: bool,
        /// Cap on enumerated subsets (also via LPCERT_SUBSET_CAP)
        #[arg(long, value_name = "N")]
        subset_cap: Option<u128>,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Check a certificate (x, λ) against an LP; exit 0 iff it verifies
    Certify {
        lp: PathBuf,
        /// Vector file with the candidate point
        #[arg(long = "x", value_name = "FILE")]
        x: PathBuf,
        /// Vector file with the multiplier
        #[arg(long, value_name = "FILE")]
        lambda: PathBuf,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Enumerate all vertices by brute force
    Vertices {
        lp: PathBuf,
        #[arg(long, value_name = "N")]
        subset_cap: Option<u128>,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Walk from a feasible point to a vertex (or an unbounded ray)
    Descent {
        lp: PathBuf,
        /// Starting point; a feasible one is computed when omitted
        #[arg(long, value_name = "X1,X2,...")]
        start: Option<String>,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Decide the Farkas alternative for a matrix file and a vector file
    Farkas {
        matrix: PathBuf,
        vector: PathBuf,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Optimal working set at a given optimal vertex, from a solve certificate
    Workingset {
        lp: PathBuf,
        /// The optimal vertex, comma-separated rationals
        #[arg(long, value_name = "X1,X2,...")]
        at: String,
        /// Certificate JSON produced by `solve`
        #[arg(long, value_name = "FILE")]
        cert: PathBuf,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Draw a two-variable instance as SVG
    Render {
        lp: PathBuf,
        /// Instantiate the perturbation at this numeric ε
        #[arg(long, value_name = "P/Q")]
        epsilon: Option<String>,
        #[arg(long, value_name = "I,J,K")]
        epsilon_order: Option<String>,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
}

pub fn run(cli: Cli) -> u8 {
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn dispatch(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Solve {
            lp,
            epsilon_order,
            start,
            oracle_check,
            subset_cap,
            out,
        } => {
            let lp = load_lp(&lp)?;
            let opts = SolveOptions {
                epsilon_order: epsilon_order.map(|s| parse_csv_usizes(&s)).transpose()?,
                start: start.map(|s| parse_csv_rationals(&s)).transpose()?,
                oracle_check,
                subset_cap: resolve_cap(subset_cap)?,
            };
            let outcome = solve_with(&lp, &opts)?;
            emit_json(&out, &CertificateJson::from_outcome(&lp, &outcome))?;
            Ok(match outcome {
                SolveOutcome::Optimal(_) => 0,
                SolveOutcome::Unbounded { .. } => 2,
                SolveOutcome::Infeasible { .. } => 3,
            })
        }
        Command::Certify { lp, x, lambda, out } => {
            let lp = load_lp(&lp)?;
            let x = parse_vector(&std::fs::read_to_string(x)?)?;
            let lambda = parse_vector(&std::fs::read_to_string(lambda)?)?;
            let report = check_certificate(&lp, &x, &lambda)?;
            emit_json(&out, &CertifyJson::from_report(&report))?;
            Ok(if report.verdict == Verdict::Optimal {
                0
            } else {
                4
            })
        }
        Command::Vertices {
            lp,
            subset_cap,
            out,
        } => {
            let lp = load_lp(&lp)?;
            let vertices = enumerate_vertices(&lp, resolve_cap(subset_cap)?)?;
            let rows: Vec<Vec<String>> = vertices.iter().map(|v| rationals_to_strings(v)).collect();
            emit_json(&out, &rows)?;
            Ok(0)
        }
        Command::Descent { lp, start, out } => {
            let lp = load_lp(&lp)?;
            let x0 = match start {
                Some(s) => parse_csv_rationals(&s)?,
                None => match find_feasible_point(&lp)? {
                    FeasibilityOutcome::Feasible(x) => x,
                    FeasibilityOutcome::Infeasible(w) => {
                        eprintln!("no feasible starting point: {}", w.describe());
                        return Ok(3);
                    }
                },
            };
            let outcome = descend_to_vertex(&lp, &x0)?;
            let trace: Vec<TraceJson> = outcome
                .trace
                .iter()
                .map(|t| TraceJson {
                    point: rationals_to_strings(&t.point),
                    active_rank: t.active_rank,
                })
                .collect();
            let (doc, code) = match outcome.end {
                DescentEnd::Vertex(v) => (
                    DescentJson {
                        outcome: "vertex".into(),
                        vertex: Some(rationals_to_strings(&v)),
                        ray: None,
                        trace,
                    },
                    0,
                ),
                DescentEnd::Unbounded(p) => (
                    DescentJson {
                        outcome: "unbounded".into(),
                        vertex: None,
                        ray: Some(rationals_to_strings(&p)),
                        trace,
                    },
                    2,
                ),
            };
            emit_json(&out, &doc)?;
            Ok(code)
        }
        Command::Farkas {
            matrix,
            vector,
            out,
        } => {
            let a = parse_matrix(&std::fs::read_to_string(matrix)?)?;
            let c = parse_vector(&std::fs::read_to_string(vector)?)?;
            let doc = match farkas(&a, &c)? {
                FarkasOutcome::Combination { y } => FarkasJson {
                    case: 1,
                    witness: rationals_to_strings(&y),
                },
                FarkasOutcome::Separation { p } => FarkasJson {
                    case: 2,
                    witness: rationals_to_strings(&p),
                },
            };
            emit_json(&out, &doc)?;
            Ok(0)
        }
        Command::Workingset { lp, at, cert, out } => {
            let lp = load_lp(&lp)?;
            let at = parse_csv_rationals(&at)?;
            let doc: CertificateJson = serde_json::from_str(&std::fs::read_to_string(cert)?)?;
            let lambda_strings = doc
                .lambda
                .ok_or_else(|| CliError::Usage("certificate file carries no lambda".into()))?;
            let lambda = parse_rational_strings(&lambda_strings)?;
            let report = check_certificate(&lp, &at, &lambda)?;
            match optimal_working_set_at(&lp, &at, &report.certificate) {
                Ok(w) => {
                    emit_json(&out, &w.indices().to_vec())?;
                    Ok(0)
                }
                Err(
                    e @ (Error::NotOptimalVertex(_)
                    | Error::NotDualFeasible(_)
                    | Error::NotFeasible { .. }
                    | Error::RankDeficient),
                ) => {
                    eprintln!("error: {e}");
                    Ok(4)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Render {
            lp,
            epsilon,
            epsilon_order,
            out,
        } => {
            let lp = load_lp(&lp)?;
            let cfg = RenderConfig {
                epsilon: epsilon
                    .map(|s| {
                        s.parse::<Rational>()
                            .map_err(|e| CliError::Usage(e.to_string()))
                    })
                    .transpose()?,
                order: epsilon_order.map(|s| parse_csv_usizes(&s)).transpose()?,
            };
            let svg = render::render_svg(&lp, &cfg)?;
            emit_text(&out, &svg)?;
            Ok(0)
        }
    }
}

fn load_lp(path: &Path) -> Result<MixedLp, CliError> {
    let text = std::fs::read_to_string(path)?;
    let parsed = parse_lp(&text)?;
    for w in &parsed.warnings {
        eprintln!("warning: {w}");
    }
    Ok(parsed.lp)
}

fn resolve_cap(flag: Option<u128>) -> Result<u128, CliError> {
    if let Some(cap) = flag {
        return Ok(cap);
    }
    match std::env::var(ENV_SUBSET_CAP) {
        Ok(s) => s.parse().map_err(|_| {
            CliError::Usage(format!("{ENV_SUBSET_CAP} must be an integer, got {s:?}"))
        }),
        Err(_) => Ok(DEFAULT_SUBSET_CAP),
    }
}

fn parse_csv_rationals(s: &str) -> Result<Vector, CliError> {
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<Rational>()
                .map_err(|e| CliError::Usage(e.to_string()))
        })
        .collect()
}

fn parse_rational_strings(strings: &[String]) -> Result<Vector, CliError> {
    strings
        .iter()
        .map(|s| {
            s.parse::<Rational>()
                .map_err(|e| CliError::Usage(e.to_string()))
        })
        .collect()
}

fn parse_csv_usizes(s: &str) -> Result<Vec<usize>, CliError> {
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Usage(format!("invalid index {:?}", tok.trim())))
        })
        .collect()
}

fn emit_json<T: serde::Serialize>(out: &Option<PathBuf>, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    emit_text(out, &text)
}

fn emit_text(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}
