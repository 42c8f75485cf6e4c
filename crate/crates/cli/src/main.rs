//! `cstar`: exact computations with graded affine surface presentations and
//! polynomial derivations.
//!
//! Exit codes: 0 success, 1 malformed input, 2 invalid presentation or bad
//! `(d, e)` data, 3 normalization guard failure. Set `CSTAR_LOG=info` (or any
//! `env_logger` filter) for progress logging.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use log::info;

use cstar_core::classify::{recognize, uniqueness_check};
use cstar_core::deriv::{
    bracket, conjugate, exp_auto, is_lnd, jordan_chevalley, normalize_semisimple,
    parse_derivation, DerivError, LndVerdict, WeightGrading,
};
use cstar_core::schema::{
    DocError, PresentationDoc, SurfaceReportDoc, UniquenessDoc, ValidationDoc,
};
use cstar_core::toric::{
    extract_dpd, invariant_basis, recognize_toric, vde_isomorphic, ToricData, ToricError,
};

#[derive(Parser)]
#[command(name = "cstar", version, about = "Exact C*-surface and derivation computations")]
struct Cli {
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Cap for graded-component enumeration during toric extraction.
    #[arg(long, global = true, default_value_t = 32)]
    degree_cap: u32,
    /// Iteration bound for local-nilpotence certificates.
    #[arg(long, global = true, default_value_t = 64)]
    lnd_bound: u32,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a presentation JSON file (or every .json file in a directory).
    Classify { input: PathBuf },
    /// Compare two presentation files for equivalence of their surfaces.
    Equiv { a: PathBuf, b: PathBuf },
    /// Toric surface queries.
    Toric {
        #[command(subcommand)]
        cmd: ToricCmd,
    },
    /// Derivation calculus on Q[x,y] and Q[t,u,u^-1].
    Deriv {
        #[command(subcommand)]
        cmd: DerivCmd,
    },
}

#[derive(Subcommand)]
enum ToricCmd {
    /// Are V(d,e) and V(d',e') isomorphic? Prints true/false.
    Isom { a: String, b: String },
    /// Minimal generating monomials of the invariant ring.
    Basis { v: String },
    /// Extract the hyperbolic divisor pair for a grading, as JSON.
    Extract {
        v: String,
        /// Weights "wx,wy" with wx > 0 > wy.
        #[arg(long)]
        weights: String,
    },
    /// Recognize a presentation file as a V(d,e); prints "Vd,e" or "none".
    Recognize { input: PathBuf },
}

#[derive(Subcommand)]
enum DerivCmd {
    /// Lie bracket of two derivations.
    Bracket { a: String, b: String },
    /// Bounded local-nilpotence certificate.
    Lnd { d: String },
    /// Exponential automorphism of a locally nilpotent derivation.
    Exp { d: String },
    /// Conjugate the first derivation by the exponential of the second.
    Conj { delta: String, d: String },
    /// Jordan decomposition of a linear derivation.
    Jordan { d: String },
    /// Degree-lowering normalization against a reference grading.
    Normalize {
        d: String,
        /// Reference weights "w1,w2".
        #[arg(long)]
        weights: String,
    },
}

/// Error with a process exit code and an optional report that still belongs
/// on stdout (validation documents).
struct CliError {
    code: u8,
    report: Option<String>,
    message: String,
}

impl CliError {
    fn malformed(message: impl Into<String>) -> Self {
        CliError {
            code: 1,
            report: None,
            message: message.into(),
        }
    }

    fn invalid(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            report: None,
            message: message.into(),
        }
    }

    fn guard(message: impl Into<String>) -> Self {
        CliError {
            code: 3,
            report: None,
            message: message.into(),
        }
    }
}

impl From<DocError> for CliError {
    fn from(e: DocError) -> Self {
        match e {
            DocError::Malformed(m) => CliError::malformed(m),
            DocError::Invalid(report) => CliError {
                code: 2,
                report: Some(
                    serde_json::to_string_pretty(&ValidationDoc::from_report(&report))
                        .expect("validation document"),
                ),
                message: format!(
                    "invalid presentation: {}",
                    report
                        .violations
                        .iter()
                        .map(|v| v.0.as_str())
                        .collect::<Vec<_>>()
                        .join("; ")
                ),
            },
        }
    }
}

impl From<ToricError> for CliError {
    fn from(e: ToricError) -> Self {
        CliError::invalid(e.to_string())
    }
}

impl From<DerivError> for CliError {
    fn from(e: DerivError) -> Self {
        match e {
            DerivError::Parse(m) => CliError::malformed(format!("parse error: {m}")),
            DerivError::Normalize(n) => CliError::guard(n.to_string()),
            other => CliError::invalid(other.to_string()),
        }
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::malformed(format!("cannot read {}: {e}", path.display())))
}

fn load_presentation(path: &Path) -> Result<cstar_core::dpd::DpdPresentation, CliError> {
    let text = read_file(path)?;
    let doc = PresentationDoc::from_json(&text)?;
    Ok(doc.to_presentation()?)
}

fn parse_weights(s: &str) -> Result<(i64, i64), CliError> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| CliError::malformed(format!("weights must be \"a,b\", got {s:?}")))?;
    let a = a
        .trim()
        .parse()
        .map_err(|_| CliError::malformed(format!("bad weight {a:?}")))?;
    let b = b
        .trim()
        .parse()
        .map_err(|_| CliError::malformed(format!("bad weight {b:?}")))?;
    Ok((a, b))
}

fn parse_vde(s: &str) -> Result<ToricData, CliError> {
    ToricData::parse(s).map_err(CliError::from)
}

fn monomial_name(a: u64, b: u64) -> String {
    let mut s = String::new();
    match a {
        0 => {}
        1 => s.push('x'),
        _ => s.push_str(&format!("x^{a}")),
    }
    match b {
        0 => {}
        1 => s.push('y'),
        _ => s.push_str(&format!("y^{b}")),
    }
    if s.is_empty() {
        s.push('1');
    }
    s
}

fn classify_one(path: &Path) -> Result<String, CliError> {
    let p = load_presentation(path)?;
    let report = SurfaceReportDoc::from_report(&recognize(&p));
    Ok(report.to_json())
}

/// Directory batch: one JSON object per line, failures isolated per file.
fn classify_batch(dir: &Path) -> Result<String, CliError> {
    let mut entries: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| CliError::malformed(format!("cannot read {}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    entries.sort();
    info!("batch: {} presentation files in {}", entries.len(), dir.display());
    let mut lines = Vec::new();
    for path in entries {
        let name = path
            .file_name()
            .unwrap_or_default()
            .to_string_lossy()
            .to_string();
        let line = match classify_one(&path) {
            Ok(json) => {
                let report: serde_json::Value =
                    serde_json::from_str(&json).expect("report JSON");
                serde_json::json!({"file": name, "ok": true, "report": report})
            }
            Err(e) => {
                serde_json::json!({"file": name, "ok": false, "exit_class": e.code, "error": e.message})
            }
        };
        lines.push(serde_json::to_string(&line).expect("batch line"));
    }
    Ok(lines.join("\n"))
}

fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Classify { input } => {
            if input.is_dir() {
                classify_batch(input)
            } else {
                classify_one(input)
            }
        }
        Command::Equiv { a, b } => {
            let pa = load_presentation(a)?;
            let pb = load_presentation(b)?;
            let report =
                uniqueness_check(&pa, &pb).map_err(|e| CliError::invalid(e.to_string()))?;
            Ok(UniquenessDoc::from_report(&report).to_json())
        }
        Command::Toric { cmd } => match cmd {
            ToricCmd::Isom { a, b } => {
                let (a, b) = (parse_vde(a)?, parse_vde(b)?);
                Ok(vde_isomorphic(&a, &b).to_string())
            }
            ToricCmd::Basis { v } => {
                let t = parse_vde(v)?;
                let names: Vec<String> = invariant_basis(&t)
                    .into_iter()
                    .map(|(a, b)| monomial_name(a, b))
                    .collect();
                Ok(names.join(", "))
            }
            ToricCmd::Extract { v, weights } => {
                let t = parse_vde(v)?;
                let (wx, wy) = parse_weights(weights)?;
                let p = extract_dpd(&t, wx, wy, cli.degree_cap)?;
                Ok(PresentationDoc::from_presentation(&p).to_json())
            }
            ToricCmd::Recognize { input } => {
                let p = load_presentation(input)?;
                Ok(match recognize_toric(&p) {
                    Some(t) => t.to_string(),
                    None => "none".into(),
                })
            }
        },
        Command::Deriv { cmd } => match cmd {
            DerivCmd::Bracket { a, b } => {
                let (a, b) = (parse_derivation(a)?, parse_derivation(b)?);
                Ok(bracket(&a, &b)?.to_string())
            }
            DerivCmd::Lnd { d } => {
                let d = parse_derivation(d)?;
                Ok(match is_lnd(&d, cli.lnd_bound) {
                    LndVerdict::Nilpotent(k) => format!("Nilpotent({k})"),
                    LndVerdict::NotNilpotentWithinBound => {
                        format!("NotNilpotentWithinBound(bound={})", cli.lnd_bound)
                    }
                })
            }
            DerivCmd::Exp { d } => {
                let d = parse_derivation(d)?;
                Ok(exp_auto(&d, cli.lnd_bound)?.to_string())
            }
            DerivCmd::Conj { delta, d } => {
                let delta = parse_derivation(delta)?;
                let d = parse_derivation(d)?;
                Ok(conjugate(&delta, &d, cli.lnd_bound)?.to_string())
            }
            DerivCmd::Jordan { d } => {
                let d = parse_derivation(d)?;
                let parts = jordan_chevalley(&d)?;
                Ok(format!(
                    "semisimple = {}\nnilpotent = {}",
                    parts.semisimple, parts.nilpotent
                ))
            }
            DerivCmd::Normalize { d, weights } => {
                let d = parse_derivation(d)?;
                let (w1, w2) = parse_weights(weights)?;
                if w1 == 0 && w2 == 0 {
                    return Err(CliError::invalid("weights must not both vanish"));
                }
                let n = normalize_semisimple(&d, WeightGrading::new(w1, w2), cli.lnd_bound, 256)
                    .map_err(DerivError::from)?;
                let mut out = Vec::new();
                match &n.scale {
                    Some(c) => out.push(format!("c = {}", cstar_core::rational_string(c))),
                    None => out.push(
                        "c = none (residual is not proportional to the reference grading)".into(),
                    ),
                }
                for (i, conj) in n.conjugators.iter().enumerate() {
                    out.push(format!("conjugator[{i}] = {conj}"));
                }
                out.push(format!("residual = {}", n.residual));
                out.push(format!("iterations = {}", n.iterations));
                Ok(out.join("\n"))
            }
        },
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.out {
        Some(path) => fs::write(path, format!("{text}\n"))
            .map_err(|e| CliError::malformed(format!("cannot write {}: {e}", path.display()))),
        None => {
            use std::io::Write;
            match writeln!(std::io::stdout(), "{text}") {
                Ok(()) => Ok(()),
                // quiet exit when the reading end of a pipe goes away
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                Err(e) => Err(CliError::malformed(format!("cannot write to stdout: {e}"))),
            }
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("CSTAR_LOG")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(text) => match emit(&cli, &text) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("cstar: {}", e.message);
                ExitCode::from(e.code)
            }
        },
        Err(e) => {
            if let Some(report) = &e.report {
                let _ = emit(&cli, report);
            }
            eprintln!("cstar: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
