//! Command-line surface of the `bouquet` binary.
//!
//! Exit codes: 0 success, 2 usage or configuration error, 3 empty
//! computation, 4 failed verification.

mod commands;
pub mod config;
pub mod render;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::Error;
use config::{read_config_file, Command, RunConfig};

pub use render::{escape_gray, render_ppm, RenderSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_EMPTY: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

/// Why a command stopped, with its exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Failure {
        Failure { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::Parse(_)
            | Error::InvalidArgument(_)
            | Error::InfeasibleModel(_)
            | Error::BadPhi(_)
            | Error::BadSpec(_)
            | Error::EmptyInput
            | Error::UnsupportedAlphabet(_)
            | Error::ModelMismatch(_)
            | Error::EqualInputs => EXIT_USAGE,
            _ => EXIT_EMPTY,
        };
        Failure { code, message: e.to_string() }
    }
}

#[derive(Parser, Debug)]
#[command(name = "bouquet", version, about = "Trace hairs, check brush axioms and render escape-time pictures")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// Trace one hair and write `t,re,im` rows as CSV.
    Trace(Flags),
    /// Run a verification suite and write a JSON report.
    Verify(Flags),
    /// Build and check a brush over a periodic address family; write JSON.
    Brush(Flags),
    /// Render an escape-time picture of the f-plane as binary PPM.
    Render(Flags),
}

/// Every flag is optional; unset flags fall back to the config file and
/// then to the command's defaults.
#[derive(Args, Debug, Default)]
struct Flags {
    /// File of `key = value` lines using the long flag names as keys.
    #[arg(long)]
    config: Option<PathBuf>,
    /// `exp` or `sine`.
    #[arg(long)]
    model: Option<String>,
    /// `re` or `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    /// Tract radius: the tracts are the components of `|f| > Rf`.
    #[arg(long = "Rf")]
    rf: Option<String>,
    /// External address, e.g. `0` or `1 -1;0` (preperiod `;` period).
    #[arg(long, allow_hyphen_values = true)]
    address: Option<String>,
    /// Inclusive potential grid `a:b:step`.
    #[arg(long = "t", allow_hyphen_values = true)]
    t: Option<String>,
    /// Head-start slope in `φ(x) = M·x + K`.
    #[arg(long = "M", allow_hyphen_values = true)]
    m: Option<String>,
    /// Head-start offset in `φ(x) = M·x + K`.
    #[arg(long = "K", allow_hyphen_values = true)]
    k: Option<String>,
    /// Number of random samples or triples for a verification suite.
    #[arg(long)]
    samples: Option<String>,
    /// Seed for the deterministic sampler.
    #[arg(long)]
    seed: Option<String>,
    /// headstart, expansion, speedorder, accumulation or brush-axioms.
    #[arg(long)]
    suite: Option<String>,
    /// Comma-separated tract symbols, e.g. `-1,0,1`.
    #[arg(long, allow_hyphen_values = true)]
    symbols: Option<String>,
    /// Largest period of the brush address family.
    #[arg(long = "max-period")]
    max_period: Option<String>,
    /// `xmin,xmax,ymin,ymax`.
    #[arg(long, allow_hyphen_values = true)]
    viewport: Option<String>,
    /// `WxH` in pixels.
    #[arg(long)]
    size: Option<String>,
    /// Escape radius for rendering.
    #[arg(long = "R")]
    r: Option<String>,
    /// Render iterations, accumulation levels or brush refinement depth.
    #[arg(long)]
    depth: Option<String>,
    /// Brush axiom tolerance.
    #[arg(long)]
    tol: Option<String>,
    /// `f` or `log` coordinates for rendering.
    #[arg(long)]
    plane: Option<String>,
    /// Output path; standard output when absent or `-`.
    #[arg(long)]
    out: Option<String>,
    /// Accept a model whose tracts reach the boundary of the half-plane.
    #[arg(long = "allow-non-disjoint")]
    allow_non_disjoint: bool,
}

impl Flags {
    fn values(&self) -> Result<BTreeMap<String, String>, Failure> {
        let mut v = match &self.config {
            Some(path) => read_config_file(path)?,
            None => BTreeMap::new(),
        };
        let pairs = [
            ("model", &self.model),
            ("lambda", &self.lambda),
            ("Rf", &self.rf),
            ("address", &self.address),
            ("t", &self.t),
            ("M", &self.m),
            ("K", &self.k),
            ("samples", &self.samples),
            ("seed", &self.seed),
            ("suite", &self.suite),
            ("symbols", &self.symbols),
            ("max-period", &self.max_period),
            ("viewport", &self.viewport),
            ("size", &self.size),
            ("R", &self.r),
            ("depth", &self.depth),
            ("tol", &self.tol),
            ("plane", &self.plane),
            ("out", &self.out),
        ];
        for (k, val) in pairs {
            if let Some(x) = val {
                v.insert(k.to_string(), x.clone());
            }
        }
        if self.allow_non_disjoint {
            v.insert("allow-non-disjoint".into(), "true".into());
        }
        Ok(v)
    }
}

fn emit(cfg: &RunConfig, bytes: &[u8]) -> Result<(), Failure> {
    match &cfg.out {
        Some(path) => std::fs::write(path, bytes).map_err(|e| Failure::usage(format!("cannot write {path}: {e}"))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)
                .and_then(|_| out.flush())
                .map_err(|e| Failure::usage(format!("cannot write output: {e}")))
        }
    }
}

fn dispatch(cmd: Command, flags: &Flags) -> Result<i32, Failure> {
    let cfg = RunConfig::resolve(cmd, &flags.values()?)?;
    eprintln!("config: {}", cfg.to_json());
    let (passed, bytes) = match cmd {
        Command::Trace => (true, commands::trace(&cfg)?),
        Command::Render => (true, commands::render(&cfg)?),
        Command::Verify => commands::verify(&cfg)?,
        Command::Brush => commands::brush(&cfg)?,
    };
    emit(&cfg, &bytes)?;
    Ok(if passed { EXIT_OK } else { EXIT_VERIFY })
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let (cmd, flags) = match &cli.command {
        Sub::Trace(f) => (Command::Trace, f),
        Sub::Verify(f) => (Command::Verify, f),
        Sub::Brush(f) => (Command::Brush, f),
        Sub::Render(f) => (Command::Render, f),
    };
    match dispatch(cmd, flags) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}
