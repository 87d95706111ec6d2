//! Command-line front end: argument parsing, dispatch and report rendering.

pub mod commands;
pub mod input;

use std::path::PathBuf;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use stablin::groups::MAX_GROUP_ORDER;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read input: {0}")]
    Io(String),
    #[error("invalid document: {0}")]
    Schema(String),
    #[error(transparent)]
    Core(#[from] stablin::Error),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io(_) => "io",
            CliError::Schema(_) => "schema",
            CliError::Core(_) => "library",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "stablin", version, about = "Exact certificates for G-lattices, cohomology and lifting obstructions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Input document (JSON).
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Emit the structured report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Search bound: coordinate bound for perm-check, added rank for stably-perm.
    #[arg(long, global = true)]
    pub bound: Option<u32>,
    /// Coefficient modulus for h2, or the root-of-unity modulus for lift-check.
    #[arg(long, global = true)]
    pub modulus: Option<u64>,
    /// Seed for sampled checks.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Largest group order accepted.
    #[arg(long, global = true, default_value_t = MAX_GROUP_ORDER)]
    pub max_order: usize,
    /// Wall-clock limit for bounded searches, in seconds.
    #[arg(long, global = true)]
    pub deadline: Option<f64>,
    /// Worker threads for internal parallelism.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Lattice to operate on (default: the first one).
    #[arg(long, global = true)]
    pub lattice: Option<String>,
    /// Cohomological degree for tate (-1 or 0) and torus-h (1 or 2).
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub degree: Option<i32>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Group and lattice summary.
    Info,
    /// First cohomology H^1(G, M).
    H1,
    /// H^2(G, M), or with coefficients mod --modulus.
    H2,
    /// Tate cohomology in degree -1 or 0.
    Tate,
    /// H^1(H, M) = 0 for all subgroups H.
    Coflabby,
    /// Tate H^-1(H, M) = 0 for all subgroups H.
    Flabby,
    /// Is the lattice a permutation lattice?
    PermCheck,
    /// Search for M + P = Q with P, Q permutation lattices.
    StablyPerm,
    /// Re-verify the certificate in the document.
    VerifyCert,
    /// Equivariant section of a surjection.
    Split,
    /// Cohomology of the torus with the given character lattice.
    TorusH,
    /// Obstruction to lifting projective actions.
    LiftCheck,
    /// Signed-permutation lift of the group to the Cox ring.
    CoxLift,
    /// Exact polynomial identities, with a seeded sampled cross-check.
    PolyVerify,
    /// Run a catalog bundle, or list the bundles.
    Catalog { name: Option<String> },
    /// Compare invariants of a lattice and its twist by an automorphism.
    Twist,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Info => "info",
            Command::H1 => "h1",
            Command::H2 => "h2",
            Command::Tate => "tate",
            Command::Coflabby => "coflabby",
            Command::Flabby => "flabby",
            Command::PermCheck => "perm-check",
            Command::StablyPerm => "stably-perm",
            Command::VerifyCert => "verify-cert",
            Command::Split => "split",
            Command::TorusH => "torus-h",
            Command::LiftCheck => "lift-check",
            Command::CoxLift => "cox-lift",
            Command::PolyVerify => "poly-verify",
            Command::Catalog { .. } => "catalog",
            Command::Twist => "twist",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Holds,
    Fails,
    Inconclusive,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Holds => 0,
            Status::Fails => 1,
            Status::Inconclusive => 2,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Status::Holds => "holds",
            Status::Fails => "fails",
            Status::Inconclusive => "inconclusive",
        }
    }

    pub fn and(self, other: Status) -> Status {
        match (self, other) {
            (Status::Fails, _) | (_, Status::Fails) => Status::Fails,
            (Status::Inconclusive, _) | (_, Status::Inconclusive) => Status::Inconclusive,
            _ => Status::Holds,
        }
    }
}

/// Result of one command: verdict, structured results and text lines.
pub struct Outcome {
    pub status: Status,
    pub results: Vec<Value>,
    pub certificate: Option<Value>,
    pub lines: Vec<String>,
}

impl Outcome {
    pub fn new(status: Status) -> Self {
        Outcome {
            status,
            results: Vec::new(),
            certificate: None,
            lines: Vec::new(),
        }
    }
}

pub const ERROR_EXIT: i32 = 3;

/// Parses `argv` (without the program name), runs the command and returns
/// the exit code with the rendered report.
pub fn run_command<I, S>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = std::iter::once(std::ffi::OsString::from("stablin"))
        .chain(argv.into_iter().map(Into::into))
        .collect();
    let wants_json = args.iter().any(|a| a == "--json");
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => (0, e.to_string()),
                _ => (ERROR_EXIT, render_error(&CliError::Usage(e.to_string()), wants_json)),
            };
        }
    };
    run(&cli)
}

pub fn run(cli: &Cli) -> (i32, String) {
    let result = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| commands::dispatch(cli)),
            Err(e) => Err(CliError::Usage(e.to_string())),
        },
        None => commands::dispatch(cli),
    };
    match result {
        Ok(outcome) => (outcome.status.exit_code(), render(cli, &outcome)),
        Err(e) => (ERROR_EXIT, render_error(&e, cli.json)),
    }
}

fn render(cli: &Cli, o: &Outcome) -> String {
    if cli.json {
        let mut report = json!({
            "command": cli.command.name(),
            "status": o.status.label(),
            "exit_code": o.status.exit_code(),
            "results": o.results,
        });
        if let Some(c) = &o.certificate {
            report["certificate"] = c.clone();
        }
        let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
        s.push('\n');
        s
    } else {
        let mut s = o.lines.join("\n");
        s.push_str(&format!("\nstatus: {}\n", o.status.label()));
        s
    }
}

fn render_error(e: &CliError, as_json: bool) -> String {
    if as_json {
        let v = json!({
            "exit_code": ERROR_EXIT,
            "error": { "kind": e.kind(), "message": e.to_string() },
        });
        let mut s = serde_json::to_string_pretty(&v).expect("error serializes");
        s.push('\n');
        s
    } else {
        format!("error ({}): {e}\n", e.kind())
    }
}

pub(crate) fn deadline(cli: &Cli) -> Result<Option<Instant>, CliError> {
    match cli.deadline {
        None => Ok(None),
        Some(s) if s.is_finite() && s >= 0.0 => Ok(Some(Instant::now() + Duration::from_secs_f64(s))),
        Some(s) => Err(CliError::Usage(format!("bad deadline {s}"))),
    }
}
