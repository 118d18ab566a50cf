//! `ample`: command-line front end. Every command prints one JSON line per
//! report on stdout. Exit status is 0 on success, 1 when a check fails, 2 on
//! bad input and 3 when a depth or size limit is hit.

mod commands;

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use ample_core::{BaseSequence, Error, DEFAULT_DEPTH_LIMIT};
use clap::{Args, Parser, Subcommand};
use serde_json::Value;

#[derive(Parser, Debug)]
#[command(name = "ample", version, about = "Exact computations in topological full groups of odometers")]
pub struct Cli {
    #[command(flatten)]
    pub opts: Opts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Opts {
    /// Radices as "2", "2,3" (period) or "2;3" (pre-period;period).
    #[arg(long, global = true, default_value = "2")]
    pub base: String,
    #[arg(long, global = true, default_value_t = DEFAULT_DEPTH_LIMIT)]
    pub depth_limit: usize,
    #[arg(long, global = true, default_value_t = ample_core::selftest::DEFAULT_SEED)]
    pub seed: u64,
    /// Input JSON file; stdin when absent or "-".
    #[arg(long = "in", global = true)]
    pub input: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Single elements: construction, arithmetic and invariants.
    Elem {
        #[command(subcommand)]
        op: ElemOp,
    },
    /// Kakutani-Rokhlin partition of {"u", "g"}; g defaults to the odometer.
    Kr,
    /// First-return factorization g = g_u ∘ h_u of {"u", "g"}.
    ReturnMap,
    /// Local decompositions, certificates and kernel factorizations.
    PropE {
        #[command(subcommand)]
        op: PropEOp,
    },
    /// Stabilizers of finite point sets.
    Stab {
        #[command(subcommand)]
        op: StabOp,
    },
    /// The nested construction around zero.
    Nd {
        #[command(subcommand)]
        op: NdOp,
    },
    /// Brute-force checks in finite symmetric groups.
    Oracle {
        #[command(subcommand)]
        op: OracleOp,
    },
    /// Run acceptance suites; all of them unless --suite is given.
    Selftest {
        #[arg(long)]
        suite: Vec<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum ElemOp {
    /// The odometer of --base.
    Odometer,
    /// Random element at depth at most --max-depth, from --seed.
    Random {
        #[arg(long, default_value_t = 3)]
        max_depth: usize,
        #[arg(long, default_value_t = 3)]
        bound: i64,
    },
    /// Canonical form of the input element.
    Show,
    Index,
    Order,
    Inverse,
    Support,
    Wreath,
    /// g ∘ h for {"g", "h"}.
    Compose,
    Power {
        #[arg(long, allow_hyphen_values = true)]
        k: String,
    },
    /// g(u) for {"g", "u"}.
    Image,
}

#[derive(Subcommand, Debug)]
pub enum PropEOp {
    /// Certificate for {"g", "u1", "u2"}.
    Decompose,
    /// Re-check a certificate.
    Verify,
    /// Two finite-order factors of {"h", "w"}; w is optional.
    Kernel,
}

#[derive(Subcommand, Debug)]
pub enum StabOp {
    /// Classify the stabilizer of {"base", "points"}.
    Classify,
    /// Element realizing {"y", "pi", "z"}.
    Realize,
    /// Whether {"x", "y"} lie in one odometer orbit.
    SameOrbit,
}

#[derive(Subcommand, Debug)]
pub enum NdOp {
    Build {
        #[arg(long)]
        stages: usize,
    },
    /// Checks for one omega prefix; stages default to its length.
    Check {
        #[arg(long)]
        omega: String,
        #[arg(long)]
        stages: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
pub enum OracleOp {
    /// Stabilizer of y in Sym(n), classified and brute-forced.
    Maximality {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',')]
        y: Vec<usize>,
    },
    /// Whether Sym(u1) and Sym(u2) generate Sym(u1 ∪ u2).
    Generation {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',')]
        u1: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        u2: Vec<usize>,
    },
}

#[derive(Debug)]
pub enum CliError {
    Parse(String),
    Verify(String),
    Limit(String),
}

impl CliError {
    fn status(&self) -> u8 {
        match self {
            CliError::Verify(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Limit(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Parse(m) | CliError::Verify(m) | CliError::Limit(m) => m,
        }
    }

    /// Errors while reading input are parse errors unless a limit was hit.
    pub fn reading(e: Error) -> Self {
        match e {
            Error::DepthLimit { .. } | Error::ModelTooLarge(_) | Error::ClosureCap(_) => CliError::Limit(e.to_string()),
            _ => CliError::Parse(e.to_string()),
        }
    }

    /// Errors from an operation on valid input.
    pub fn running(e: Error) -> Self {
        match e {
            Error::DepthLimit { .. } | Error::ModelTooLarge(_) | Error::ClosureCap(_) => CliError::Limit(e.to_string()),
            Error::Parse(_) => CliError::Parse(e.to_string()),
            _ => CliError::Verify(e.to_string()),
        }
    }
}

/// Resolved options shared by all commands.
pub struct Ctx {
    pub base: BaseSequence,
    pub depth_limit: usize,
    pub seed: u64,
    input: Option<PathBuf>,
}

impl Ctx {
    pub fn read_input(&self) -> Result<Value, CliError> {
        let text = match &self.input {
            Some(p) if p.as_os_str() != "-" => {
                fs::read_to_string(p).map_err(|e| CliError::Parse(format!("{}: {e}", p.display())))?
            }
            _ => {
                let mut s = String::new();
                io::stdin().read_to_string(&mut s).map_err(|e| CliError::Parse(e.to_string()))?;
                s
            }
        };
        serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("invalid JSON: {e}")))
    }

    pub fn check_depth(&self, depth: usize) -> Result<(), CliError> {
        self.base.check_depth(depth, self.depth_limit).map_err(CliError::reading)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.opts.out.clone();
    let result = context(&cli.opts).and_then(|ctx| commands::run(&ctx, &cli.command));
    let (lines, status) = match result {
        Ok(outcome) => (outcome.lines, if outcome.ok { 0 } else { 1 }),
        Err(e) => {
            eprintln!("error: {}", e.message());
            let line = serde_json::json!({ "error": e.message(), "status": e.status() }).to_string();
            (vec![line], e.status())
        }
    };
    let mut text = lines.join("\n");
    text.push('\n');
    let written = match out {
        Some(p) => fs::write(&p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(status)
}

fn context(opts: &Opts) -> Result<Ctx, CliError> {
    let base: BaseSequence = opts.base.parse().map_err(|e: Error| CliError::Parse(e.to_string()))?;
    if opts.depth_limit > DEFAULT_DEPTH_LIMIT {
        return Err(CliError::Parse(format!(
            "--depth-limit {} exceeds the maximum of {DEFAULT_DEPTH_LIMIT}",
            opts.depth_limit
        )));
    }
    Ok(Ctx { base, depth_limit: opts.depth_limit, seed: opts.seed, input: opts.input.clone() })
}
