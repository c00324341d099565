//! `flagpush`: batch front end for the push-forward engine.
//!
//! Exit codes: 0 success, 1 usage, 2 input or I/O, 3 oracle disagreement.

mod commands;
mod ranges;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "flagpush", version, about = "Exact push-forwards along flag and Grassmann bundles")]
struct Cli {
    /// Seed for every sampled check; recorded in the report.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Output format. Defaults to csv for `table` and json otherwise.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Include the canonical text of parsed and converted polynomials.
    #[arg(long, global = true)]
    dump_poly: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Push a polynomial in t1.. (or xi1..), e1.. and a to the base by
    /// both oracles and every coefficient formula.
    Pushforward(PushforwardArgs),
    /// Check the printed claims against the oracles.
    Audit(AuditArgs),
    /// Degree and per-quotient slope table.
    Table(TableArgs),
    /// Validate a filtration certificate and run the numeric checks.
    Certify(CertifyArgs),
}

#[derive(Debug, Args)]
struct PushforwardArgs {
    #[arg(long)]
    r: usize,
    #[arg(long)]
    poly: String,
    /// Impose e1 = 0 on the results.
    #[arg(long)]
    zero_c1: bool,
}

#[derive(Debug, Args)]
struct AuditArgs {
    /// Rank or inclusive range, e.g. `2..5`.
    #[arg(long, default_value = "2..5")]
    r: String,
    /// Random inputs per fiber degree in the sampled checks.
    #[arg(long, default_value_t = 8)]
    samples: usize,
}

#[derive(Debug, Args)]
struct TableArgs {
    #[arg(long)]
    r: usize,
    /// `ones`, `literal`, or a comma-separated list of r-1 weights.
    #[arg(long, default_value = "ones")]
    weights: String,
    /// Sequence indices, e.g. `1..20` or `1,2,5`.
    #[arg(long, default_value = "1..10")]
    m: String,
    #[arg(long, default_value = "1")]
    n: String,
    /// Emit a filtration certificate built from the rows instead.
    #[arg(long)]
    certificate: bool,
    /// Slope of E used in the certificate.
    #[arg(long, default_value = "0")]
    mu: String,
    /// Degree of c1(A) against H^(d-1) used in the certificate.
    #[arg(long, default_value = "1")]
    ah: String,
    /// Dimension of the base recorded in the certificate.
    #[arg(long, default_value_t = 2)]
    d: usize,
}

#[derive(Debug, Args)]
struct CertifyArgs {
    /// Certificate JSON file, or `-` for stdin.
    certificate: Option<String>,
    /// Slope excess to compare with 1/(r(r-1)).
    #[arg(long)]
    epsilon: Option<String>,
    /// Rank for the gap check when no certificate is given.
    #[arg(long)]
    r: Option<usize>,
    /// Rescale by the n-th power of Frobenius first: `--frobenius P N`.
    #[arg(long, num_args = 2, value_names = ["P", "N"])]
    frobenius: Option<Vec<u64>>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Input(String),
    Inconsistent(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Input(_) => 2,
            CliError::Inconsistent(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Inconsistent(m) => write!(f, "internal consistency failure: {m}"),
        }
    }
}

/// A rendered report plus whether the oracles agreed while producing it.
pub struct Output {
    pub body: String,
    pub oracles_agree: bool,
}

fn run(cli: Cli) -> Result<Output, CliError> {
    let ctx = commands::Settings {
        seed: cli.seed,
        format: cli.format,
        dump_poly: cli.dump_poly,
    };
    match cli.command {
        Command::Pushforward(a) => commands::pushforward(&ctx, a.r, &a.poly, a.zero_c1),
        Command::Audit(a) => commands::audit(&ctx, &a.r, a.samples),
        Command::Table(a) => commands::table(
            &ctx,
            &commands::TableRequest {
                r: a.r,
                weights: &a.weights,
                m: &a.m,
                n: &a.n,
                certificate: a.certificate,
                mu: &a.mu,
                ah: &a.ah,
                d: a.d,
            },
        ),
        Command::Certify(a) => {
            let frobenius = a.frobenius.map(|v| (v[0], v[1]));
            commands::certify(&ctx, a.certificate.as_deref(), a.epsilon.as_deref(), a.r, frobenius)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let out_path = cli.out.clone();
    let output = match run(cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("flagpush: {e}");
            return ExitCode::from(e.code());
        }
    };
    let mut body = output.body;
    if !body.ends_with('\n') {
        body.push('\n');
    }
    match out_path {
        Some(path) => {
            if let Err(e) = fs::write(&path, &body) {
                eprintln!("flagpush: input error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{body}"),
    }
    if output.oracles_agree {
        ExitCode::SUCCESS
    } else {
        eprintln!("flagpush: internal consistency failure: the push-forward oracles disagree");
        ExitCode::from(3)
    }
}
