//! `alcove`: command-line access to root data, alcove folding, fusion rings,
//! S-matrices, FHT images, the twisted lattice group, the theta algebra and
//! the invariant suites.

mod commands;
mod config;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use alcove_core::verify::Suite;
use config::{GlobalOpts, RunConfig};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Oracle(String),
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Oracle(_) => 3,
            CliError::Internal(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Oracle(m) | CliError::Internal(m) => m,
        }
    }
}

impl From<alcove_core::Error> for CliError {
    fn from(e: alcove_core::Error) -> Self {
        use alcove_core::Error as E;
        match e {
            E::OracleDisagreement { .. } => CliError::Oracle(e.to_string()),
            E::Internal(_) | E::FoldGuard { .. } | E::NotAlternating { .. } => CliError::Internal(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Oracle {
    Smatrix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Bas,
    Triv,
}

#[derive(Parser)]
#[command(name = "alcove", version, about = "Level-k Verlinde rings and the inverse FHT map")]
struct Cli {
    #[command(flatten)]
    opts: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Root data summary
    Info,
    /// Fold a weight into the shifted alcove (`--level`, or `--k`)
    Fold {
        #[arg(long, allow_hyphen_values = true)]
        weight: String,
        /// Fold under the finite Weyl group only
        #[arg(long)]
        finite: bool,
    },
    /// Fusion product of two level-k weights
    Fusion {
        #[arg(allow_hyphen_values = true)]
        lambda: String,
        #[arg(allow_hyphen_values = true)]
        mu: String,
        #[arg(long, value_enum)]
        oracle: Option<Oracle>,
    },
    /// All fusion products at level k
    FusionTable {
        #[arg(long, value_enum)]
        oracle: Option<Oracle>,
    },
    /// Normalised modular S-matrix at level k
    SMatrix,
    /// Truncated formal character of the generator x_lambda
    FhtImage {
        #[arg(long, alias = "lambda", allow_hyphen_values = true)]
        weight: String,
    },
    /// Products in the basic and trivial group laws and the map between them
    GroupLaw {
        /// `t;eta;z`, e.g. `1/2,0;1,-1;1/3`; random from the seed if omitted
        #[arg(long, allow_hyphen_values = true)]
        g1: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        g2: Option<String>,
        #[arg(long, value_enum)]
        variant: Option<VariantArg>,
    },
    /// Theta-basis element and its block matrix model
    Algebra {
        /// `eta;mu[;coeff]`, repeatable
        #[arg(long = "term", allow_hyphen_values = true)]
        terms: Vec<String>,
        /// Right factor terms; if given the product is also reported
        #[arg(long = "times", allow_hyphen_values = true)]
        times: Vec<String>,
    },
    /// Run invariant suites; exit 0 iff every check passes
    Verify {
        /// Suite name, repeatable or comma separated; default all
        #[arg(long = "suite", value_delimiter = ',')]
        suites: Vec<Suite>,
        /// Random case count for every randomized check
        #[arg(long)]
        cases: Option<usize>,
    },
}

fn run(cli: Cli) -> Result<(String, u8), CliError> {
    let cfg = RunConfig::resolve(&cli.opts)?;
    if let Some(dir) = &cfg.cache_dir {
        alcove_core::verlinde::set_global_cache_dir(dir);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| CliError::Internal(e.to_string()))?;
    let (out, code) = pool.install(|| commands::dispatch(&cfg, &cli.command))?;
    Ok((output::render(&cfg, &out)?, code))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((text, code)) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(text.as_bytes()).is_err() {
                return ExitCode::from(4);
            }
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
