//! Run configuration: explicit flags, then the `key=value` config file, then
//! defaults.

use std::fs;
use std::path::{Path, PathBuf};

use alcove_core::LieType;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Debug, Clone, Default, clap::Args)]
pub struct GlobalOpts {
    /// Lie type, e.g. A2, G2, E8
    #[arg(long = "type", global = true, value_parser = parse_type)]
    pub lie_type: Option<LieType>,
    /// Level k (the alcove level is k + h_dual)
    #[arg(long, global = true)]
    pub k: Option<i64>,
    /// Alcove level l = k + h_dual, for commands that take it directly
    #[arg(long, global = true)]
    pub level: Option<i64>,
    #[arg(long, global = true)]
    pub window: Option<i64>,
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Directory for the persistent weight-system cache
    #[arg(long, global = true, env = "ALCOVE_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
    /// Plain-text `key=value` file; explicit flags take precedence
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

pub fn parse_type(s: &str) -> Result<LieType, String> {
    s.parse::<LieType>().map_err(|e| e.to_string())
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub lie_type: Option<LieType>,
    pub k: Option<i64>,
    pub level: Option<i64>,
    pub window: Option<i64>,
    pub tolerance: f64,
    /// Tolerance as given by the user, if any.
    pub explicit_tolerance: Option<f64>,
    pub seed: u64,
    pub jobs: usize,
    pub format: Format,
    pub cache_dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn resolve(opts: &GlobalOpts) -> Result<Self, CliError> {
        let file = match &opts.config {
            Some(p) => read_config_file(p)?,
            None => GlobalOpts::default(),
        };
        let jobs = opts
            .jobs
            .or(file.jobs)
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
        let cfg = RunConfig {
            lie_type: opts.lie_type.or(file.lie_type),
            k: opts.k.or(file.k),
            level: opts.level.or(file.level),
            window: opts.window.or(file.window),
            tolerance: opts.tolerance.or(file.tolerance).unwrap_or(1e-9),
            explicit_tolerance: opts.tolerance.or(file.tolerance),
            seed: opts.seed.or(file.seed).unwrap_or(0),
            jobs,
            format: opts.format.or(file.format).unwrap_or(Format::Json),
            cache_dir: opts.cache_dir.clone().or(file.cache_dir),
        };
        if !(cfg.tolerance > 0.0) {
            return Err(CliError::Usage("tolerance must be > 0".into()));
        }
        if cfg.window.is_some_and(|w| w < 1) {
            return Err(CliError::Usage("window must be >= 1".into()));
        }
        if cfg.jobs < 1 {
            return Err(CliError::Usage("jobs must be >= 1".into()));
        }
        Ok(cfg)
    }

    /// Rounding tolerance for the S-matrix oracle.
    pub fn oracle_tolerance(&self) -> f64 {
        self.explicit_tolerance.unwrap_or(alcove_core::verlinde::VERLINDE_ROUNDING_TOL)
    }

    pub fn require_type(&self) -> Result<LieType, CliError> {
        self.lie_type
            .ok_or_else(|| CliError::Usage("--type is required".into()))
    }

    pub fn require_k(&self) -> Result<i64, CliError> {
        self.k.ok_or_else(|| CliError::Usage("--k is required".into()))
    }

    pub fn require_level(&self) -> Result<i64, CliError> {
        self.level
            .ok_or_else(|| CliError::Usage("--level is required".into()))
    }
}

fn read_config_file(path: &Path) -> Result<GlobalOpts, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let mut out = GlobalOpts::default();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |msg: &str| CliError::Usage(format!("{}:{}: {msg}", path.display(), n + 1));
        let (key, value) = line.split_once('=').ok_or_else(|| bad("expected key=value"))?;
        let value = value.trim();
        let num = |what: &str| bad(&format!("invalid {what} `{value}`"));
        match key.trim().replace('-', "_").as_str() {
            "type" | "lie_type" => out.lie_type = Some(parse_type(value).map_err(|e| bad(&e))?),
            "k" => out.k = Some(value.parse().map_err(|_| num("k"))?),
            "level" => out.level = Some(value.parse().map_err(|_| num("level"))?),
            "window" => out.window = Some(value.parse().map_err(|_| num("window"))?),
            "tolerance" => out.tolerance = Some(value.parse().map_err(|_| num("tolerance"))?),
            "seed" => out.seed = Some(value.parse().map_err(|_| num("seed"))?),
            "jobs" => out.jobs = Some(value.parse().map_err(|_| num("jobs"))?),
            "format" => {
                out.format = Some(
                    <Format as clap::ValueEnum>::from_str(value, true).map_err(|_| num("format"))?,
                )
            }
            "cache_dir" => out.cache_dir = Some(PathBuf::from(value)),
            other => return Err(bad(&format!("unknown key `{other}`"))),
        }
    }
    Ok(out)
}
