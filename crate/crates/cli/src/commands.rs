//! The `run`, `compare` and `oracle` subcommands.

use std::fmt;
use std::path::{Path, PathBuf};

use smc_mmle::oracles::{run_oracle, OracleCheck, OracleReport};

use crate::config::{ConfigError, ExperimentConfig};
use crate::experiment::{build_model, run_algorithm};
use crate::output::{write_comparison, write_run, ComparisonRow, SummaryContext};

#[derive(Debug)]
pub enum CliError {
    Config(ConfigError),
    Run(smc_mmle::Error),
    Io(std::io::Error),
    OracleFailed(OracleReport),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Config(e) => write!(f, "{e}"),
            Self::Run(e) => write!(f, "run failed: {e}"),
            Self::Io(e) => write!(f, "i/o error: {e}"),
            Self::OracleFailed(r) => write!(f, "{r}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        Self::Config(e)
    }
}

impl From<smc_mmle::Error> for CliError {
    fn from(e: smc_mmle::Error) -> Self {
        Self::Run(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e)
    }
}

impl CliError {
    /// 2 for unusable input, 1 for everything that failed while running.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => 2,
            Self::Run(smc_mmle::Error::UnknownCheck(_)) => 2,
            _ => 1,
        }
    }
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub reps: Option<usize>,
}

pub fn load_config(path: &Path, overrides: &Overrides) -> Result<ExperimentConfig, CliError> {
    let text = std::fs::read_to_string(path)?;
    let mut config = ExperimentConfig::parse(&text)?;
    if let Some(s) = overrides.seed {
        config.run.seed = s;
    }
    if let Some(o) = &overrides.out {
        config.run.out = o.clone();
    }
    if let Some(r) = overrides.reps {
        if r == 0 {
            return Err(ConfigError {
                line: 0,
                message: "--reps must be at least 1".into(),
            }
            .into());
        }
        config.run.reps = r;
    }
    Ok(config)
}

fn rep_dir(base: &Path, reps: usize, rep: usize) -> PathBuf {
    if reps == 1 {
        base.to_path_buf()
    } else {
        base.join(format!("rep-{rep:03}"))
    }
}

/// Runs every configured algorithm on the same data and seeds. Returns one
/// row per (algorithm, replication); replication `r` uses seed
/// `run.seed + r`. With `per_algorithm_dirs` each algorithm writes into
/// its own sub-directory named by its label.
fn execute(config: &ExperimentConfig, per_algorithm_dirs: bool) -> Result<Vec<ComparisonRow>, CliError> {
    let instance = build_model(&config.model)?;
    let echo = config.to_text();
    let mut rows = Vec::new();
    for algo in &config.algorithms {
        let base = if per_algorithm_dirs {
            config.run.out.join(&algo.label)
        } else {
            config.run.out.clone()
        };
        for rep in 0..config.run.reps {
            let seed = config.run.seed.wrapping_add(rep as u64);
            let outcome = run_algorithm(&instance, algo, seed)?;
            let ctx = SummaryContext {
                label: &algo.label,
                model: config.model.spec.name(),
                replication: rep,
                seed,
                config_echo: &echo,
            };
            write_run(&rep_dir(&base, config.run.reps, rep), &ctx, &outcome, config.run.timing)?;
            rows.push(ComparisonRow {
                algorithm: algo.label.clone(),
                replication: rep,
                seed,
                theta: outcome.trace.final_theta().to_vec(),
                mse: outcome.mse,
                ari: outcome.ari,
                iterations: outcome.trace.iterations(),
                runtime_seconds: outcome.runtime_seconds,
            });
        }
    }
    Ok(rows)
}

/// `run`: the single configured algorithm, outputs directly under `out`.
pub fn cmd_run(config: &ExperimentConfig) -> Result<Vec<ComparisonRow>, CliError> {
    if config.algorithms.len() != 1 {
        return Err(ConfigError {
            line: 0,
            message: format!(
                "`run` takes exactly one [algo] section, found {}; use `compare`",
                config.algorithms.len()
            ),
        }
        .into());
    }
    execute(config, false)
}

/// `compare`: every algorithm under `out/<label>`, plus `out/comparison.csv`.
pub fn cmd_compare(config: &ExperimentConfig) -> Result<Vec<ComparisonRow>, CliError> {
    let rows = execute(config, true)?;
    std::fs::create_dir_all(&config.run.out)?;
    write_comparison(&config.run.out.join("comparison.csv"), &rows)?;
    Ok(rows)
}

pub fn cmd_oracle(check: &str, seed: u64) -> Result<OracleReport, CliError> {
    let check: OracleCheck = check.parse()?;
    let report = run_oracle(check, seed)?;
    if report.passed {
        Ok(report)
    } else {
        Err(CliError::OracleFailed(report))
    }
}
