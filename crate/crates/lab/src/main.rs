use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use ulambda_core::Objective;
use ulambda_lab::config::{self, Format, Overrides, RunConfig};
use ulambda_lab::report::{write_file, Report};
use ulambda_lab::reproduce::{reproduce_all, write_outputs, BOUND_TABLE_FILE, REPORT_FILE};
use ulambda_lab::{golden, maximize, monotonicity, search, sharpness, LabError, Result};

/// Numerical checks of coefficient bounds for the class U(lambda).
#[derive(Debug, Parser)]
#[command(name = "ulambda", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
struct Common {
    /// Config file of `key = value` lines; flags override it.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Comma list or inclusive start:stop:step range.
    #[arg(long, value_name = "GRID")]
    lambda_grid: Option<String>,
    /// Random members per lambda.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Truncation order of the power series.
    #[arg(long)]
    order: Option<usize>,
    /// Output file (single commands) or directory (`reproduce-all`).
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, value_parser = ["json", "csv"])]
    format: Option<String>,
}

impl Common {
    fn load(&self) -> Result<RunConfig> {
        let overrides = Overrides {
            lambda_grid: self.lambda_grid.clone(),
            samples: self.samples,
            seed: self.seed,
            order: self.order,
            out: self.out.clone(),
            format: self.format.as_deref().map(str::parse).transpose()?,
        };
        config::load(self.config.as_deref(), &overrides)
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Which {
    G1,
    G2,
    G3,
}

impl From<Which> for Objective {
    fn from(w: Which) -> Self {
        match w {
            Which::G1 => Objective::G1,
            Which::G2 => Objective::G2,
            Which::G3 => Objective::G3,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate every sharp bound on its extremal function.
    VerifySharpness(Common),
    /// Sample members and test them against all bounds.
    RandomSearch(Common),
    /// Maximize g1, g2 or g3 over the region and compare with the bounds.
    Maximize {
        #[arg(long, value_enum)]
        which: Which,
        #[command(flatten)]
        common: Common,
    },
    /// Sample the sign of the monotonicity claims.
    Monotonicity(Common),
    /// Run everything and write report.json and bounds.csv.
    ReproduceAll {
        /// Directory with golden report.json and bounds.csv to diff against.
        #[arg(long, value_name = "DIR")]
        golden: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

/// Writes the report to `--out` or stdout in the configured format.
fn emit<T: Serialize>(
    command: &str,
    cfg: &RunConfig,
    body: &T,
    csv: impl FnOnce(&T) -> Result<String>,
) -> Result<()> {
    let text = match cfg.format {
        Format::Json => Report::new(command, cfg, body).to_json()?,
        Format::Csv => csv(body)?,
    };
    match &cfg.out {
        Some(path) => write_file(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::VerifySharpness(common) => {
            let cfg = common.load()?;
            let r = sharpness::verify_sharpness(&cfg)?;
            emit("verify-sharpness", &cfg, &r, |r| r.to_csv())?;
            eprintln!(
                "verify-sharpness: {} checks, {} failures",
                r.entries.len(),
                r.failures.len()
            );
            if let Some(f) = r.failures.first() {
                return Err(LabError::Verification(format!(
                    "{} at lambda {}: value {} bound {}",
                    f.kind, f.lambda, f.value, f.bound
                )));
            }
        }
        Command::RandomSearch(common) => {
            let cfg = common.load()?;
            let r = search::random_search(&cfg)?;
            emit("random-search", &cfg, &r, |r| r.to_csv())?;
            eprintln!(
                "random-search: {} samples, {} accepted, {} unconditional and {} conditional violations",
                r.summary.samples,
                r.summary.accepted,
                r.summary.unconditional_violations,
                r.summary.conditional_violations
            );
        }
        Command::Maximize { which, common } => {
            let cfg = common.load()?;
            let r = maximize::maximize(&cfg, which.into())?;
            emit("maximize", &cfg, &r, |r| r.to_csv())?;
            if let Some(c) = r.crossover {
                eprintln!(
                    "maximize {}: corner regime from lambda = {c:.6}",
                    r.function
                );
            }
            if !r.passed() {
                return Err(LabError::Verification(format!(
                    "{} of {} maxima disagree with the bound",
                    r.disagreements,
                    r.entries.len()
                )));
            }
        }
        Command::Monotonicity(common) => {
            let cfg = common.load()?;
            let r = monotonicity::monotonicity(&cfg);
            emit("monotonicity", &cfg, &r, |r| r.to_csv())?;
            if let Some((lambda, claim)) = r.failures.first() {
                return Err(LabError::Verification(format!(
                    "{claim} fails at lambda {lambda}"
                )));
            }
        }
        Command::ReproduceAll { golden, common } => {
            let cfg = common.load()?;
            let r = reproduce_all(&cfg)?;
            let [json, csv] = write_outputs(&cfg, &r)?;
            eprintln!("wrote {} and {}", json.display(), csv.display());
            if let Some(dir) = golden {
                let diffs =
                    golden::diff_dirs(&dir, &cfg.out_dir(), &[REPORT_FILE, BOUND_TABLE_FILE])?;
                for d in &diffs {
                    eprintln!("diff {d}");
                }
                if !diffs.is_empty() {
                    return Err(LabError::Verification(format!(
                        "{} differences from {}",
                        diffs.len(),
                        dir.display()
                    )));
                }
            }
            if !r.outcome.passed {
                return Err(LabError::Verification(format!("{:?}", r.outcome)));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
