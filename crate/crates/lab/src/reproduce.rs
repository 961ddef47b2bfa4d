//! Every check in one run: sharpness, random search, the three region
//! maxima and the monotonicity claims, written as `report.json` and the
//! bound table `bounds.csv`.

use std::path::PathBuf;

use serde::Serialize;
use ulambda_core::Objective;

use crate::config::RunConfig;
use crate::error::Result;
use crate::formats::{opt_sig15, sig15};
use crate::maximize::{maximize, MaximizeReport};
use crate::monotonicity::{monotonicity, MonotonicityReport};
use crate::report::{csv_text, write_file, Report};
use crate::search::{random_search, SearchReport};
use crate::sharpness::{verify_sharpness, SharpnessReport};

pub const REPORT_FILE: &str = "report.json";
pub const BOUND_TABLE_FILE: &str = "bounds.csv";
pub const BOUND_TABLE_COLUMNS: [&str; 7] = [
    "kind",
    "lambda",
    "bound",
    "observed_max",
    "sharp",
    "witness",
    "regime",
];

#[derive(Debug, Clone, Serialize)]
pub struct Outcome {
    pub sharpness_failures: usize,
    pub unconditional_violations: usize,
    pub conditional_violations: usize,
    pub maximize_disagreements: usize,
    pub monotonicity_failures: usize,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReproduceReport {
    pub outcome: Outcome,
    pub sharpness: SharpnessReport,
    pub search: SearchReport,
    pub maximize: Vec<MaximizeReport>,
    pub monotonicity: MonotonicityReport,
}

impl ReproduceReport {
    /// One row per `(lambda, kind)` of the search, with the largest value
    /// observed where the bound was tested.
    pub fn bound_table(&self) -> Result<String> {
        let rows = self.search.lambdas.iter().flat_map(|l| {
            l.functionals.iter().map(move |f| {
                vec![
                    f.kind.clone(),
                    sig15(l.lambda),
                    sig15(f.bound),
                    opt_sig15(f.observed_max_checked.or(Some(f.observed_max))),
                    f.sharp.to_string(),
                    f.witness.clone().unwrap_or_default(),
                    f.regime.clone(),
                ]
            })
        });
        csv_text(&BOUND_TABLE_COLUMNS, rows)
    }
}

pub fn reproduce_all(cfg: &RunConfig) -> Result<ReproduceReport> {
    let sharpness = verify_sharpness(cfg)?;
    let search = random_search(cfg)?;
    let maximize = Objective::ALL
        .iter()
        .map(|&o| maximize(cfg, o))
        .collect::<Result<Vec<_>>>()?;
    let monotonicity = monotonicity(cfg);
    let outcome = Outcome {
        sharpness_failures: sharpness.failures.len(),
        unconditional_violations: search.summary.unconditional_violations,
        conditional_violations: search.summary.conditional_violations,
        maximize_disagreements: maximize.iter().map(|m| m.disagreements).sum(),
        monotonicity_failures: monotonicity.failures.len(),
        passed: false,
    };
    let passed = outcome.sharpness_failures
        + outcome.unconditional_violations
        + outcome.conditional_violations
        + outcome.maximize_disagreements
        + outcome.monotonicity_failures
        == 0;
    Ok(ReproduceReport {
        outcome: Outcome { passed, ..outcome },
        sharpness,
        search,
        maximize,
        monotonicity,
    })
}

/// Writes `report.json` and `bounds.csv` into the output directory.
pub fn write_outputs(cfg: &RunConfig, report: &ReproduceReport) -> Result<[PathBuf; 2]> {
    let dir = cfg.out_dir();
    let json_path = dir.join(REPORT_FILE);
    let csv_path = dir.join(BOUND_TABLE_FILE);
    write_file(
        &json_path,
        &Report::new("reproduce-all", cfg, report).to_json()?,
    )?;
    write_file(&csv_path, &report.bound_table()?)?;
    Ok([json_path, csv_path])
}
