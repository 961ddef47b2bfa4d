//! Region maxima of `g1`, `g2`, `g3` compared with the bound table.

use serde::Serialize;
use ulambda_core::functionals::gen_zalcman_threshold;
use ulambda_core::optimizer::g1_regime_crossover;
use ulambda_core::{bound_for, maximize_with, FunctionalKind, Objective, Regime};

use crate::config::RunConfig;
use crate::error::Result;
use crate::formats::{opt_sig15, sig15, BoundJson, MaxResultJson};
use crate::report::csv_text;

/// Agreement required between `lambda * max g` and the bound.
pub const AGREEMENT_TOL: f64 = 1e-6;

/// Bisection width for the `g1` regime switch.
pub const CROSSOVER_TOL: f64 = 1e-5;

pub const THEOREM_SILENT: &str = "theorem silent";

/// The functional whose bound `lambda * max g` reproduces.
pub fn objective_kind(objective: Objective) -> FunctionalKind {
    match objective {
        Objective::G1 => FunctionalKind::Zalcman(3),
        Objective::G2 => FunctionalKind::GenZalcman(2, 4),
        Objective::G3 => FunctionalKind::Krushkal(5, 1),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MaximizeEntry {
    pub result: MaxResultJson,
    pub segment: String,
    pub at_corner: bool,
    pub grid_error_bound: f64,
    pub scaled_value: f64,
    pub bound: BoundJson,
    pub bound_regime: String,
    pub flag: Option<String>,
    pub error: Option<f64>,
    pub agrees: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MaximizeReport {
    pub function: String,
    pub kind: String,
    pub entries: Vec<MaximizeEntry>,
    /// `lambda` where the `g1` maximum leaves the corner, when the grid
    /// brackets it.
    pub crossover: Option<f64>,
    pub disagreements: usize,
}

impl MaximizeReport {
    pub fn passed(&self) -> bool {
        self.disagreements == 0
    }

    pub fn to_csv(&self) -> Result<String> {
        csv_text(
            &[
                "function",
                "lambda",
                "x",
                "y",
                "value",
                "scaled_value",
                "bound",
                "bound_regime",
                "segment",
                "at_corner",
                "flag",
                "agrees",
            ],
            self.entries.iter().map(|e| {
                vec![
                    e.result.function.clone(),
                    sig15(e.result.lambda),
                    sig15(e.result.argmax[0]),
                    sig15(e.result.argmax[1]),
                    sig15(e.result.value),
                    sig15(e.scaled_value),
                    sig15(e.bound.value),
                    e.bound_regime.clone(),
                    e.segment.clone(),
                    e.at_corner.to_string(),
                    e.flag.clone().unwrap_or_default(),
                    e.agrees.map(|a| a.to_string()).unwrap_or_default(),
                ]
            }),
        )
    }

    pub fn crossover_text(&self) -> String {
        opt_sig15(self.crossover)
    }
}

pub fn maximize(cfg: &RunConfig, objective: Objective) -> Result<MaximizeReport> {
    let kind = objective_kind(objective);
    let opts = cfg.optimizer_options();
    let mut entries = Vec::with_capacity(cfg.lambda_grid.len());
    let mut disagreements = 0;
    for &lambda in &cfg.lambda_grid {
        let r = maximize_with(objective, lambda, &opts);
        let bound = bound_for(kind, lambda)?;
        let scaled = lambda * r.value;
        let silent = objective == Objective::G2 && lambda < gen_zalcman_threshold();
        let (error, agrees) = if bound.regime == Regime::Silent {
            (None, None)
        } else {
            let error = (scaled - bound.value).abs();
            (Some(error), Some(error <= AGREEMENT_TOL))
        };
        if agrees == Some(false) {
            disagreements += 1;
        }
        entries.push(MaximizeEntry {
            result: MaxResultJson::from(&r),
            segment: r.segment.as_str().to_string(),
            at_corner: r.at_corner(),
            grid_error_bound: r.grid_error_bound,
            scaled_value: scaled,
            bound: BoundJson::from(&bound),
            bound_regime: bound.regime.as_str().to_string(),
            flag: silent.then(|| THEOREM_SILENT.to_string()),
            error,
            agrees,
        });
    }
    let crossover = if objective == Objective::G1 {
        locate_crossover(&entries, &opts)
    } else {
        None
    };
    Ok(MaximizeReport {
        function: objective.as_str().to_string(),
        kind: kind.to_string(),
        entries,
        crossover,
        disagreements,
    })
}

/// Bisects between the first pair of grid points (in increasing `lambda`)
/// whose maximizers switch from off-corner to the corner.
fn locate_crossover(
    entries: &[MaximizeEntry],
    opts: &ulambda_core::MaximizeOptions,
) -> Option<f64> {
    let mut points: Vec<(f64, bool)> = entries
        .iter()
        .map(|e| (e.result.lambda, e.at_corner))
        .collect();
    points.sort_by(|a, b| a.0.total_cmp(&b.0));
    points
        .windows(2)
        .find(|w| !w[0].1 && w[1].1)
        .map(|w| g1_regime_crossover(w[0].0, w[1].0, CROSSOVER_TOL, opts))
}
