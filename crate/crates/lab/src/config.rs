//! Run configuration: defaults, a flat `key = value` file and command-line
//! overrides, in that order of precedence (flags win).
//!
//! The file accepts TOML scalars and arrays as well as bare words, so both
//!
//! ```text
//! lambda_grid = [0.25, 0.5, 1.0]
//! lambda_grid = 0.1:1.0:0.1
//! ```
//!
//! are valid. Grids are either comma lists or inclusive `start:stop:step`
//! ranges.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use ulambda_core::MembershipGrid;

use crate::error::{LabError, Result};

pub const DEFAULT_SEED: u64 = 20_240_917;
pub const DEFAULT_SAMPLES: usize = 10_000;
pub const DEFAULT_ORDER: usize = ulambda_core::series::DEFAULT_ORDER;
pub const DEFAULT_NEAR_EXTREMAL: f64 = 0.1;
pub const DEFAULT_OPTIMIZER_TOL: f64 = 1e-9;
pub const DEFAULT_OUT: &str = "ulambda-out";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(LabError::Config(format!("unknown format {other:?}"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Csv => "csv",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub lambda_grid: Vec<f64>,
    pub samples_per_lambda: usize,
    pub seed: u64,
    pub truncation_order: usize,
    pub psi_degree: usize,
    pub near_extremal_fraction: f64,
    pub membership_radii: Vec<f64>,
    pub membership_angles: usize,
    pub optimizer_grid: usize,
    pub optimizer_tol: f64,
    /// Output file for single commands, output directory for `reproduce-all`.
    /// Not part of the emitted config, so reports do not depend on it.
    #[serde(skip)]
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        let grid = MembershipGrid::default();
        RunConfig {
            lambda_grid: default_lambda_grid(),
            samples_per_lambda: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
            truncation_order: DEFAULT_ORDER,
            psi_degree: ulambda_core::schwarz::DEFAULT_PSI_DEGREE,
            near_extremal_fraction: DEFAULT_NEAR_EXTREMAL,
            membership_radii: grid.radii,
            membership_angles: grid.angles,
            optimizer_grid: ulambda_core::optimizer::DEFAULT_GRID,
            optimizer_tol: DEFAULT_OPTIMIZER_TOL,
            out: None,
            format: Format::Json,
        }
    }
}

/// `0.1, 0.2, ..., 1.0`.
pub fn default_lambda_grid() -> Vec<f64> {
    (1..=10).map(|k| k as f64 / 10.0).collect()
}

impl RunConfig {
    pub fn out_dir(&self) -> PathBuf {
        self.out
            .clone()
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT))
    }

    pub fn membership_grid(&self) -> MembershipGrid {
        MembershipGrid {
            radii: self.membership_radii.clone(),
            angles: self.membership_angles,
        }
    }

    pub fn optimizer_options(&self) -> ulambda_core::MaximizeOptions {
        ulambda_core::MaximizeOptions {
            grid: self.optimizer_grid,
            tol: self.optimizer_tol,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.lambda_grid.is_empty() {
            return Err(LabError::Config("lambda grid is empty".into()));
        }
        if let Some(bad) = self.lambda_grid.iter().find(|l| !(**l > 0.0 && **l <= 1.0)) {
            return Err(LabError::Config(format!("lambda {bad} is outside (0, 1]")));
        }
        if self.samples_per_lambda < 1 {
            return Err(LabError::Config("samples must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.near_extremal_fraction) {
            return Err(LabError::Config(format!(
                "near_extremal_fraction {} is outside [0, 1]",
                self.near_extremal_fraction
            )));
        }
        if self.membership_radii.is_empty()
            || self
                .membership_radii
                .iter()
                .any(|r| !(*r > 0.0 && *r < 1.0))
        {
            return Err(LabError::Config(
                "membership radii must be non-empty and inside (0, 1)".into(),
            ));
        }
        if self.membership_angles < 8 {
            return Err(LabError::Config(
                "membership_angles must be at least 8".into(),
            ));
        }
        if self.optimizer_grid < 3 {
            return Err(LabError::Config("optimizer_grid must be at least 3".into()));
        }
        if self.optimizer_tol.is_nan() || self.optimizer_tol <= 0.0 {
            return Err(LabError::Config("optimizer_tol must be positive".into()));
        }
        if self.psi_degree > 16 {
            return Err(LabError::Config("psi_degree must be at most 16".into()));
        }
        Ok(())
    }
}

/// Parses `a,b,c` or `start:stop:step` (inclusive).
pub fn parse_lambda_grid(text: &str) -> Result<Vec<f64>> {
    let text = text.trim();
    if text.is_empty() {
        return Err(LabError::Config("lambda grid is empty".into()));
    }
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        let [start, stop, step] = parts.as_slice() else {
            return Err(LabError::Config(format!(
                "range {text:?} must look like start:stop:step"
            )));
        };
        let (start, stop, step) = (parse_f64(start)?, parse_f64(stop)?, parse_f64(step)?);
        if step.is_nan() || step <= 0.0 || stop < start {
            return Err(LabError::Config(format!("range {text:?} is empty")));
        }
        let n = ((stop - start) / step + 1e-9).floor() as usize;
        return Ok((0..=n).map(|k| round12(start + k as f64 * step)).collect());
    }
    text.split(',').map(parse_f64).collect()
}

fn round12(x: f64) -> f64 {
    (x * 1e12).round() / 1e12
}

fn parse_f64(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| LabError::Config(format!("not a number: {:?}", s.trim())))
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum GridSpec {
    One(f64),
    List(Vec<f64>),
    Text(String),
}

impl GridSpec {
    fn values(self) -> Result<Vec<f64>> {
        match self {
            GridSpec::One(x) => Ok(vec![x]),
            GridSpec::List(v) => Ok(v),
            GridSpec::Text(s) => parse_lambda_grid(&s),
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    lambda_grid: Option<GridSpec>,
    #[serde(alias = "samples")]
    samples_per_lambda: Option<usize>,
    seed: Option<u64>,
    #[serde(alias = "order")]
    truncation_order: Option<usize>,
    psi_degree: Option<usize>,
    near_extremal_fraction: Option<f64>,
    membership_radii: Option<GridSpec>,
    membership_angles: Option<usize>,
    optimizer_grid: Option<usize>,
    optimizer_tol: Option<f64>,
    out: Option<PathBuf>,
    format: Option<String>,
}

/// Reads a flat config file into a TOML table; bare values that are not
/// TOML literals become strings.
fn read_table(text: &str) -> Result<toml::Table> {
    let mut table = toml::Table::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(LabError::Config(format!(
                "line {}: expected key = value, got {line:?}",
                lineno + 1
            )));
        };
        let key = key.trim().trim_matches('"').to_string();
        let value = value.trim();
        let parsed = toml::from_str::<toml::Table>(&format!("v = {value}"))
            .ok()
            .and_then(|mut t| t.remove("v"))
            .unwrap_or_else(|| toml::Value::String(value.to_string()));
        if table.insert(key.clone(), parsed).is_some() {
            return Err(LabError::Config(format!(
                "line {}: duplicate key {key:?}",
                lineno + 1
            )));
        }
    }
    Ok(table)
}

fn strip_comment(line: &str) -> &str {
    let mut in_string = false;
    for (i, ch) in line.char_indices() {
        match ch {
            '"' => in_string = !in_string,
            '#' if !in_string => return &line[..i],
            _ => {}
        }
    }
    line
}

/// Command-line overrides; `None` keeps the file or default value.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub lambda_grid: Option<String>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub order: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

pub fn parse_config_text(text: &str) -> Result<RunConfig> {
    let table = read_table(text)?;
    let file: FileConfig = table
        .try_into()
        .map_err(|e: toml::de::Error| LabError::Config(e.message().to_string()))?;
    let mut cfg = RunConfig::default();
    if let Some(grid) = file.lambda_grid {
        cfg.lambda_grid = grid.values()?;
    }
    if let Some(radii) = file.membership_radii {
        cfg.membership_radii = radii.values()?;
    }
    macro_rules! take {
        ($($field:ident),*) => {
            $(if let Some(v) = file.$field { cfg.$field = v; })*
        };
    }
    take!(
        samples_per_lambda,
        seed,
        truncation_order,
        psi_degree,
        near_extremal_fraction,
        membership_angles,
        optimizer_grid,
        optimizer_tol
    );
    if let Some(out) = file.out {
        cfg.out = Some(out);
    }
    if let Some(format) = file.format {
        cfg.format = format.parse()?;
    }
    Ok(cfg)
}

/// Defaults, then the optional file, then the flags.
pub fn load(path: Option<&Path>, overrides: &Overrides) -> Result<RunConfig> {
    let mut cfg = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| LabError::Config(format!("{}: {e}", p.display())))?;
            parse_config_text(&text)?
        }
        None => RunConfig::default(),
    };
    if let Some(grid) = &overrides.lambda_grid {
        cfg.lambda_grid = parse_lambda_grid(grid)?;
    }
    if let Some(v) = overrides.samples {
        cfg.samples_per_lambda = v;
    }
    if let Some(v) = overrides.seed {
        cfg.seed = v;
    }
    if let Some(v) = overrides.order {
        cfg.truncation_order = v;
    }
    if let Some(v) = &overrides.out {
        cfg.out = Some(v.clone());
    }
    if let Some(v) = overrides.format {
        cfg.format = v;
    }
    cfg.validate()?;
    Ok(cfg)
}
