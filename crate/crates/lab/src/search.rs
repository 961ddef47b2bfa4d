//! Randomized soundness sweep over generated members.
//!
//! Every lambda index `i` owns the ChaCha8 stream `i` of the master seed, so
//! sample `j` at that lambda is reproducible from `(seed, i, j)` alone. Draws
//! are uniform in `a_2` over the disk `|a_2| <= 1 + lambda` with a random
//! `psi` of sup norm at most one, except for a fraction taken near the two
//! witness families:
//!
//! * `f_lambda`: `a_2 = (1 + lambda - eps) e^{i phi}`,
//!   `psi = -(1 - eps) e^{2 i phi} + eps q`,
//! * `hankel3`: `|a_2| <= eps (1 + lambda)`, `psi = (1 - eps) e^{i theta} z + eps q`,
//!
//! with `eps` uniform in `[0, 0.1]` and `q` a random `psi` of sup norm one.

use std::f64::consts::TAU;

use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use ulambda_core::{
    bound_for, build_member_with, make_schwarz, sample_psi, verify_member_against_bounds,
    Complex64, Error as CoreError, FunctionalKind, Member, MembershipGrid, SchwarzFn, Verdict,
};

use crate::config::RunConfig;
use crate::error::{LabError, Result};
use crate::formats::{opt_sig15, sig15, MemberJson};
use crate::report::csv_text;

/// Width of the `eps` window around the witness families.
pub const NEAR_EXTREMAL_EPS: f64 = 0.1;

/// Violations listed per lambda; the count covers all of them.
pub const MAX_LISTED_VIOLATIONS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DrawKind {
    Uniform,
    NearFLambda,
    NearHankel3,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Rejections {
    pub denominator: usize,
    pub membership: usize,
    pub schwarz: usize,
}

impl Rejections {
    pub fn total(&self) -> usize {
        self.denominator + self.membership + self.schwarz
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SampleRef {
    pub sample: usize,
    pub hash: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct FunctionalSummary {
    pub kind: String,
    pub bound: f64,
    pub regime: String,
    pub sharp: bool,
    pub witness: Option<String>,
    pub valid_iff: String,
    /// Members on which the bound was tested.
    pub checked: usize,
    /// Members skipped because they fail the a3-condition.
    pub conditional_skipped: usize,
    /// Largest value over all accepted members.
    pub observed_max: f64,
    /// Largest value over the members on which the bound was tested.
    pub observed_max_checked: Option<f64>,
    pub argmax: Option<SampleRef>,
    pub gap: Option<f64>,
    pub violations: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub kind: String,
    pub sample: usize,
    pub hash: String,
    pub value: f64,
    pub bound: f64,
    pub excess: f64,
    pub a3_condition: bool,
    pub unconditional: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CitedMember {
    pub sample: usize,
    pub draw: DrawKind,
    pub hash: String,
    pub member: MemberJson,
}

#[derive(Debug, Clone, Serialize)]
pub struct LambdaSearch {
    pub lambda: f64,
    pub stream_id: u64,
    pub samples: usize,
    pub accepted: usize,
    pub near_extremal_draws: usize,
    pub rejections: Rejections,
    pub a3_condition_failures: usize,
    pub functionals: Vec<FunctionalSummary>,
    pub violation_count: usize,
    pub violations: Vec<Violation>,
    pub members: Vec<CitedMember>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchSummary {
    pub samples: usize,
    pub accepted: usize,
    pub rejected: usize,
    pub unconditional_violations: usize,
    pub conditional_violations: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchReport {
    pub seed: u64,
    pub samples_per_lambda: usize,
    pub near_extremal_fraction: f64,
    pub lambdas: Vec<LambdaSearch>,
    pub summary: SearchSummary,
}

impl SearchReport {
    pub fn violation_count(&self) -> usize {
        self.summary.unconditional_violations + self.summary.conditional_violations
    }

    pub fn to_csv(&self) -> Result<String> {
        let header = [
            "lambda",
            "kind",
            "bound",
            "regime",
            "sharp",
            "observed_max",
            "observed_max_checked",
            "gap",
            "checked",
            "conditional_skipped",
            "violations",
            "argmax_hash",
        ];
        let rows = self.lambdas.iter().flat_map(|l| {
            l.functionals.iter().map(move |f| {
                vec![
                    sig15(l.lambda),
                    f.kind.clone(),
                    sig15(f.bound),
                    f.regime.clone(),
                    f.sharp.to_string(),
                    sig15(f.observed_max),
                    opt_sig15(f.observed_max_checked),
                    opt_sig15(f.gap),
                    f.checked.to_string(),
                    f.conditional_skipped.to_string(),
                    f.violations.to_string(),
                    f.argmax
                        .as_ref()
                        .map(|a| a.hash.clone())
                        .unwrap_or_default(),
                ]
            })
        });
        csv_text(&header, rows)
    }
}

/// The generator for lambda index `stream_id`.
pub fn stream_rng(seed: u64, stream_id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream_id);
    rng
}

/// One sampled parameter set; `None` for `w` when the perturbed `psi` fails
/// certification.
pub struct Draw {
    pub kind: DrawKind,
    pub a2: Complex64,
    pub w: Option<SchwarzFn>,
}

pub fn draw<R: Rng + ?Sized>(rng: &mut R, lambda: f64, cfg: &RunConfig) -> Draw {
    if rng.random::<f64>() < cfg.near_extremal_fraction {
        let eps = NEAR_EXTREMAL_EPS * rng.random::<f64>();
        let phi = TAU * rng.random::<f64>();
        let q = sample_psi(rng, cfg.psi_degree, 1.0);
        let mut psi: Vec<Complex64> = q.psi_coeffs().iter().map(|c| c * eps).collect();
        psi.resize(psi.len().max(2), Complex64::new(0.0, 0.0));
        if rng.random::<bool>() {
            psi[0] -= Complex64::from_polar(1.0 - eps, 2.0 * phi);
            Draw {
                kind: DrawKind::NearFLambda,
                a2: Complex64::from_polar(1.0 + lambda - eps, phi),
                w: make_schwarz(&psi).ok(),
            }
        } else {
            let theta = TAU * rng.random::<f64>();
            psi[1] += Complex64::from_polar(1.0 - eps, theta);
            let r = eps * (1.0 + lambda) * rng.random::<f64>();
            Draw {
                kind: DrawKind::NearHankel3,
                a2: Complex64::from_polar(r, phi),
                w: make_schwarz(&psi).ok(),
            }
        }
    } else {
        let r = (1.0 + lambda) * rng.random::<f64>().sqrt();
        let phi = TAU * rng.random::<f64>();
        let scale = rng.random::<f64>().sqrt();
        Draw {
            kind: DrawKind::Uniform,
            a2: Complex64::from_polar(r, phi),
            w: Some(sample_psi(rng, cfg.psi_degree, scale)),
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Reject {
    Denominator,
    Membership,
    Schwarz,
}

impl Rejections {
    fn count(&mut self, reason: Reject) {
        match reason {
            Reject::Denominator => self.denominator += 1,
            Reject::Membership => self.membership += 1,
            Reject::Schwarz => self.schwarz += 1,
        }
    }
}

enum Outcome {
    Accepted(Box<Member>),
    Rejected(Reject),
}

fn build(lambda: f64, d: Draw, cfg: &RunConfig, grid: &MembershipGrid) -> Result<Outcome> {
    let Some(w) = d.w else {
        return Ok(Outcome::Rejected(Reject::Schwarz));
    };
    match build_member_with(lambda, d.a2, w, cfg.truncation_order, grid) {
        Ok(m) => Ok(Outcome::Accepted(Box::new(m))),
        Err(CoreError::DenominatorVanishes { .. }) => Ok(Outcome::Rejected(Reject::Denominator)),
        Err(CoreError::MembershipFailed { .. } | CoreError::ZeroConstantTerm { .. }) => {
            Ok(Outcome::Rejected(Reject::Membership))
        }
        Err(e) => Err(e.into()),
    }
}

/// Regenerates sample `sample` of stream `stream_id`.
pub fn replay_sample(
    cfg: &RunConfig,
    stream_id: u64,
    lambda: f64,
    sample: usize,
) -> Result<(DrawKind, Option<Member>)> {
    let mut rng = stream_rng(cfg.seed, stream_id);
    for _ in 0..sample {
        draw(&mut rng, lambda, cfg);
    }
    let d = draw(&mut rng, lambda, cfg);
    let kind = d.kind;
    match build(lambda, d, cfg, &cfg.membership_grid())? {
        Outcome::Accepted(m) => Ok((kind, Some(*m))),
        Outcome::Rejected(_) => Ok((kind, None)),
    }
}

struct Tracker {
    kind: FunctionalKind,
    checked: usize,
    skipped: usize,
    max_all: f64,
    max_checked: Option<f64>,
    argmax: Option<(usize, f64)>,
    violations: usize,
}

pub fn search_lambda(cfg: &RunConfig, stream_id: u64, lambda: f64) -> Result<LambdaSearch> {
    let grid = cfg.membership_grid();
    let mut rng = stream_rng(cfg.seed, stream_id);
    let mut rejections = Rejections::default();
    let mut trackers: Vec<Tracker> = FunctionalKind::SUPPORTED
        .iter()
        .map(|&kind| Tracker {
            kind,
            checked: 0,
            skipped: 0,
            max_all: 0.0,
            max_checked: None,
            argmax: None,
            violations: 0,
        })
        .collect();
    let mut cited: Vec<CitedMember> = Vec::new();
    let mut violations = Vec::new();
    let mut violation_count = 0;
    let mut accepted = 0;
    let mut near = 0;
    let mut a3_failures = 0;

    let cite = |sample: usize, draw: DrawKind, m: &Member, cited: &mut Vec<CitedMember>| {
        if let Some(c) = cited.iter().find(|c| c.sample == sample) {
            return c.hash.clone();
        }
        let member = MemberJson::from_member(m);
        let hash = member.content_hash();
        cited.push(CitedMember {
            sample,
            draw,
            hash: hash.clone(),
            member,
        });
        hash
    };

    let mut best: Vec<Option<(usize, DrawKind, Box<Member>)>> = vec![None; trackers.len()];
    for sample in 0..cfg.samples_per_lambda {
        let d = draw(&mut rng, lambda, cfg);
        let draw_kind = d.kind;
        if draw_kind != DrawKind::Uniform {
            near += 1;
        }
        let m = match build(lambda, d, cfg, &grid)? {
            Outcome::Accepted(m) => m,
            Outcome::Rejected(reason) => {
                rejections.count(reason);
                continue;
            }
        };
        accepted += 1;
        let checks = verify_member_against_bounds(&m);
        let a3_ok = ulambda_core::class::a3_condition_holds(&m);
        if !a3_ok {
            a3_failures += 1;
        }
        for ((t, check), best) in trackers.iter_mut().zip(&checks).zip(best.iter_mut()) {
            t.max_all = t.max_all.max(check.value);
            let counts = match check.verdict {
                Verdict::ConditionalSkipped => {
                    t.skipped += 1;
                    false
                }
                Verdict::NotApplicable => true,
                Verdict::Holds | Verdict::Violated => {
                    t.checked += 1;
                    t.max_checked = Some(t.max_checked.map_or(check.value, |v| v.max(check.value)));
                    true
                }
            };
            if counts && t.argmax.is_none_or(|(_, v)| check.value > v) {
                t.argmax = Some((sample, check.value));
                *best = Some((sample, draw_kind, m.clone()));
            }
            if check.verdict == Verdict::Violated {
                t.violations += 1;
                violation_count += 1;
                if violations.len() < MAX_LISTED_VIOLATIONS {
                    let hash = cite(sample, draw_kind, &m, &mut cited);
                    violations.push(Violation {
                        kind: t.kind.to_string(),
                        sample,
                        hash,
                        value: check.value,
                        bound: check.bound.value,
                        excess: check.value - check.bound.value,
                        a3_condition: a3_ok,
                        unconditional: check.bound.valid_iff.is_unconditional(),
                    });
                }
            }
        }
    }

    let mut functionals = Vec::with_capacity(trackers.len());
    for (t, best) in trackers.iter().zip(best) {
        let bound = bound_for(t.kind, lambda)?;
        let argmax = best.map(|(sample, draw_kind, m)| SampleRef {
            sample,
            hash: cite(sample, draw_kind, &m, &mut cited),
        });
        functionals.push(FunctionalSummary {
            kind: t.kind.to_string(),
            bound: bound.value,
            regime: bound.regime.as_str().to_string(),
            sharp: bound.sharp,
            witness: bound.witness.map(|w| w.as_str().to_string()),
            valid_iff: bound.valid_iff.to_string(),
            checked: t.checked,
            conditional_skipped: t.skipped,
            observed_max: t.max_all,
            observed_max_checked: t.max_checked,
            argmax,
            gap: t.max_checked.map(|v| bound.value - v),
            violations: t.violations,
        });
    }
    cited.sort_by_key(|c| c.sample);

    Ok(LambdaSearch {
        lambda,
        stream_id,
        samples: cfg.samples_per_lambda,
        accepted,
        near_extremal_draws: near,
        rejections,
        a3_condition_failures: a3_failures,
        functionals,
        violation_count,
        violations,
        members: cited,
    })
}

pub fn random_search(cfg: &RunConfig) -> Result<SearchReport> {
    let lambdas: Vec<LambdaSearch> = cfg
        .lambda_grid
        .par_iter()
        .enumerate()
        .map(|(i, &lambda)| search_lambda(cfg, i as u64, lambda))
        .collect::<Result<_>>()?;
    let mut summary = SearchSummary {
        samples: 0,
        accepted: 0,
        rejected: 0,
        unconditional_violations: 0,
        conditional_violations: 0,
    };
    for l in &lambdas {
        summary.samples += l.samples;
        summary.accepted += l.accepted;
        summary.rejected += l.rejections.total();
        for f in &l.functionals {
            if f.valid_iff == "unconditional" {
                summary.unconditional_violations += f.violations;
            } else {
                summary.conditional_violations += f.violations;
            }
        }
    }
    Ok(SearchReport {
        seed: cfg.seed,
        samples_per_lambda: cfg.samples_per_lambda,
        near_extremal_fraction: cfg.near_extremal_fraction,
        lambdas,
        summary,
    })
}

/// Rebuilds every cited member and checks its hash and functional values.
pub fn recheck_cited(report: &SearchReport, tol: f64) -> Result<usize> {
    let mut n = 0;
    for l in &report.lambdas {
        for c in &l.members {
            if c.member.content_hash() != c.hash {
                return Err(LabError::Verification(format!(
                    "hash mismatch for sample {} at lambda {}",
                    c.sample, l.lambda
                )));
            }
            let m = c.member.rebuild()?;
            for f in &l.functionals {
                let Some(arg) = &f.argmax else { continue };
                if arg.hash != c.hash {
                    continue;
                }
                let kind = FunctionalKind::parse(&f.kind).expect("reported kinds parse");
                let value = ulambda_core::eval_functional(kind, &m)?;
                let expected = f.observed_max_checked.unwrap_or(f.observed_max);
                if (value - expected).abs() > tol {
                    return Err(LabError::Verification(format!(
                        "{} at lambda {}: rebuilt {value}, reported {expected}",
                        f.kind, l.lambda
                    )));
                }
            }
            n += 1;
        }
    }
    Ok(n)
}
