use serde::Serialize;
use ulambda_core::check_monotonicity_claims;

use crate::config::RunConfig;
use crate::error::Result;
use crate::formats::sig15;
use crate::report::csv_text;

#[derive(Debug, Clone, Serialize)]
pub struct ClaimJson {
    pub claim: String,
    pub applies: bool,
    pub min_value: f64,
    pub max_value: f64,
    pub holds: bool,
    pub sign_change: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct LambdaClaims {
    pub lambda: f64,
    pub all_hold: bool,
    pub claims: Vec<ClaimJson>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MonotonicityReport {
    pub lambdas: Vec<LambdaClaims>,
    /// Claims that apply but fail, as `(lambda, claim)`.
    pub failures: Vec<(f64, String)>,
}

impl MonotonicityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_csv(&self) -> Result<String> {
        csv_text(
            &[
                "lambda",
                "claim",
                "applies",
                "min",
                "max",
                "holds",
                "sign_change",
            ],
            self.lambdas.iter().flat_map(|l| {
                l.claims.iter().map(move |c| {
                    vec![
                        sig15(l.lambda),
                        c.claim.clone(),
                        c.applies.to_string(),
                        sig15(c.min_value),
                        sig15(c.max_value),
                        c.holds.to_string(),
                        c.sign_change.to_string(),
                    ]
                })
            }),
        )
    }
}

pub fn monotonicity(cfg: &RunConfig) -> MonotonicityReport {
    let mut failures = Vec::new();
    let lambdas = cfg
        .lambda_grid
        .iter()
        .map(|&lambda| {
            let r = check_monotonicity_claims(lambda);
            for c in r.claims.iter().filter(|c| c.applies && !c.holds) {
                failures.push((lambda, c.claim.to_string()));
            }
            LambdaClaims {
                lambda,
                all_hold: r.all_hold(),
                claims: r
                    .claims
                    .iter()
                    .map(|c| ClaimJson {
                        claim: c.claim.to_string(),
                        applies: c.applies,
                        min_value: c.min_value,
                        max_value: c.max_value,
                        holds: c.holds,
                        sign_change: c.sign_change(),
                    })
                    .collect(),
            }
        })
        .collect();
    MonotonicityReport { lambdas, failures }
}
