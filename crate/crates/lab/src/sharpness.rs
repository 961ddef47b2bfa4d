//! Sharp bounds evaluated on their witnesses.

use serde::Serialize;
use ulambda_core::{
    bound_for, eval_functional, extremal_f_lambda, extremal_hankel3, FunctionalKind, Member,
    Witness,
};

use crate::config::RunConfig;
use crate::error::Result;
use crate::formats::{sig15, BoundJson, MemberJson};
use crate::report::csv_text;

pub const SHARPNESS_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Serialize)]
pub struct SharpnessEntry {
    pub kind: String,
    pub lambda: f64,
    pub witness: String,
    pub member_hash: String,
    pub value: f64,
    pub bound: BoundJson,
    pub error: f64,
    pub pass: bool,
}

/// A sharp bound missed by its witness.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SharpnessFailure {
    pub kind: String,
    pub lambda: f64,
    pub value: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SharpnessReport {
    pub tolerance: f64,
    pub entries: Vec<SharpnessEntry>,
    pub members: Vec<CitedMember>,
    pub failures: Vec<SharpnessFailure>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CitedMember {
    pub hash: String,
    pub member: MemberJson,
}

impl SharpnessReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_csv(&self) -> Result<String> {
        csv_text(
            &[
                "kind", "lambda", "witness", "value", "bound", "error", "pass",
            ],
            self.entries.iter().map(|e| {
                vec![
                    e.kind.clone(),
                    sig15(e.lambda),
                    e.witness.clone(),
                    sig15(e.value),
                    sig15(e.bound.value),
                    sig15(e.error),
                    e.pass.to_string(),
                ]
            }),
        )
    }
}

pub fn witness_member(witness: Witness, lambda: f64) -> Result<Member> {
    Ok(match witness {
        Witness::FLambda => extremal_f_lambda(lambda)?,
        Witness::Hankel3 => extremal_hankel3(lambda)?,
    })
}

pub fn verify_sharpness(cfg: &RunConfig) -> Result<SharpnessReport> {
    let mut entries = Vec::new();
    let mut members: Vec<CitedMember> = Vec::new();
    let mut failures = Vec::new();
    for &lambda in &cfg.lambda_grid {
        for kind in FunctionalKind::SUPPORTED {
            let bound = bound_for(kind, lambda)?;
            let Some(witness) = bound.witness.filter(|_| bound.sharp) else {
                continue;
            };
            let member = witness_member(witness, lambda)?;
            let json = MemberJson::from_member(&member);
            let hash = json.content_hash();
            if !members.iter().any(|c| c.hash == hash) {
                members.push(CitedMember {
                    hash: hash.clone(),
                    member: json,
                });
            }
            let value = eval_functional(kind, &member)?;
            let error = (value - bound.value).abs();
            let pass = error <= SHARPNESS_TOL;
            if !pass {
                failures.push(SharpnessFailure {
                    kind: kind.to_string(),
                    lambda,
                    value,
                    bound: bound.value,
                });
            }
            entries.push(SharpnessEntry {
                kind: kind.to_string(),
                lambda,
                witness: witness.as_str().to_string(),
                member_hash: hash,
                value,
                bound: BoundJson::from(&bound),
                error,
                pass,
            });
        }
    }
    Ok(SharpnessReport {
        tolerance: SHARPNESS_TOL,
        entries,
        members,
        failures,
    })
}
