//! JSON forms of members, bounds and optimizer results, plus the number
//! format used in CSV tables.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use ulambda_core::{rebuild_member, BoundRecord, Complex64, MaxResult, Member, Provenance};

use crate::error::{LabError, Result};

/// `{lambda, a2: [re, im], psi_coeffs: [[re, im], ...], provenance}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MemberJson {
    pub lambda: f64,
    pub a2: [f64; 2],
    pub psi_coeffs: Vec<[f64; 2]>,
    pub provenance: String,
}

impl MemberJson {
    pub fn from_member(m: &Member) -> Self {
        MemberJson {
            lambda: m.lambda(),
            a2: pair(m.a2()),
            psi_coeffs: m.schwarz().psi_coeffs().iter().map(|&c| pair(c)).collect(),
            provenance: m.provenance().as_str().to_string(),
        }
    }

    /// SHA-256 of the compact JSON encoding, hex encoded.
    pub fn content_hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("member JSON always serializes");
        hex::encode(Sha256::digest(&bytes))
    }

    pub fn rebuild(&self) -> Result<Member> {
        let provenance = Provenance::parse(&self.provenance).ok_or_else(|| {
            LabError::Verification(format!("unknown provenance {:?}", self.provenance))
        })?;
        let psi: Vec<Complex64> = self.psi_coeffs.iter().map(|&p| unpair(p)).collect();
        Ok(rebuild_member(
            self.lambda,
            unpair(self.a2),
            &psi,
            provenance,
        )?)
    }
}

pub fn pair(c: Complex64) -> [f64; 2] {
    [c.re, c.im]
}

pub fn unpair(p: [f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

/// `{kind, lambda, value, valid_iff, sharp, witness}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundJson {
    pub kind: String,
    pub lambda: f64,
    pub value: f64,
    pub valid_iff: String,
    pub sharp: bool,
    pub witness: Option<String>,
}

impl From<&BoundRecord> for BoundJson {
    fn from(r: &BoundRecord) -> Self {
        BoundJson {
            kind: r.kind.to_string(),
            lambda: r.lambda,
            value: r.value,
            valid_iff: r.valid_iff.to_string(),
            sharp: r.sharp,
            witness: r.witness.map(|w| w.as_str().to_string()),
        }
    }
}

/// `{function, lambda, argmax: [x, y], value, tolerance}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxResultJson {
    pub function: String,
    pub lambda: f64,
    pub argmax: [f64; 2],
    pub value: f64,
    pub tolerance: f64,
}

impl From<&MaxResult> for MaxResultJson {
    fn from(r: &MaxResult) -> Self {
        MaxResultJson {
            function: r.objective.as_str().to_string(),
            lambda: r.lambda,
            argmax: [r.argmax.x, r.argmax.y],
            value: r.value,
            tolerance: r.tolerance,
        }
    }
}

/// Fifteen significant digits, `.` as decimal point, no grouping.
///
/// Moderate magnitudes are written positionally, the rest in scientific
/// notation; zero is `0`.
pub fn sig15(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.14e}");
    // the exponent after rounding, so 9.99..96 becomes 10.0..0
    let exponent: i32 = sci
        .rsplit('e')
        .next()
        .and_then(|e| e.parse().ok())
        .expect("scientific format has an exponent");
    if (-5..15).contains(&exponent) {
        let decimals = (14 - exponent).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        sci
    }
}

pub fn opt_sig15(x: Option<f64>) -> String {
    x.map(sig15).unwrap_or_default()
}
