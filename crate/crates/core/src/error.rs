use thiserror::Error;

use crate::functionals::FunctionalKind;

/// Failures raised by the core library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("series constant term {modulus:e} is below the inversion threshold")]
    ZeroConstantTerm { modulus: f64 },

    #[error("series is not normalized: f(0) = {f0:e}, f'(0) - 1 = {f1:e}")]
    NotNormalized { f0: f64, f1: f64 },

    #[error("sampled sup |psi| = {sup} exceeds 1 on the certification circle")]
    NormExceeded { sup: f64 },

    #[error("denominator 1 - a2 z - lambda z w(z) vanishes at |z| = {modulus} inside the disk")]
    DenominatorVanishes { modulus: f64 },

    #[error(
        "sampled max |U_f - 1| = {max_dev} leaves margin {margin:e} against lambda = {lambda}"
    )]
    MembershipFailed {
        max_dev: f64,
        margin: f64,
        lambda: f64,
    },

    #[error("lambda = {0} is outside (0, 1]")]
    InvalidLambda(f64),

    #[error("point ({x}, {y}) lies outside the region 0 <= x <= 1, 0 <= y <= (1 - x^2)/2")]
    OutsideRegion { x: f64, y: f64 },

    #[error("{kind} needs coefficient a_{index}, only a_1..a_5 are available")]
    IndexOutOfRange { kind: FunctionalKind, index: usize },

    #[error("no bound is known for {0}")]
    UnsupportedKind(FunctionalKind),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
