//! Schwarz-type functions `w(z) = c_1 z + c_2 z^2 + ...` with `|w'| <= 1`.
//!
//! A [`SchwarzFn`] is stored through its derivative `psi = w'`, a
//! polynomial certified to satisfy `|psi| <= 1` on the closed disk by
//! sampling the unit circle (maximum modulus). Radial integration then gives
//! `|w(z)| <= |z|`.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, RngExt};

use crate::error::{Error, Result};
use crate::series::PowerSeries;

/// Degree of `psi` used by the generators.
pub const DEFAULT_PSI_DEGREE: usize = 4;

/// Points on `|z| = 1` used to certify `sup |psi| <= 1`.
pub const CERTIFICATION_POINTS: usize = 4096;

/// Slack allowed on the sampled sup norm.
pub const CERTIFICATION_SLACK: f64 = 1e-12;

/// Lower limit on the angular sample count of [`sup_norm_on_circle`].
pub const MIN_CIRCLE_POINTS: usize = 256;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// First three Taylor coefficients of a Schwarz function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefTriple {
    pub c1: Complex64,
    pub c2: Complex64,
    pub c3: Complex64,
}

impl CoefTriple {
    pub fn new(c1: Complex64, c2: Complex64, c3: Complex64) -> Self {
        Self { c1, c2, c3 }
    }

    pub fn real(c1: f64, c2: f64, c3: f64) -> Self {
        Self::new(c1.into(), c2.into(), c3.into())
    }

    /// Upper limit on `|c2|` given `c1`.
    pub fn c2_limit(&self) -> f64 {
        c2_limit(self.c1.norm())
    }

    /// Upper limit on `|c3|` given `c1` and `c2`; the bracket is clamped at 0.
    pub fn c3_limit(&self) -> f64 {
        c3_limit(self.c1.norm(), self.c2.norm())
    }
}

fn c2_limit(x: f64) -> f64 {
    0.5 * (1.0 - x * x)
}

fn c3_limit(x: f64, y: f64) -> f64 {
    ((1.0 - x * x - 4.0 * y * y / (1.0 + x)) / 3.0).max(0.0)
}

/// `|c1| <= 1`, `|c2| <= (1 - |c1|^2)/2` and
/// `|c3| <= (1/3)[1 - |c1|^2 - 4|c2|^2/(1 + |c1|)]`.
pub fn is_admissible_triple(t: &CoefTriple) -> bool {
    is_admissible_triple_within(t, 0.0)
}

/// [`is_admissible_triple`] with every inequality relaxed by `tol`.
pub fn is_admissible_triple_within(t: &CoefTriple, tol: f64) -> bool {
    let x = t.c1.norm();
    let y = t.c2.norm();
    x <= 1.0 + tol
        && y <= c2_limit(x.min(1.0)) + tol
        && t.c3.norm() <= c3_limit(x.min(1.0), y) + tol
}

/// Draws an admissible triple: `|c1|` uniform on `[0, 1]`, then `|c2|` and
/// `|c3|` uniform up to their limits, all phases uniform.
pub fn sample_triple<R: Rng + ?Sized>(rng: &mut R) -> CoefTriple {
    let x: f64 = rng.random();
    let y = rng.random::<f64>() * c2_limit(x);
    let w = rng.random::<f64>() * c3_limit(x, y);
    CoefTriple::new(
        random_phase(rng, x),
        random_phase(rng, y),
        random_phase(rng, w),
    )
}

fn random_phase<R: Rng + ?Sized>(rng: &mut R, modulus: f64) -> Complex64 {
    Complex64::from_polar(modulus, TAU * rng.random::<f64>())
}

/// Max of `|p(r e^{i theta})|` over `m` equispaced angles (at least
/// [`MIN_CIRCLE_POINTS`]). `p` holds ascending coefficients.
pub fn sup_norm_on_circle(p: &[Complex64], r: f64, m: usize) -> f64 {
    let m = m.max(MIN_CIRCLE_POINTS);
    (0..m)
        .map(|k| {
            let z = Complex64::from_polar(r, TAU * k as f64 / m as f64);
            horner(p, z).norm()
        })
        .fold(0.0, f64::max)
}

pub(crate) fn horner(p: &[Complex64], z: Complex64) -> Complex64 {
    p.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
}

/// A certified Schwarz-type function.
#[derive(Debug, Clone, PartialEq)]
pub struct SchwarzFn {
    psi: Vec<Complex64>,
    omega: Vec<Complex64>,
    sup_norm: f64,
}

impl SchwarzFn {
    /// The zero function, `w = 0`.
    pub fn zero() -> Self {
        Self {
            psi: Vec::new(),
            omega: alloc::vec![ZERO],
            sup_norm: 0.0,
        }
    }

    /// Coefficients of `psi = w'`.
    pub fn psi_coeffs(&self) -> &[Complex64] {
        &self.psi
    }

    /// Coefficients of `w`, starting with the zero constant term.
    pub fn omega_coeffs(&self) -> &[Complex64] {
        &self.omega
    }

    /// Sampled sup of `|psi|` on the unit circle.
    pub fn sup_norm(&self) -> f64 {
        self.sup_norm
    }

    /// Taylor coefficient `c_k` of `w` (zero past the polynomial degree).
    pub fn c(&self, k: usize) -> Complex64 {
        self.omega.get(k).copied().unwrap_or(ZERO)
    }

    pub fn triple(&self) -> CoefTriple {
        CoefTriple::new(self.c(1), self.c(2), self.c(3))
    }

    pub fn omega(&self, z: Complex64) -> Complex64 {
        horner(&self.omega, z)
    }

    pub fn psi(&self, z: Complex64) -> Complex64 {
        horner(&self.psi, z)
    }

    pub fn omega_series(&self, order: usize) -> PowerSeries {
        PowerSeries::new(self.omega.iter().copied(), order)
    }

    /// `e^{i alpha} w(e^{i beta} z)`-style rotation: scales `c_k` by `u v^k`.
    pub fn rotated(&self, u: Complex64, v: Complex64) -> Self {
        let psi = self
            .psi
            .iter()
            .enumerate()
            .map(|(k, &p)| p * u * v.powu(k as u32 + 1))
            .collect();
        let omega = self
            .omega
            .iter()
            .enumerate()
            .map(|(k, &c)| c * u * v.powu(k as u32))
            .collect();
        Self {
            psi,
            omega,
            sup_norm: self.sup_norm,
        }
    }
}

/// Builds `w` from `psi = w'` and certifies `sup |psi| <= 1` on
/// [`CERTIFICATION_POINTS`] points of the unit circle.
pub fn make_schwarz(psi_coeffs: &[Complex64]) -> Result<SchwarzFn> {
    let sup = sup_norm_on_circle(psi_coeffs, 1.0, CERTIFICATION_POINTS);
    if sup.is_nan() || sup > 1.0 + CERTIFICATION_SLACK {
        return Err(Error::NormExceeded { sup });
    }
    let mut psi = psi_coeffs.to_vec();
    while psi.last().is_some_and(|c| *c == ZERO) {
        psi.pop();
    }
    let omega = core::iter::once(ZERO)
        .chain(psi.iter().enumerate().map(|(k, &p)| p / (k + 1) as f64))
        .collect();
    Ok(SchwarzFn {
        psi,
        omega,
        sup_norm: sup,
    })
}

/// Random `psi` of the given degree with `sup |psi| <= scale <= 1` on the
/// closed disk.
///
/// The sampled maximum `M` on `m` circle points underestimates the true one
/// by at most a factor `1 - d pi/m` (Bernstein), so dividing by
/// `M / (1 - d pi/m)` keeps the true sup norm at or below `scale`.
pub fn sample_psi<R: Rng + ?Sized>(rng: &mut R, degree: usize, scale: f64) -> SchwarzFn {
    loop {
        let raw: Vec<Complex64> = (0..=degree)
            .map(|_| {
                let modulus = rng.random::<f64>();
                random_phase(rng, modulus)
            })
            .collect();
        let sampled = sup_norm_on_circle(&raw, 1.0, CERTIFICATION_POINTS);
        if sampled < 1e-6 {
            continue;
        }
        let guard = 1.0 - degree as f64 * core::f64::consts::PI / CERTIFICATION_POINTS as f64;
        let factor = scale.clamp(0.0, 1.0) * guard / sampled;
        let psi: Vec<Complex64> = raw.iter().map(|&c| c * factor).collect();
        if let Ok(w) = make_schwarz(&psi) {
            return w;
        }
    }
}
