//! Truncated complex Taylor series.
//!
//! A [`PowerSeries`] of order `N` stores the coefficients `p_0 ..= p_N` of
//! `p(z) = p_0 + p_1 z + ... + p_N z^N + O(z^{N+1})`. Binary operations work
//! at the smaller of the two operand orders.

use alloc::vec::Vec;
use core::ops::{Add, Index, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Truncation order used when nothing else is requested. Functionals only
/// read up to `a_5`; the extra terms keep products away from the cut.
pub const DEFAULT_ORDER: usize = 16;

/// Smallest constant-term modulus accepted by [`PowerSeries::reciprocal`].
pub const RECIPROCAL_EPS: f64 = 1e-9;

/// Tolerance on `f(0) = 0` and `f'(0) = 1` for [`u_transform`].
pub const NORMALIZATION_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries {
    coeffs: Vec<Complex64>,
}

impl PowerSeries {
    /// Builds a series of the given order, padding with zeros or dropping
    /// coefficients past `order`.
    pub fn new(coeffs: impl IntoIterator<Item = Complex64>, order: usize) -> Self {
        let mut coeffs: Vec<Complex64> = coeffs.into_iter().take(order + 1).collect();
        coeffs.resize(order + 1, ZERO);
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64], order: usize) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)), order)
    }

    pub fn zero(order: usize) -> Self {
        Self::new(core::iter::empty(), order)
    }

    pub fn one(order: usize) -> Self {
        Self::new([ONE], order)
    }

    /// The identity function `z`.
    pub fn identity(order: usize) -> Self {
        Self::new([ZERO, ONE], order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `z^k`, or `None` past the truncation order.
    pub fn get(&self, k: usize) -> Option<Complex64> {
        self.coeffs.get(k).copied()
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(self.coeffs.iter().copied(), order.min(self.order()))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|&c| c * s).collect(),
        }
    }

    /// Truncated Cauchy product.
    pub fn multiply(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let coeffs = (0..=order)
            .map(|k| (0..=k).map(|i| self.coeffs[i] * other.coeffs[k - i]).sum())
            .collect();
        Self { coeffs }
    }

    /// Multiplicative inverse by forward substitution:
    /// `r_0 = 1/p_0`, `r_k = -(sum_{j=1..k} p_j r_{k-j}) / p_0`.
    pub fn reciprocal(&self) -> Result<Self> {
        let p0 = self.coeffs[0];
        let modulus = p0.norm();
        if modulus.is_nan() || modulus < RECIPROCAL_EPS {
            return Err(Error::ZeroConstantTerm { modulus });
        }
        let inv0 = p0.inv();
        let mut r = Vec::with_capacity(self.coeffs.len());
        r.push(inv0);
        for k in 1..self.coeffs.len() {
            let acc: Complex64 = (1..=k).map(|j| self.coeffs[j] * r[k - j]).sum();
            r.push(-acc * inv0);
        }
        Ok(Self { coeffs: r })
    }

    /// Term-wise derivative; the order drops by one (a constant stays a
    /// constant series of order zero).
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * k as f64)
            .collect();
        Self { coeffs }
    }

    /// Horner evaluation of the truncated polynomial.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    /// Multiplies by `z^k`, keeping the order (the top `k` terms fall off).
    pub fn shift_up(&self, k: usize) -> Self {
        let order = self.order();
        let coeffs = core::iter::repeat_n(ZERO, k).chain(self.coeffs.iter().copied());
        Self::new(coeffs, order)
    }

    /// Divides by `z^k`, discarding `p_0..p_{k-1}`; the order drops by `k`.
    pub fn shift_down(&self, k: usize) -> Self {
        let order = self.order().saturating_sub(k);
        Self::new(self.coeffs.iter().copied().skip(k), order)
    }

    fn zip_with(&self, other: &Self, op: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        let order = self.order().min(other.order());
        let coeffs = self.coeffs[..=order]
            .iter()
            .zip(&other.coeffs[..=order])
            .map(|(&a, &b)| op(a, b))
            .collect();
        Self { coeffs }
    }
}

impl Index<usize> for PowerSeries {
    type Output = Complex64;

    fn index(&self, k: usize) -> &Complex64 {
        &self.coeffs[k]
    }
}

impl Add for &PowerSeries {
    type Output = PowerSeries;

    fn add(self, rhs: &PowerSeries) -> PowerSeries {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &PowerSeries {
    type Output = PowerSeries;

    fn sub(self, rhs: &PowerSeries) -> PowerSeries {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul for &PowerSeries {
    type Output = PowerSeries;

    fn mul(self, rhs: &PowerSeries) -> PowerSeries {
        self.multiply(rhs)
    }
}

impl Neg for &PowerSeries {
    type Output = PowerSeries;

    fn neg(self) -> PowerSeries {
        self.scale(-ONE)
    }
}

/// Series of `U_f(z) = (z/f(z))^2 f'(z)` for a normalized `f = z + a_2 z^2 + ...`.
///
/// The result has order `N - 1` where `N` is the order of `f`.
pub fn u_transform(f: &PowerSeries) -> Result<PowerSeries> {
    let f0 = f.get(0).unwrap_or(ZERO);
    let f1 = f.get(1).unwrap_or(ZERO);
    if f.order() < 1 || f0.norm() > NORMALIZATION_TOL || (f1 - ONE).norm() > NORMALIZATION_TOL {
        return Err(Error::NotNormalized {
            f0: f0.norm(),
            f1: (f1 - ONE).norm(),
        });
    }
    let z_over_f = f.shift_down(1).reciprocal()?;
    let squared = z_over_f.multiply(&z_over_f);
    Ok(squared.multiply(&f.derivative()))
}
