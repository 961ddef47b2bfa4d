//! Members of `U(lambda)` built from `z/f(z) = 1 - a_2 z - lambda z w(z)`.
//!
//! Writing `g = z/f`, one has `U_f = g - z g' = 1 + lambda z^2 w'(z)`, so a
//! certified `|w'| <= 1` together with a zero-free denominator in the disk
//! gives a member. Membership is still checked independently by sampling
//! `|U_f - 1|` on circles.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;
use num_traits::Float;

use crate::error::{Error, Result};
use crate::roots::min_root_modulus;
use crate::schwarz::{horner, make_schwarz, CoefTriple, SchwarzFn};
use crate::series::{u_transform, PowerSeries, DEFAULT_ORDER};

/// Smallest truncation order that leaves guard terms above `a_5`.
pub const MIN_ORDER: usize = 8;

/// Denominator zeros must satisfy `|z| >= 1 - ROOT_TOL`. Zeros on the unit
/// circle are allowed (the extremal functions have their poles there); the
/// slack covers the `sqrt(eps)` accuracy of a double zero.
pub const ROOT_TOL: f64 = 1e-7;

/// A member is accepted only if `lambda - max |U_f - 1|` exceeds this.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// Slack on `|a_3| <= 1 + lambda + lambda^2`.
pub const A3_TOL: f64 = 1e-10;

/// Above this radius a polynomial denominator is evaluated in closed form
/// rather than through the truncated series.
pub const RATIONAL_RADIUS: f64 = 0.9;

/// `|1 - lambda|` below which `(1 - lambda^n)/(1 - lambda)` is replaced by `n`.
pub const LAMBDA_ONE_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    Generated,
    CatalogFLambda,
    CatalogRotation,
    CatalogHankel3,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Generated => "generated",
            Provenance::CatalogFLambda => "catalog-f_lambda",
            Provenance::CatalogRotation => "catalog-rotation",
            Provenance::CatalogHankel3 => "catalog-hankel3",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            Provenance::Generated,
            Provenance::CatalogFLambda,
            Provenance::CatalogRotation,
            Provenance::CatalogHankel3,
        ]
        .into_iter()
        .find(|p| p.as_str() == s)
    }
}

impl core::fmt::Display for Provenance {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Circles on which `|U_f - 1|` is sampled.
#[derive(Debug, Clone, PartialEq)]
pub struct MembershipGrid {
    pub radii: Vec<f64>,
    pub angles: usize,
}

impl Default for MembershipGrid {
    fn default() -> Self {
        Self {
            radii: alloc::vec![0.5, 0.9, 0.99, 0.999],
            angles: 2048,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MembershipReport {
    /// Max of `|U_f(z) - 1|` over all sampled points.
    pub max_dev: f64,
    /// `lambda - max_dev`.
    pub margin: f64,
    pub denom_ok: bool,
    /// Smallest denominator zero modulus, when a denominator was supplied.
    pub min_root_modulus: Option<f64>,
    /// Max deviation per radius, in grid order.
    pub per_radius: Vec<(f64, f64)>,
    pub angles: usize,
}

impl MembershipReport {
    pub fn accepted(&self) -> bool {
        self.denom_ok && self.margin > MEMBERSHIP_TOL
    }
}

/// Samples `|U_f - 1|` on the grid.
///
/// When `denominator` holds the coefficients of the polynomial `z/f`, its
/// zeros are checked against the closed disk and radii above
/// [`RATIONAL_RADIUS`] are evaluated from `f = z/g`, `f' = (g - z g')/g^2`
/// instead of the truncated series. Without a denominator the series is
/// used everywhere and `denom_ok` is reported as true.
pub fn check_membership(
    f: &PowerSeries,
    denominator: Option<&[Complex64]>,
    lambda: f64,
    grid: &MembershipGrid,
) -> Result<MembershipReport> {
    let u = u_transform(f)?;
    let min_root = denominator.and_then(min_root_modulus);
    let denom_ok = min_root.is_none_or(|m| m >= 1.0 - ROOT_TOL);
    let derivative: Option<Vec<Complex64>> = denominator.map(|g| {
        g.iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * k as f64)
            .collect()
    });

    let angles = grid.angles.max(1);
    let per_radius: Vec<(f64, f64)> = grid
        .radii
        .iter()
        .map(|&r| {
            let dev = (0..angles)
                .map(|k| {
                    let z = Complex64::from_polar(r, TAU * k as f64 / angles as f64);
                    let value = match (denominator, &derivative) {
                        (Some(g), Some(dg)) if r > RATIONAL_RADIUS => rational_u(g, dg, z),
                        _ => u.evaluate(z),
                    };
                    (value - ONE).norm()
                })
                .fold(0.0, f64::max);
            (r, dev)
        })
        .collect();
    let max_dev = per_radius.iter().map(|&(_, d)| d).fold(0.0, f64::max);
    Ok(MembershipReport {
        max_dev,
        margin: lambda - max_dev,
        denom_ok,
        min_root_modulus: min_root,
        per_radius,
        angles,
    })
}

fn rational_u(g: &[Complex64], dg: &[Complex64], z: Complex64) -> Complex64 {
    let gz = horner(g, z);
    let dgz = horner(dg, z);
    let f = z / gz;
    let fp = (gz - z * dgz) / (gz * gz);
    let ratio = z / f;
    ratio * ratio * fp
}

/// `a_3`, `a_4`, `a_5` from `a_2` and the Schwarz coefficients.
pub fn coefficients_from_schwarz(
    lambda: f64,
    a2: Complex64,
    t: &CoefTriple,
) -> (Complex64, Complex64, Complex64) {
    let CoefTriple { c1, c2, c3 } = *t;
    let a3 = c1 * lambda + a2 * a2;
    let a4 = c2 * lambda + a2 * c1 * (2.0 * lambda) + a2 * a2 * a2;
    let a5 = c3 * lambda
        + a2 * c2 * (2.0 * lambda)
        + c1 * c1 * (lambda * lambda)
        + a2 * a2 * c1 * (3.0 * lambda)
        + a2.powu(4);
    (a3, a4, a5)
}

/// A member of `U(lambda)` with its derived series and coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Member {
    lambda: f64,
    a2: Complex64,
    schwarz: SchwarzFn,
    f: PowerSeries,
    coeffs: [Complex64; 5],
    provenance: Provenance,
    membership: MembershipReport,
}

impl Member {
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn a2(&self) -> Complex64 {
        self.a2
    }

    pub fn schwarz(&self) -> &SchwarzFn {
        &self.schwarz
    }

    pub fn series(&self) -> &PowerSeries {
        &self.f
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn membership(&self) -> &MembershipReport {
        &self.membership
    }

    /// Coefficient `a_n` for `1 <= n <= 5`.
    pub fn a(&self, n: usize) -> Option<Complex64> {
        n.checked_sub(1).and_then(|i| self.coeffs.get(i)).copied()
    }

    /// `[a_1, ..., a_5]` from the coefficient relations.
    pub fn coefficients(&self) -> [Complex64; 5] {
        self.coeffs
    }

    /// Coefficients of the polynomial `z/f = 1 - a_2 z - lambda z w(z)`.
    pub fn denominator(&self) -> Vec<Complex64> {
        denominator(self.lambda, self.a2, &self.schwarz)
    }

    /// `e^{-i phi} f(e^{i phi} z)`, rebuilt from rotated parameters.
    pub fn rotated(&self, phi: f64) -> Result<Self> {
        let u = Complex64::from_polar(1.0, phi);
        let w = self.schwarz.rotated(u, u);
        build(
            self.lambda,
            self.a2 * u,
            w,
            self.f.order(),
            self.provenance,
            &MembershipGrid::default(),
        )
    }
}

fn denominator(lambda: f64, a2: Complex64, w: &SchwarzFn) -> Vec<Complex64> {
    let mut g: Vec<Complex64> = alloc::vec![ONE, -a2];
    g.extend(w.omega_coeffs().iter().skip(1).map(|&c| -c * lambda));
    while g.len() > 1 && g.last() == Some(&ZERO) {
        g.pop();
    }
    g
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidLambda(lambda))
    }
}

/// Builds `f = z / (1 - a_2 z - lambda z w(z))` at the default order and
/// verifies membership on the default grid.
pub fn build_member(lambda: f64, a2: Complex64, w: SchwarzFn) -> Result<Member> {
    build_member_with(lambda, a2, w, DEFAULT_ORDER, &MembershipGrid::default())
}

pub fn build_member_with(
    lambda: f64,
    a2: Complex64,
    w: SchwarzFn,
    order: usize,
    grid: &MembershipGrid,
) -> Result<Member> {
    build(lambda, a2, w, order, Provenance::Generated, grid)
}

fn build(
    lambda: f64,
    a2: Complex64,
    w: SchwarzFn,
    order: usize,
    provenance: Provenance,
    grid: &MembershipGrid,
) -> Result<Member> {
    check_lambda(lambda)?;
    let order = order.max(MIN_ORDER);
    let g = denominator(lambda, a2, &w);
    if let Some(modulus) = min_root_modulus(&g) {
        if modulus < 1.0 - ROOT_TOL {
            return Err(Error::DenominatorVanishes { modulus });
        }
    }
    let f = PowerSeries::new(g.iter().copied(), order)
        .reciprocal()?
        .shift_up(1);
    let membership = check_membership(&f, Some(&g), lambda, grid)?;
    if !membership.accepted() {
        return Err(Error::MembershipFailed {
            max_dev: membership.max_dev,
            margin: membership.margin,
            lambda,
        });
    }
    let (a3, a4, a5) = coefficients_from_schwarz(lambda, a2, &w.triple());
    Ok(Member {
        lambda,
        a2,
        schwarz: w,
        f,
        coeffs: [ONE, a2, a3, a4, a5],
        provenance,
        membership,
    })
}

/// Rebuilds a member from its serialized parameters.
pub fn rebuild_member(
    lambda: f64,
    a2: Complex64,
    psi_coeffs: &[Complex64],
    provenance: Provenance,
) -> Result<Member> {
    let w = make_schwarz(psi_coeffs)?;
    build(
        lambda,
        a2,
        w,
        DEFAULT_ORDER,
        provenance,
        &MembershipGrid::default(),
    )
}

/// `(1 - lambda^n)/(1 - lambda)`, the coefficients of `f_lambda`, with the
/// removable singularity at `lambda = 1` filled by `n`.
pub fn f_lambda_coefficient(n: u32, lambda: f64) -> f64 {
    if (1.0 - lambda).abs() < LAMBDA_ONE_TOL {
        n as f64
    } else {
        (1.0 - Float::powi(lambda, n as i32)) / (1.0 - lambda)
    }
}

/// `f_lambda(z) = z / ((1 - z)(1 - lambda z))`: here `a_2 = 1 + lambda` and
/// `w(z) = -z`.
pub fn extremal_f_lambda(lambda: f64) -> Result<Member> {
    let w = make_schwarz(&[-ONE])?;
    build(
        lambda,
        Complex64::new(1.0 + lambda, 0.0),
        w,
        DEFAULT_ORDER,
        Provenance::CatalogFLambda,
        &MembershipGrid::default(),
    )
}

/// `z / (1 - (1 + lambda) e^{i phi} z + lambda e^{2 i phi} z^2)`, the
/// rotations `e^{-i phi} f_lambda(e^{i phi} z)`.
pub fn extremal_rotation(lambda: f64, phi: f64) -> Result<Member> {
    let u = Complex64::from_polar(1.0, phi);
    let w = make_schwarz(&[-(u * u)])?;
    build(
        lambda,
        u * (1.0 + lambda),
        w,
        DEFAULT_ORDER,
        Provenance::CatalogRotation,
        &MembershipGrid::default(),
    )
}

/// `z / (1 - (lambda/2) z^3)`: `a_2 = 0`, `w(z) = z^2/2`.
pub fn extremal_hankel3(lambda: f64) -> Result<Member> {
    let w = make_schwarz(&[ZERO, ONE])?;
    build(
        lambda,
        ZERO,
        w,
        DEFAULT_ORDER,
        Provenance::CatalogHankel3,
        &MembershipGrid::default(),
    )
}

/// `|a_3| <= 1 + lambda + lambda^2`, the hypothesis of the conditional bounds.
pub fn a3_condition_holds(m: &Member) -> bool {
    let l = m.lambda;
    m.coeffs[2].norm() <= 1.0 + l + l * l + A3_TOL
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn identity_member() {
        let m = build_member(0.7, ZERO, SchwarzFn::zero()).unwrap();
        assert_eq!(m.series()[1], ONE);
        for k in 2..=m.series().order() {
            assert_eq!(m.series()[k], ZERO);
        }
        assert_eq!(m.membership().max_dev, 0.0);
        assert_eq!(m.membership().margin, 0.7);
    }

    #[test]
    fn f_half_from_parameters() {
        let w = make_schwarz(&[-ONE]).unwrap();
        let m = build_member(0.5, c(1.5), w).unwrap();
        let expected = [1.0, 1.5, 1.75, 1.875, 1.9375];
        for (n, e) in expected.iter().enumerate() {
            assert!(close(m.series()[n + 1], c(*e), 1e-14));
            assert!(close(m.a(n + 1).unwrap(), c(*e), 1e-14));
        }
    }

    #[test]
    fn vanishing_denominator_is_rejected() {
        // 1 - 3z + z^2/2 vanishes at 3 - sqrt(7) ~ 0.354
        let w = make_schwarz(&[-ONE]).unwrap();
        match build_member(0.5, c(3.0), w) {
            Err(Error::DenominatorVanishes { modulus }) => {
                assert!((modulus - (3.0 - 7f64.sqrt())).abs() < 1e-12)
            }
            other => panic!("unexpected {other:?}"),
        }
        let w = make_schwarz(&[ONE]).unwrap();
        assert!(matches!(
            build_member(0.5, c(3.0), w),
            Err(Error::DenominatorVanishes { .. })
        ));
    }

    #[test]
    fn invalid_lambda() {
        assert!(matches!(
            build_member(0.0, ZERO, SchwarzFn::zero()),
            Err(Error::InvalidLambda(_))
        ));
        assert!(matches!(
            build_member(1.5, ZERO, SchwarzFn::zero()),
            Err(Error::InvalidLambda(_))
        ));
    }

    #[test]
    fn coefficient_relation_examples() {
        let (a3, a4, a5) = coefficients_from_schwarz(0.4, ZERO, &CoefTriple::real(0.0, 0.0, 0.0));
        assert_eq!((a3, a4, a5), (ZERO, ZERO, ZERO));

        // f_lambda carries c1 = -1: a3 = -lambda + (1 + lambda)^2 = 1 + lambda + lambda^2
        let (a3, _, _) = coefficients_from_schwarz(0.5, c(1.5), &CoefTriple::real(-1.0, 0.0, 0.0));
        assert!(close(a3, c(1.75), 1e-15));
        // c1 = +1 would give 2.75, which is not f_lambda
        let (wrong, _, _) =
            coefficients_from_schwarz(0.5, c(1.5), &CoefTriple::real(1.0, 0.0, 0.0));
        assert!(close(wrong, c(2.75), 1e-15));

        let (a3, a4, a5) =
            coefficients_from_schwarz(1.0, c(2.0), &CoefTriple::real(-1.0, 0.0, 0.0));
        assert!(close(a3, c(3.0), 1e-15));
        assert!(close(a4, c(4.0), 1e-15));
        assert!(close(a5, c(5.0), 1e-15));
    }

    #[test]
    fn catalog_f_lambda() {
        let m = extremal_f_lambda(0.5).unwrap();
        let expected = [1.5, 1.75, 1.875, 1.9375];
        for (k, e) in expected.iter().enumerate() {
            assert!(close(m.a(k + 2).unwrap(), c(*e), 1e-15));
        }
        let m = extremal_f_lambda(1.0).unwrap();
        for n in 2..=5 {
            assert!(close(m.a(n).unwrap(), c(n as f64), 1e-15));
        }
        for lambda in [0.1, 0.35, 0.8, 1.0] {
            let m = extremal_f_lambda(lambda).unwrap();
            assert!((m.a2().norm() - (1.0 + lambda)).abs() < 1e-15);
            for n in 1..=5u32 {
                let a = m.a(n as usize).unwrap();
                assert!(close(a, c(f_lambda_coefficient(n, lambda)), 1e-14));
            }
            assert!(a3_condition_holds(&m));
        }
    }

    #[test]
    fn lambda_one_branch() {
        assert_eq!(f_lambda_coefficient(7, 1.0), 7.0);
        assert!((f_lambda_coefficient(3, 1.0 - 1e-6) - 3.0).abs() < 1e-5);
    }

    #[test]
    fn catalog_rotation() {
        let base = extremal_f_lambda(0.5).unwrap();
        let same = extremal_rotation(0.5, 0.0).unwrap();
        for n in 1..=5 {
            assert!(close(base.a(n).unwrap(), same.a(n).unwrap(), 1e-15));
        }
        let flipped = extremal_rotation(0.5, core::f64::consts::PI).unwrap();
        assert!(close(flipped.a2(), c(-1.5), 1e-15));
        for phi in [0.3, 1.0, 2.5, 4.0, TAU] {
            let m = extremal_rotation(0.7, phi).unwrap();
            assert!((m.a2().norm() - 1.7).abs() < 1e-14);
        }
    }

    #[test]
    fn catalog_hankel3() {
        for (lambda, a4) in [(0.5, 0.25), (1.0, 0.5)] {
            let m = extremal_hankel3(lambda).unwrap();
            assert_eq!(m.a(2), Some(ZERO));
            assert_eq!(m.a(3), Some(ZERO));
            assert_eq!(m.a(5), Some(ZERO));
            assert!(close(m.a(4).unwrap(), c(a4), 1e-15));
            assert!(m.membership().margin > 0.0);
            assert!(close(m.series()[7], c(lambda * lambda / 4.0), 1e-15));
        }
    }

    #[test]
    fn a3_condition_examples() {
        let m = build_member(0.6, ZERO, SchwarzFn::zero()).unwrap();
        assert!(a3_condition_holds(&m));
        let m = build_member(0.6, ZERO, make_schwarz(&[ONE]).unwrap()).unwrap();
        assert!(close(m.a(3).unwrap(), c(0.6), 1e-15));
        assert!(a3_condition_holds(&m));
    }

    #[test]
    fn membership_of_f_half_at_099() {
        let m = extremal_f_lambda(0.5).unwrap();
        let grid = MembershipGrid {
            radii: alloc::vec![0.99],
            angles: 2048,
        };
        let report = check_membership(m.series(), Some(&m.denominator()), 0.5, &grid).unwrap();
        assert!((report.max_dev - 0.49005).abs() < 1e-9);
        let series_only = check_membership(m.series(), None, 0.5, &grid).unwrap();
        assert!((series_only.max_dev - 0.49005).abs() < 1e-9);
    }

    #[test]
    fn membership_of_hankel_witness() {
        let m = extremal_hankel3(1.0).unwrap();
        let grid = MembershipGrid {
            radii: alloc::vec![0.999],
            angles: 2048,
        };
        let report = check_membership(m.series(), Some(&m.denominator()), 1.0, &grid).unwrap();
        assert!((report.max_dev - 0.999f64.powi(3)).abs() < 1e-9);
        assert!(report.accepted());
    }

    #[test]
    fn provenance_round_trip() {
        for p in [
            Provenance::Generated,
            Provenance::CatalogFLambda,
            Provenance::CatalogRotation,
            Provenance::CatalogHankel3,
        ] {
            assert_eq!(Provenance::parse(p.as_str()), Some(p));
        }
        assert_eq!(Provenance::parse("koebe"), None);
    }
}
