//! Maximization of the auxiliary functions `g1`, `g2`, `g3` over the region
//! `E = {0 <= x <= 1, 0 <= y <= (1 - x^2)/2}`, where `x = |c1|`, `y = |c2|`.
//!
//! All three share the form
//!
//! ```text
//! g(x, y) = (1/3)(1 - x^2 - 4y^2/(1 + x)) + alpha y + beta x^2 + gamma x
//! ```
//!
//! | objective | alpha          | beta       | gamma                        |
//! |-----------|----------------|------------|------------------------------|
//! | `g1`      | `2(1+lambda)`  | `lambda`   | `1 + lambda + lambda^2`      |
//! | `g2`      | `1+lambda`     | `0`        | `1 + lambda + lambda^2`      |
//! | `g3`      | `2(1+lambda)`  | `2 lambda` | `3(1 + lambda + lambda^2)`   |
//!
//! and `phi_i(x) = g_i(x, (1 - x^2)/2)` is the restriction to the upper
//! boundary arc.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_traits::Float;

use crate::error::{Error, Result};
use crate::functionals::{gen_zalcman_threshold, lambda_star};

/// Grid points per axis for [`maximize_over_region`].
pub const DEFAULT_GRID: usize = 2001;

/// Slack on the region constraints.
pub const REGION_TOL: f64 = 1e-12;

/// Smallest bracket tolerance accepted by the refiner.
pub const MIN_TOL: f64 = 1e-9;

/// Interior grid used by [`check_monotonicity_claims`].
pub const MONOTONICITY_GRID: usize = 500;

/// Distance from `(1, 0)` under which a maximizer counts as the corner.
pub const CORNER_TOL: f64 = 1e-6;

const INV_GOLDEN: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Objective {
    G1,
    G2,
    G3,
}

impl Objective {
    pub const ALL: [Objective; 3] = [Objective::G1, Objective::G2, Objective::G3];

    pub fn as_str(self) -> &'static str {
        match self {
            Objective::G1 => "g1",
            Objective::G2 => "g2",
            Objective::G3 => "g3",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|o| o.as_str() == s)
    }

    fn weights(self, lambda: f64) -> (f64, f64, f64) {
        let s = 1.0 + lambda + lambda * lambda;
        match self {
            Objective::G1 => (2.0 * (1.0 + lambda), lambda, s),
            Objective::G2 => (1.0 + lambda, 0.0, s),
            Objective::G3 => (2.0 * (1.0 + lambda), 2.0 * lambda, 3.0 * s),
        }
    }

    /// Formula value without the region check.
    pub fn value(self, x: f64, y: f64, lambda: f64) -> f64 {
        let (alpha, beta, gamma) = self.weights(lambda);
        (1.0 - x * x - 4.0 * y * y / (1.0 + x)) / 3.0 + alpha * y + beta * x * x + gamma * x
    }

    /// `dg/dx`.
    pub fn partial_x(self, x: f64, y: f64, lambda: f64) -> f64 {
        let (_, beta, gamma) = self.weights(lambda);
        let q = 1.0 + x;
        (-2.0 * x + 4.0 * y * y / (q * q)) / 3.0 + 2.0 * beta * x + gamma
    }

    /// `dg/dy`.
    pub fn partial_y(self, x: f64, y: f64, lambda: f64) -> f64 {
        let (alpha, _, _) = self.weights(lambda);
        -8.0 * y / (3.0 * (1.0 + x)) + alpha
    }

    /// Checked evaluation at a region point.
    pub fn eval(self, p: RegionPoint, lambda: f64) -> f64 {
        self.value(p.x, p.y, lambda)
    }

    /// Upper bound on `|grad g|` over the region.
    fn lipschitz(self, lambda: f64) -> f64 {
        let (alpha, beta, gamma) = self.weights(lambda);
        // |(-2x + 4y^2/(1+x)^2)/3| <= 1 on the region
        let gx = 1.0 + 2.0 * beta + gamma;
        let gy = 4.0 / 3.0 + alpha;
        Float::sqrt(gx * gx + gy * gy)
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn upper_boundary(x: f64) -> f64 {
    0.5 * (1.0 - x * x)
}

/// A point of the region `E`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionPoint {
    pub x: f64,
    pub y: f64,
}

impl RegionPoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        let inside = (-REGION_TOL..=1.0 + REGION_TOL).contains(&x)
            && y >= -REGION_TOL
            && y <= upper_boundary(x.clamp(0.0, 1.0)) + REGION_TOL;
        if inside {
            Ok(Self { x, y })
        } else {
            Err(Error::OutsideRegion { x, y })
        }
    }

    pub const CORNER: RegionPoint = RegionPoint { x: 1.0, y: 0.0 };

    pub fn distance(&self, other: &RegionPoint) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        Float::sqrt(dx * dx + dy * dy)
    }
}

pub fn g1(p: RegionPoint, lambda: f64) -> Result<f64> {
    checked(Objective::G1, p, lambda)
}

pub fn g2(p: RegionPoint, lambda: f64) -> Result<f64> {
    checked(Objective::G2, p, lambda)
}

pub fn g3(p: RegionPoint, lambda: f64) -> Result<f64> {
    checked(Objective::G3, p, lambda)
}

fn checked(objective: Objective, p: RegionPoint, lambda: f64) -> Result<f64> {
    let p = RegionPoint::new(p.x, p.y)?;
    Ok(objective.eval(p, lambda))
}

/// `phi_i(x)` in closed form.
pub fn phi_curve(objective: Objective, x: f64, lambda: f64) -> f64 {
    let l = lambda;
    let x2 = x * x;
    let x3 = x2 * x;
    match objective {
        Objective::G1 => 1.0 + l + (4.0 / 3.0 + l + l * l) * x - x2 - x3 / 3.0,
        Objective::G2 => {
            0.5 * (1.0 + l) + (l * l + l + 4.0 / 3.0) * x - 0.5 * (1.0 + l) * x2 - x3 / 3.0
        }
        Objective::G3 => {
            1.0 + l + (1.0 / 3.0 + 3.0 * (1.0 + l + l * l)) * x - (1.0 - l) * x2 - x3 / 3.0
        }
    }
}

/// `phi_i'(x)`.
pub fn phi_derivative(objective: Objective, x: f64, lambda: f64) -> f64 {
    let l = lambda;
    match objective {
        Objective::G1 => 4.0 / 3.0 + l + l * l - 2.0 * x - x * x,
        Objective::G2 => l * l + l + 4.0 / 3.0 - (1.0 + l) * x - x * x,
        Objective::G3 => 1.0 / 3.0 + 3.0 * (1.0 + l + l * l) - 2.0 * (1.0 - l) * x - x * x,
    }
}

/// Maximizer of `phi_1` on `[0, 1]`: `sqrt(lambda^2 + lambda + 7/3) - 1`
/// while that is below 1, otherwise the endpoint.
pub fn phi1_argmax(lambda: f64) -> f64 {
    (Float::sqrt(lambda * lambda + lambda + 7.0 / 3.0) - 1.0).min(1.0)
}

/// Which part of the region a candidate came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Segment {
    /// `y = 0`
    Bottom,
    /// `x = 0`
    Left,
    /// `y = (1 - x^2)/2`
    Upper,
    Interior,
}

impl Segment {
    pub fn as_str(self) -> &'static str {
        match self {
            Segment::Bottom => "y=0",
            Segment::Left => "x=0",
            Segment::Upper => "upper",
            Segment::Interior => "interior",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaximizeOptions {
    pub grid: usize,
    pub tol: f64,
}

impl Default for MaximizeOptions {
    fn default() -> Self {
        Self {
            grid: DEFAULT_GRID,
            tol: MIN_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaxResult {
    pub objective: Objective,
    pub lambda: f64,
    pub argmax: RegionPoint,
    pub value: f64,
    pub segment: Segment,
    /// Other refined candidates whose value equals `value` exactly.
    pub ties: Vec<(Segment, RegionPoint)>,
    pub grid: usize,
    /// Best raw grid value before refinement.
    pub grid_value: f64,
    /// Lipschitz bound on how far the raw grid maximum can sit below the
    /// true maximum.
    pub grid_error_bound: f64,
    /// Width of the final golden-section bracket times the gradient bound.
    pub tolerance: f64,
}

impl MaxResult {
    pub fn at_corner(&self) -> bool {
        self.argmax.distance(&RegionPoint::CORNER) <= CORNER_TOL
    }
}

/// Grid search over `E` followed by golden-section polishing of the three
/// boundary pieces and of any interior grid champion.
pub fn maximize_over_region(objective: Objective, lambda: f64, tol: f64) -> MaxResult {
    maximize_with(
        objective,
        lambda,
        &MaximizeOptions {
            tol,
            ..MaximizeOptions::default()
        },
    )
}

pub fn maximize_with(objective: Objective, lambda: f64, opts: &MaximizeOptions) -> MaxResult {
    let n = opts.grid.max(3);
    let tol = opts.tol.max(MIN_TOL);
    let step = 1.0 / (n - 1) as f64;
    let f = |x: f64, y: f64| objective.value(x, y, lambda);

    let mut best = (f64::NEG_INFINITY, 0usize, 0usize);
    let mut bottom = (f64::NEG_INFINITY, 0usize);
    let mut left = (f64::NEG_INFINITY, 0usize);
    let mut upper = (f64::NEG_INFINITY, 0usize);
    for i in 0..n {
        let x = i as f64 * step;
        let cap = upper_boundary(x);
        for j in 0..n {
            let y = j as f64 * step * cap;
            let v = f(x, y);
            if better((v, i, j), best) {
                best = (v, i, j);
            }
            if j == 0 && v > bottom.0 {
                bottom = (v, i);
            }
            if i == 0 && v > left.0 {
                left = (v, j);
            }
            if j == n - 1 && v > upper.0 {
                upper = (v, i);
            }
        }
    }

    let bracket = |k: usize| {
        let lo = k.saturating_sub(1) as f64 * step;
        let hi = ((k + 1).min(n - 1)) as f64 * step;
        (lo, hi)
    };

    let mut candidates: Vec<(f64, Segment, RegionPoint)> = Vec::with_capacity(4);
    let (lo, hi) = bracket(bottom.1);
    let x = golden_max(|x| f(x, 0.0), lo, hi, tol);
    candidates.push((f(x, 0.0), Segment::Bottom, RegionPoint { x, y: 0.0 }));

    let (lo, hi) = bracket(left.1);
    let y = golden_max(|y| f(0.0, y), 0.5 * lo, 0.5 * hi, tol);
    candidates.push((f(0.0, y), Segment::Left, RegionPoint { x: 0.0, y }));

    let (lo, hi) = bracket(upper.1);
    let x = golden_max(|x| f(x, upper_boundary(x)), lo, hi, tol);
    let y = upper_boundary(x);
    candidates.push((f(x, y), Segment::Upper, RegionPoint { x, y }));

    let (_, bi, bj) = best;
    if bi > 0 && bj > 0 && bj < n - 1 {
        let (mut x, mut y) = (
            bi as f64 * step,
            bj as f64 * step * upper_boundary(bi as f64 * step),
        );
        let (xlo, xhi) = bracket(bi);
        for _ in 0..8 {
            x = golden_max(|t| f(t, y.min(upper_boundary(t))), xlo, xhi, tol);
            y = y.min(upper_boundary(x));
            y = golden_max(
                |t| f(x, t),
                0.0_f64.max(y - step),
                (y + step).min(upper_boundary(x)),
                tol,
            );
        }
        candidates.push((f(x, y), Segment::Interior, RegionPoint { x, y }));
    }

    let (value, segment, argmax) = candidates
        .iter()
        .copied()
        .max_by(|a, b| {
            a.0.partial_cmp(&b.0)
                .unwrap_or(Ordering::Equal)
                .then(a.2.x.total_cmp(&b.2.x))
                .then(a.2.y.total_cmp(&b.2.y))
        })
        .expect("at least three candidates");
    let ties = candidates
        .iter()
        .filter(|c| c.0 == value && c.2 != argmax)
        .map(|c| (c.1, c.2))
        .collect();
    let lipschitz = objective.lipschitz(lambda);
    MaxResult {
        objective,
        lambda,
        argmax,
        value,
        segment,
        ties,
        grid: n,
        grid_value: best.0,
        grid_error_bound: lipschitz * step,
        tolerance: lipschitz * tol,
    }
}

fn better(candidate: (f64, usize, usize), current: (f64, usize, usize)) -> bool {
    match candidate.0.partial_cmp(&current.0) {
        Some(Ordering::Greater) => true,
        Some(Ordering::Equal) => (candidate.1, candidate.2) > (current.1, current.2),
        _ => false,
    }
}

/// Golden-section search for the maximum of a unimodal `f` on `[a, b]`;
/// the endpoints are compared against the interior result.
pub fn golden_max(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let (mut lo, mut hi) = (a.min(b), a.max(b));
    let mut x1 = hi - INV_GOLDEN * (hi - lo);
    let mut x2 = lo + INV_GOLDEN * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_GOLDEN * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_GOLDEN * (hi - lo);
            f1 = f(x1);
        }
    }
    let mid = 0.5 * (lo + hi);
    [a.min(b), a.max(b)]
        .into_iter()
        .fold(mid, |best, t| if f(t) > f(best) { t } else { best })
}

/// Smallest `lambda` in `[lo, hi]` (to within `tol`) from which the maximum
/// of `g1` over `E` sits at the corner `(1, 0)`, found by bisection.
pub fn g1_regime_crossover(lo: f64, hi: f64, tol: f64, opts: &MaximizeOptions) -> f64 {
    let corner = |l: f64| maximize_with(Objective::G1, l, opts).at_corner();
    let (mut lo, mut hi) = (lo, hi);
    debug_assert!(!corner(lo) && corner(hi));
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if corner(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClaimCheck {
    pub claim: &'static str,
    /// Whether the claim is asserted at this `lambda`.
    pub applies: bool,
    pub min_value: f64,
    pub max_value: f64,
    /// `min_value > 0` for strict claims, `>= 0` otherwise.
    pub holds: bool,
}

impl ClaimCheck {
    pub fn sign_change(&self) -> bool {
        self.min_value < 0.0 && self.max_value > 0.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityReport {
    pub lambda: f64,
    pub claims: Vec<ClaimCheck>,
}

impl MonotonicityReport {
    /// True when every claim that applies at this `lambda` holds.
    pub fn all_hold(&self) -> bool {
        self.claims.iter().all(|c| !c.applies || c.holds)
    }

    pub fn claim(&self, name: &str) -> Option<&ClaimCheck> {
        self.claims.iter().find(|c| c.claim == name)
    }
}

/// Samples `dg_i/dx` on an interior grid of `E` and `phi_i'` on `[0, 1]`.
pub fn check_monotonicity_claims(lambda: f64) -> MonotonicityReport {
    let n = MONOTONICITY_GRID;
    let mut claims = Vec::with_capacity(6);
    for (objective, claim) in [
        (Objective::G1, "dg1/dx > 0"),
        (Objective::G2, "dg2/dx > 0"),
        (Objective::G3, "dg3/dx > 0"),
    ] {
        let (mut min, mut max) = (f64::INFINITY, f64::NEG_INFINITY);
        for i in 0..n {
            let x = (i as f64 + 0.5) / n as f64;
            let cap = upper_boundary(x);
            for j in 0..n {
                let y = (j as f64 + 0.5) / n as f64 * cap;
                let d = objective.partial_x(x, y, lambda);
                min = min.min(d);
                max = max.max(d);
            }
        }
        claims.push(ClaimCheck {
            claim,
            applies: true,
            min_value: min,
            max_value: max,
            holds: min > 0.0,
        });
    }
    let samples = 1001;
    for (objective, claim, applies, strict) in [
        (Objective::G1, "phi1' >= 0", lambda >= lambda_star(), false),
        (
            Objective::G2,
            "phi2' >= 0",
            lambda >= gen_zalcman_threshold(),
            false,
        ),
        (Objective::G3, "phi3' > 0", true, true),
    ] {
        let (mut min, mut max) = (f64::INFINITY, f64::NEG_INFINITY);
        for k in 0..samples {
            let x = k as f64 / (samples - 1) as f64;
            let d = phi_derivative(objective, x, lambda);
            min = min.min(d);
            max = max.max(d);
        }
        let holds = if strict {
            min > 0.0
        } else {
            min >= -REGION_TOL
        };
        claims.push(ClaimCheck {
            claim,
            applies,
            min_value: min,
            max_value: max,
            holds,
        });
    }
    MonotonicityReport { lambda, claims }
}
