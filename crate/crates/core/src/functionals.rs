//! Coefficient functionals and their bounds over `U(lambda)`.
//!
//! | functional            | bound                                    | regime                          |
//! |-----------------------|------------------------------------------|---------------------------------|
//! | `a2^2 - a3`           | `lambda`                                 | always                          |
//! | `a3^2 - a5`           | `lambda (1 + lambda)^2`                  | `lambda >= lambda*`, a3-cond.   |
//! |                       | `lambda [(2/3) s^{3/2} - 1 - lambda^2]`  | `lambda < lambda*`, a3-cond.    |
//! | `a2 a3 - a4`          | `lambda (1 + lambda)`                    | always                          |
//! | `a2 a4 - a5`          | `lambda (1 + lambda + lambda^2)`         | `lambda >= sqrt(2/3)`, a3-cond. |
//! | `a4 - a2^3`           | `2 lambda (1 + lambda)`                  | always                          |
//! | `a5 - a2^4`           | `lambda (3 + 5 lambda + 3 lambda^2)`     | a3-cond.                        |
//! | `a2 a4 - a3^2`        | `lambda (1 + lambda) / 2`                | always, not sharp               |
//! | `H_3(1)`              | `lambda^2 / 4`                           | always                          |
//!
//! with `s = lambda^2 + lambda + 7/3` and `lambda*` the positive root of
//! `lambda^2 + lambda - 5/3`. The a3-condition is `|a3| <= 1 + lambda + lambda^2`.

use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
use num_traits::Float;

use crate::class::{a3_condition_holds, Member};
use crate::error::{Error, Result};

/// Slack used when comparing a functional value with its bound.
pub const VERIFY_TOL: f64 = 1e-9;

/// Highest coefficient index available to the functionals.
pub const MAX_INDEX: usize = 5;

/// Positive root of `lambda^2 + lambda - 5/3`, about 0.884437. Below it the
/// bound on `|a3^2 - a5|` is the interior-maximum value.
pub fn lambda_star() -> f64 {
    0.5 * (Float::sqrt(23.0f64 / 3.0) - 1.0)
}

/// `sqrt(2/3)`, the lower end of the regime where `|a2 a4 - a5|` is bounded.
pub fn gen_zalcman_threshold() -> f64 {
    Float::sqrt(2.0f64 / 3.0)
}

/// `lambda [(2/3)(lambda^2 + lambda + 7/3)^{3/2} - 1 - lambda^2]`.
pub fn zalcman3_interior_bound(lambda: f64) -> f64 {
    let s = lambda * lambda + lambda + 7.0 / 3.0;
    lambda * (2.0 / 3.0 * Float::powf(s, 1.5) - 1.0 - lambda * lambda)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FunctionalKind {
    /// `a_n^2 - a_{2n-1}`
    Zalcman(u32),
    /// `a_m a_n - a_{m+n-1}`
    GenZalcman(u32, u32),
    /// `a_n^p - a_2^{p(n-1)}`, fields `(n, p)`
    Krushkal(u32, u32),
    /// `H_q(n)`, fields `(q, n)`
    Hankel(u32, u32),
}

impl FunctionalKind {
    /// The eight instances with known bounds, in reporting order.
    pub const SUPPORTED: [FunctionalKind; 8] = [
        FunctionalKind::Zalcman(2),
        FunctionalKind::Zalcman(3),
        FunctionalKind::GenZalcman(2, 3),
        FunctionalKind::GenZalcman(2, 4),
        FunctionalKind::Krushkal(4, 1),
        FunctionalKind::Krushkal(5, 1),
        FunctionalKind::Hankel(2, 2),
        FunctionalKind::Hankel(3, 1),
    ];

    fn max_index(self) -> usize {
        let idx = match self {
            FunctionalKind::Zalcman(n) => 2 * n as usize - 1,
            FunctionalKind::GenZalcman(m, n) => (m + n) as usize - 1,
            FunctionalKind::Krushkal(n, _) => n as usize,
            FunctionalKind::Hankel(q, n) => (n + 2 * q) as usize - 2,
        };
        idx.max(2)
    }

    /// Parses the `Display` form, e.g. `GenZalcman(2,4)`.
    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        let open = s.find('(')?;
        let args = s[open..].strip_prefix('(')?.strip_suffix(')')?;
        let mut nums = args.split(',').map(|a| a.trim().parse::<u32>());
        let first = nums.next()?.ok()?;
        let second = nums.next().map(|r| r.ok());
        if nums.next().is_some() {
            return None;
        }
        match (&s[..open], second) {
            ("Zalcman", None) => Some(FunctionalKind::Zalcman(first)),
            ("GenZalcman", Some(Some(n))) => Some(FunctionalKind::GenZalcman(first, n)),
            ("Krushkal", Some(Some(p))) => Some(FunctionalKind::Krushkal(first, p)),
            ("Hankel", Some(Some(n))) => Some(FunctionalKind::Hankel(first, n)),
            _ => None,
        }
    }
}

impl fmt::Display for FunctionalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FunctionalKind::Zalcman(n) => write!(f, "Zalcman({n})"),
            FunctionalKind::GenZalcman(m, n) => write!(f, "GenZalcman({m},{n})"),
            FunctionalKind::Krushkal(n, p) => write!(f, "Krushkal({n},{p})"),
            FunctionalKind::Hankel(q, n) => write!(f, "Hankel({q},{n})"),
        }
    }
}

/// Signed value of a functional from `[a_1, ..., a_5]`.
pub fn functional_value(kind: FunctionalKind, a: &[Complex64; 5]) -> Result<Complex64> {
    let degenerate = match kind {
        FunctionalKind::Zalcman(n) => n == 0,
        FunctionalKind::GenZalcman(m, n) => m == 0 || n == 0,
        FunctionalKind::Krushkal(n, _) => n == 0,
        FunctionalKind::Hankel(q, n) => q == 0 || n == 0,
    };
    if degenerate {
        return Err(Error::IndexOutOfRange { kind, index: 0 });
    }
    let index = kind.max_index();
    if index > MAX_INDEX {
        return Err(Error::IndexOutOfRange { kind, index });
    }
    let at = |n: u32| a[n as usize - 1];
    Ok(match kind {
        FunctionalKind::Zalcman(n) => at(n) * at(n) - at(2 * n - 1),
        FunctionalKind::GenZalcman(m, n) => at(m) * at(n) - at(m + n - 1),
        FunctionalKind::Krushkal(n, p) => at(n).powu(p) - at(2).powu(p * (n - 1)),
        FunctionalKind::Hankel(q, n) => {
            let q = q as usize;
            let mut matrix = [[Complex64::new(0.0, 0.0); 3]; 3];
            for (i, row) in matrix.iter_mut().enumerate().take(q) {
                for (j, entry) in row.iter_mut().enumerate().take(q) {
                    *entry = a[n as usize - 1 + i + j];
                }
            }
            determinant(&matrix, q)
        }
    })
}

fn determinant(m: &[[Complex64; 3]; 3], q: usize) -> Complex64 {
    match q {
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        _ => {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        }
    }
}

/// Modulus of the functional on a member.
pub fn eval_functional(kind: FunctionalKind, m: &Member) -> Result<f64> {
    functional_value(kind, &m.coefficients()).map(|v| v.norm())
}

/// Catalog member attaining a sharp bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Witness {
    FLambda,
    Hankel3,
}

impl Witness {
    pub fn as_str(self) -> &'static str {
        match self {
            Witness::FLambda => "f_lambda",
            Witness::Hankel3 => "hankel3",
        }
    }
}

/// Hypotheses a bound needs beyond membership.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Validity {
    pub min_lambda: Option<f64>,
    pub requires_a3: bool,
}

impl Validity {
    pub const UNCONDITIONAL: Validity = Validity {
        min_lambda: None,
        requires_a3: false,
    };

    pub fn is_unconditional(&self) -> bool {
        self.min_lambda.is_none() && !self.requires_a3
    }
}

impl fmt::Display for Validity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.min_lambda, self.requires_a3) {
            (None, false) => f.write_str("unconditional"),
            (None, true) => f.write_str("requires a3-condition"),
            (Some(t), false) => write!(f, "lambda >= {t:.6}"),
            (Some(t), true) => write!(f, "lambda >= {t:.6} and requires a3-condition"),
        }
    }
}

/// Which statement supplies the bound value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// Closed-form bound of a theorem, attained at the corner `(1, 0)`.
    Theorem,
    /// Interior maximum on the upper boundary of the region (`|a3^2 - a5|`,
    /// `lambda < lambda*`).
    Interior,
    /// No bound is proved at this `lambda`.
    Silent,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Theorem => "theorem",
            Regime::Interior => "interior",
            Regime::Silent => "silent",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundRecord {
    pub kind: FunctionalKind,
    pub lambda: f64,
    pub value: f64,
    pub valid_iff: Validity,
    pub regime: Regime,
    pub sharp: bool,
    pub witness: Option<Witness>,
}

impl BoundRecord {
    /// Whether the bound applies at its `lambda` at all.
    pub fn applies(&self) -> bool {
        self.regime != Regime::Silent
    }
}

pub fn bound_for(kind: FunctionalKind, lambda: f64) -> Result<BoundRecord> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::InvalidLambda(lambda));
    }
    let l = lambda;
    let a3_cond = Validity {
        min_lambda: None,
        requires_a3: true,
    };
    let theorem = |value: f64, valid_iff: Validity, witness: Witness| BoundRecord {
        kind,
        lambda,
        value,
        valid_iff,
        regime: Regime::Theorem,
        sharp: true,
        witness: Some(witness),
    };
    let record = match kind {
        FunctionalKind::Zalcman(2) => theorem(l, Validity::UNCONDITIONAL, Witness::FLambda),
        FunctionalKind::Zalcman(3) => {
            if l >= lambda_star() {
                theorem(l * (1.0 + l) * (1.0 + l), a3_cond, Witness::FLambda)
            } else {
                BoundRecord {
                    kind,
                    lambda,
                    value: zalcman3_interior_bound(l),
                    valid_iff: a3_cond,
                    regime: Regime::Interior,
                    sharp: false,
                    witness: None,
                }
            }
        }
        FunctionalKind::GenZalcman(2, 3) => {
            theorem(l * (1.0 + l), Validity::UNCONDITIONAL, Witness::FLambda)
        }
        FunctionalKind::GenZalcman(2, 4) => {
            let threshold = gen_zalcman_threshold();
            let valid_iff = Validity {
                min_lambda: Some(threshold),
                requires_a3: true,
            };
            let mut r = theorem(l * (1.0 + l + l * l), valid_iff, Witness::FLambda);
            if l < threshold {
                r.regime = Regime::Silent;
                r.sharp = false;
                r.witness = None;
            }
            r
        }
        FunctionalKind::Krushkal(4, 1) => theorem(
            2.0 * l * (1.0 + l),
            Validity::UNCONDITIONAL,
            Witness::FLambda,
        ),
        FunctionalKind::Krushkal(5, 1) => {
            theorem(l * (3.0 + 5.0 * l + 3.0 * l * l), a3_cond, Witness::FLambda)
        }
        FunctionalKind::Hankel(2, 2) => BoundRecord {
            kind,
            lambda,
            value: 0.5 * l * (1.0 + l),
            valid_iff: Validity::UNCONDITIONAL,
            regime: Regime::Theorem,
            sharp: false,
            witness: None,
        },
        FunctionalKind::Hankel(3, 1) => {
            theorem(0.25 * l * l, Validity::UNCONDITIONAL, Witness::Hankel3)
        }
        other => return Err(Error::UnsupportedKind(other)),
    };
    Ok(record)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Violated,
    /// The bound needs the a3-condition and the member fails it.
    ConditionalSkipped,
    /// No bound is proved at this `lambda`; the value is reported only.
    NotApplicable,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundCheck {
    pub kind: FunctionalKind,
    pub signed: Complex64,
    pub value: f64,
    pub bound: BoundRecord,
    pub verdict: Verdict,
}

impl BoundCheck {
    pub fn ok(&self) -> bool {
        self.verdict != Verdict::Violated
    }

    pub fn conditional_skipped(&self) -> bool {
        self.verdict == Verdict::ConditionalSkipped
    }
}

/// Evaluates every supported functional on `m` against its bound.
pub fn verify_member_against_bounds(m: &Member) -> Vec<BoundCheck> {
    let a3_ok = a3_condition_holds(m);
    let coeffs = m.coefficients();
    FunctionalKind::SUPPORTED
        .iter()
        .map(|&kind| {
            let signed = functional_value(kind, &coeffs).expect("supported kinds stay within a_5");
            let bound = bound_for(kind, m.lambda()).expect("member lambda is valid");
            let value = signed.norm();
            let verdict = if !bound.applies() {
                Verdict::NotApplicable
            } else if bound.valid_iff.requires_a3 && !a3_ok {
                Verdict::ConditionalSkipped
            } else if value <= bound.value + VERIFY_TOL {
                Verdict::Holds
            } else {
                Verdict::Violated
            };
            BoundCheck {
                kind,
                signed,
                value,
                bound,
                verdict,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::class::{build_member, extremal_f_lambda, extremal_hankel3};
    use crate::schwarz::SchwarzFn;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn kind_display_and_parse() {
        for kind in FunctionalKind::SUPPORTED {
            let text = alloc::format!("{kind}");
            assert_eq!(FunctionalKind::parse(&text), Some(kind));
        }
        assert_eq!(
            FunctionalKind::parse(" GenZalcman( 2 , 4 ) "),
            Some(FunctionalKind::GenZalcman(2, 4))
        );
        assert_eq!(FunctionalKind::parse("Zalcman(2,3)"), None);
        assert_eq!(FunctionalKind::parse("Hankel(3)"), None);
        assert_eq!(FunctionalKind::parse("Other(1)"), None);
    }

    #[test]
    fn hankel3_matches_expanded_form() {
        let a = [
            c(1.0),
            c(0.3),
            Complex64::new(-0.2, 0.7),
            c(1.1),
            Complex64::new(0.4, -0.5),
        ];
        let (a2, a3, a4, a5) = (a[1], a[2], a[3], a[4]);
        let expanded = a3 * (a2 * a4 - a3 * a3) - a4 * (a4 - a2 * a3) + a5 * (a3 - a2 * a2);
        let h = functional_value(FunctionalKind::Hankel(3, 1), &a).unwrap();
        assert!((h - expanded).norm() < 1e-14);
        let h22 = functional_value(FunctionalKind::Hankel(2, 2), &a).unwrap();
        assert!((h22 - (a2 * a4 - a3 * a3)).norm() < 1e-15);
    }

    #[test]
    fn index_out_of_range() {
        let m = extremal_f_lambda(0.5).unwrap();
        for kind in [
            FunctionalKind::Zalcman(4),
            FunctionalKind::GenZalcman(3, 4),
            FunctionalKind::Krushkal(6, 1),
            FunctionalKind::Hankel(3, 2),
            FunctionalKind::Zalcman(0),
        ] {
            assert!(matches!(
                eval_functional(kind, &m),
                Err(Error::IndexOutOfRange { .. })
            ));
        }
        // general instances within range evaluate
        assert!(eval_functional(FunctionalKind::Hankel(2, 1), &m).is_ok());
        assert!(eval_functional(FunctionalKind::Krushkal(3, 2), &m).is_ok());
    }

    #[test]
    fn functional_examples() {
        let m = extremal_f_lambda(0.5).unwrap();
        let z2 = eval_functional(FunctionalKind::Zalcman(2), &m).unwrap();
        assert!((z2 - 0.5).abs() < 1e-15);
        let g24 = eval_functional(FunctionalKind::GenZalcman(2, 4), &m).unwrap();
        assert!((g24 - 0.875).abs() < 1e-15);
        let h = extremal_hankel3(0.5).unwrap();
        let h31 = eval_functional(FunctionalKind::Hankel(3, 1), &h).unwrap();
        assert!((h31 - 0.0625).abs() < 1e-15);
    }

    #[test]
    fn bound_examples() {
        let r = bound_for(FunctionalKind::Zalcman(2), 0.3).unwrap();
        assert_eq!(r.value, 0.3);
        assert!(r.sharp);
        assert_eq!(r.witness, Some(Witness::FLambda));
        assert!(r.valid_iff.is_unconditional());

        let r = bound_for(FunctionalKind::Zalcman(3), 0.5).unwrap();
        assert_eq!(r.regime, Regime::Interior);
        assert!((r.value - 1.179_718_466_923_85).abs() < 1e-12);
        assert!(!r.sharp);
        assert!(r.valid_iff.requires_a3);

        let r = bound_for(FunctionalKind::Zalcman(3), 0.9).unwrap();
        assert_eq!(r.regime, Regime::Theorem);
        assert!((r.value - 0.9 * 1.9 * 1.9).abs() < 1e-15);

        let r = bound_for(FunctionalKind::Hankel(2, 2), 1.0).unwrap();
        assert_eq!(r.value, 1.0);
        assert!(!r.sharp);
        let r = bound_for(FunctionalKind::Hankel(3, 1), 1.0).unwrap();
        assert_eq!(r.value, 0.25);
        assert_eq!(r.witness, Some(Witness::Hankel3));

        let r = bound_for(FunctionalKind::GenZalcman(2, 4), 0.5).unwrap();
        assert_eq!(r.regime, Regime::Silent);
        assert!(!r.applies());
        assert_eq!(r.valid_iff.min_lambda, Some(gen_zalcman_threshold()));
        let r = bound_for(FunctionalKind::GenZalcman(2, 4), 0.9).unwrap();
        assert!(r.applies() && r.sharp);

        assert!(matches!(
            bound_for(FunctionalKind::Zalcman(4), 0.5),
            Err(Error::UnsupportedKind(_))
        ));
        assert!(matches!(
            bound_for(FunctionalKind::Zalcman(2), 0.0),
            Err(Error::InvalidLambda(_))
        ));
    }

    #[test]
    fn zalcman3_regimes_meet_at_threshold() {
        let l = lambda_star();
        assert!((l * l + l - 5.0 / 3.0).abs() < 1e-15);
        let corner = l * (1.0 + l) * (1.0 + l);
        assert!((zalcman3_interior_bound(l) - corner).abs() < 1e-12);
        // below the threshold the interior value dominates the corner value
        for l in [0.1, 0.4, 0.7, 0.88] {
            assert!(zalcman3_interior_bound(l) > l * (1.0 + l) * (1.0 + l));
        }
    }

    #[test]
    fn verify_f_half() {
        let m = extremal_f_lambda(0.5).unwrap();
        let checks = verify_member_against_bounds(&m);
        assert_eq!(checks.len(), 8);
        for check in &checks {
            assert!(check.ok(), "{check:?}");
        }
        for kind in [
            FunctionalKind::Zalcman(2),
            FunctionalKind::GenZalcman(2, 3),
            FunctionalKind::Krushkal(4, 1),
            FunctionalKind::Krushkal(5, 1),
        ] {
            let check = checks.iter().find(|ch| ch.kind == kind).unwrap();
            assert_eq!(check.verdict, Verdict::Holds);
            assert!((check.value - check.bound.value).abs() < 1e-12, "{kind}");
        }
        let g24 = checks
            .iter()
            .find(|ch| ch.kind == FunctionalKind::GenZalcman(2, 4))
            .unwrap();
        assert_eq!(g24.verdict, Verdict::NotApplicable);
    }

    #[test]
    fn verify_identity() {
        let m = build_member(0.4, c(0.0), SchwarzFn::zero()).unwrap();
        for check in verify_member_against_bounds(&m) {
            assert_eq!(check.value, 0.0);
            assert!(check.ok());
        }
    }

    #[test]
    fn verify_hankel_witness() {
        let m = extremal_hankel3(1.0).unwrap();
        let checks = verify_member_against_bounds(&m);
        let h = checks
            .iter()
            .find(|ch| ch.kind == FunctionalKind::Hankel(3, 1))
            .unwrap();
        assert!((h.value - 0.25).abs() < 1e-15);
        assert!((h.bound.value - 0.25).abs() < 1e-15);
        assert_eq!(h.verdict, Verdict::Holds);
    }
}
