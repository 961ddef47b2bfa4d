//! Numerical laboratory for the class `U(lambda)`, `0 < lambda <= 1`, of
//! normalized analytic functions `f(z) = z + a_2 z^2 + ...` on the unit disk
//! with `|(z/f(z))^2 f'(z) - 1| < lambda`.
//!
//! The crate is `no_std` (it needs `alloc`) and covers:
//!
//! * [`series`]: truncated complex power series and the `U_f` transform,
//! * [`roots`]: polynomial zeros through the companion matrix,
//! * [`schwarz`]: Schwarz-type functions `w` with `|w'| <= 1` and the
//!   admissible region of their first three coefficients,
//! * [`class`]: members built from `z/f = 1 - a_2 z - lambda z w(z)`,
//!   membership sampling and the extremal catalog,
//! * [`functionals`]: Zalcman, generalized Zalcman, Krushkal and Hankel
//!   functionals with their bounds,
//! * [`optimizer`]: maxima of the auxiliary functions over the region
//!   `0 <= x <= 1, 0 <= y <= (1 - x^2)/2`.
#![no_std]

extern crate alloc;

pub mod class;
pub mod error;
pub mod functionals;
pub mod optimizer;
pub mod roots;
pub mod schwarz;
pub mod series;

pub use num_complex::Complex64;

pub use class::{
    a3_condition_holds, build_member, build_member_with, check_membership,
    coefficients_from_schwarz, extremal_f_lambda, extremal_hankel3, extremal_rotation,
    f_lambda_coefficient, rebuild_member, Member, MembershipGrid, MembershipReport, Provenance,
};
pub use error::{Error, Result};
pub use functionals::{
    bound_for, eval_functional, functional_value, verify_member_against_bounds, BoundCheck,
    BoundRecord, FunctionalKind, Regime, Validity, Verdict, Witness,
};
pub use optimizer::{
    check_monotonicity_claims, maximize_over_region, maximize_with, MaxResult, MaximizeOptions,
    MonotonicityReport, Objective, RegionPoint,
};
pub use schwarz::{
    is_admissible_triple, make_schwarz, sample_psi, sample_triple, sup_norm_on_circle, CoefTriple,
    SchwarzFn,
};
pub use series::{u_transform, PowerSeries};
