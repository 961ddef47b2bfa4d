//! Command-line harness around [`ulambda_core`]: run configuration, report
//! formats, the randomized member search and golden-file comparison.
//!
//! Each command has a library entry point so the same runs can be driven
//! from tests:
//!
//! | command            | entry point                          |
//! |--------------------|--------------------------------------|
//! | `verify-sharpness` | [`sharpness::verify_sharpness`]      |
//! | `random-search`    | [`search::random_search`]            |
//! | `maximize`         | [`maximize::maximize`]               |
//! | `monotonicity`     | [`monotonicity::monotonicity`]       |
//! | `reproduce-all`    | [`reproduce::reproduce_all`]         |

pub mod config;
pub mod error;
pub mod formats;
pub mod golden;
pub mod maximize;
pub mod monotonicity;
pub mod report;
pub mod reproduce;
pub mod search;
pub mod sharpness;

pub use config::{Format, Overrides, RunConfig};
pub use error::{LabError, Result};
