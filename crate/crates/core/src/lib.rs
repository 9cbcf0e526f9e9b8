//! Highest-density inference on approximated proxy laws.
//!
//! A *proxy* is a statistic such as the sample mean. Its sampling law is approximated
//! (Gaussian, calibration point mass, criterion-smoothed, Laplace quasi-posterior) and the
//! resulting density drives a mode estimate, highest-density regions and tests.
//! [`montecarlo`] measures how well the Gaussian approximation does against exact laws,
//! and [`adjustment`] provides the √2 standard-error correction for its bias.

// `!(x > 0.0)` deliberately rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod adjustment;
pub mod approx;
pub mod cli;
pub mod dist;
pub mod error;
pub mod inference;
pub mod metrics;
pub mod montecarlo;
pub mod objectives;
pub mod output;

pub use error::{Error, Result};
