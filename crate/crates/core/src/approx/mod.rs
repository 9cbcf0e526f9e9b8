//! Builders for approximations of the generic-proxy law.

pub mod calibration;
pub mod gaussian;
pub mod laplace;
pub mod sample;

pub use calibration::{criterion_adjusted_calibration, plain_calibration, CriterionFn};
pub use gaussian::{gaussian_approx, gaussian_approx_known_sd, gaussian_approx_mv, gaussian_approx_with};
pub use laplace::{criterion_adjusted_laplace, laplace_approx, ObjectiveFn};
pub(crate) use sample::{mean, sd};
pub use sample::{sample_mean, sample_sd, Sample, SdConvention};
