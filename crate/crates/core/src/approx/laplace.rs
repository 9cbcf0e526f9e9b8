//! Laplace-type approximations: densities proportional to `exp(T Q_T(x, θ)) w(θ)`,
//! optionally smoothed by a criterion function.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use super::calibration::CriterionFn;
use super::sample::Sample;
use crate::dist::{grid_density, uniform_spacing, Density1D};
use crate::error::{Error, Result};

type Objective = dyn Fn(&Sample, f64) -> f64 + Send + Sync;
type Weight = dyn Fn(f64) -> f64 + Send + Sync;

/// Per-observation objective `Q_T(x, θ)` and a nonnegative weight `w(θ)`.
#[derive(Clone)]
pub struct ObjectiveFn {
    eval: Arc<Objective>,
    weight: Arc<Weight>,
}

impl ObjectiveFn {
    pub fn new(eval: impl Fn(&Sample, f64) -> f64 + Send + Sync + 'static) -> Self {
        Self { eval: Arc::new(eval), weight: Arc::new(|_| 1.0) }
    }

    pub fn with_weight(mut self, weight: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.weight = Arc::new(weight);
        self
    }

    pub fn eval(&self, s: &Sample, theta: f64) -> f64 {
        (self.eval)(s, theta)
    }

    pub fn weight(&self, theta: f64) -> f64 {
        (self.weight)(theta)
    }
}

impl fmt::Debug for ObjectiveFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ObjectiveFn").finish_non_exhaustive()
    }
}

/// Grid density proportional to `exp(T Q_T(s, θ)) w(θ)`, evaluated in the log domain.
pub fn laplace_approx(obj: &ObjectiveFn, s: &Sample, grid: &[f64], t: usize) -> Result<Density1D> {
    uniform_spacing(grid)?;
    let tf = t as f64;
    let mut log_values = Vec::with_capacity(grid.len());
    for &theta in grid {
        let q = obj.eval(s, theta);
        if q.is_nan() {
            return Err(Error::Objective(format!("Q_T is NaN at θ = {theta}")));
        }
        let w = obj.weight(theta);
        if !(w >= 0.0) || w.is_infinite() {
            return Err(Error::Objective(format!("weight {w} at θ = {theta} is not finite and >= 0")));
        }
        log_values.push(tf * q + w.ln());
    }
    let max = log_values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return Err(Error::DegenerateObjective("exp(T Q_T) w vanishes on the whole grid".into()));
    }
    if max == f64::INFINITY {
        return Err(Error::Objective("T Q_T is +inf on the grid".into()));
    }
    let raw = log_values.into_iter().map(|l| (l - max).exp()).collect();
    grid_density(grid.to_vec(), raw)
}

/// Expected criterion under the Laplace density:
/// `f(θ_i) ∝ Σ_j ω_j u(θ_i, θ_j) laplace(θ_j)` with trapezoid weights `ω_j`.
pub fn criterion_adjusted_laplace(
    u: &CriterionFn,
    obj: &ObjectiveFn,
    s: &Sample,
    grid: &[f64],
    t: usize,
) -> Result<Density1D> {
    let inner = laplace_approx(obj, s, grid, t)?;
    let weighted = inner.point_masses();
    let raw: Vec<f64> = grid
        .par_iter()
        .map(|&theta| grid.iter().zip(&weighted).map(|(&theta_dot, &m)| u.eval(theta, theta_dot) * m).sum())
        .collect();
    if raw.iter().any(|v: &f64| !v.is_finite()) {
        return Err(Error::DegenerateCriterion("criterion is unbounded on the grid".into()));
    }
    grid_density(grid.to_vec(), raw).map_err(|e| match e {
        Error::DegenerateInput(m) => Error::DegenerateCriterion(m),
        other => other,
    })
}
