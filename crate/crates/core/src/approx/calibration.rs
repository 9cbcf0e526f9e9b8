use std::fmt;
use std::sync::Arc;

use crate::dist::{dirac, grid_density, Density1D};
use crate::error::{Error, Result};

type Kernel = dyn Fn(f64, f64) -> f64 + Send + Sync;

/// Nonnegative criterion `u(θ, θ')`, maximal on the diagonal.
#[derive(Clone)]
pub struct CriterionFn {
    eval: Arc<Kernel>,
    bounds: (f64, f64),
}

impl CriterionFn {
    pub fn new(bounds: (f64, f64), eval: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Self { eval: Arc::new(eval), bounds }
    }

    /// `1{|θ - θ'| <= half_width}`.
    pub fn indicator(half_width: f64) -> Self {
        Self::new((f64::NEG_INFINITY, f64::INFINITY), move |a, b| if (a - b).abs() <= half_width { 1.0 } else { 0.0 })
    }

    /// `exp(-(θ - θ')² / (2 τ²))`.
    pub fn gaussian_kernel(tau: f64) -> Self {
        Self::new((f64::NEG_INFINITY, f64::INFINITY), move |a, b| {
            let d = (a - b) / tau;
            (-0.5 * d * d).exp()
        })
    }

    /// Same criterion multiplied by a positive constant.
    pub fn scaled(&self, factor: f64) -> Self {
        let inner = self.eval.clone();
        Self { eval: Arc::new(move |a, b| factor * inner(a, b)), bounds: self.bounds }
    }

    pub fn eval(&self, theta: f64, theta_prime: f64) -> f64 {
        if theta < self.bounds.0 || theta > self.bounds.1 {
            return 0.0;
        }
        (self.eval)(theta, theta_prime)
    }

    pub fn bounds(&self) -> (f64, f64) {
        self.bounds
    }
}

impl fmt::Debug for CriterionFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CriterionFn").field("bounds", &self.bounds).finish_non_exhaustive()
    }
}

/// Unit point mass at the selected parameter value.
pub fn plain_calibration(theta_star: f64) -> Result<Density1D> {
    if !theta_star.is_finite() {
        return Err(Error::InvalidParameter(format!("calibrated value {theta_star} is not finite")));
    }
    dirac(theta_star)
}

/// Density proportional to `θ ↦ u(θ, θ*)` on the grid.
pub fn criterion_adjusted_calibration(u: &CriterionFn, theta_star: f64, grid: &[f64]) -> Result<Density1D> {
    let raw: Vec<f64> = grid.iter().map(|&t| u.eval(t, theta_star)).collect();
    if raw.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
        return Err(Error::DegenerateCriterion("criterion must be finite and >= 0".into()));
    }
    grid_density(grid.to_vec(), raw).map_err(|e| match e {
        Error::DegenerateInput(_) => {
            Error::DegenerateCriterion(format!("criterion integrates to zero around {theta_star}"))
        }
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{linspace, GaussianLaw, Measure};

    #[test]
    fn plain_is_dirac() {
        let d = plain_calibration(2.5).unwrap();
        assert_eq!(d.measure(), Measure::Counting);
        assert_eq!(d.points(), vec![2.5]);
        assert_eq!(d.values(), vec![1.0]);
    }

    #[test]
    fn indicator_gives_uniform() {
        let grid = linspace(-1.0, 1.0, 2001);
        let d = criterion_adjusted_calibration(&CriterionFn::indicator(0.5), 0.0, &grid).unwrap();
        // Uniform on [-.5, .5] up to the O(h) jump at the edges.
        let h = d.spacing().unwrap();
        let height = d.values()[1000];
        assert!((height - 1.0).abs() <= 2.0 * h);
        for (x, v) in d.points().iter().zip(d.values()) {
            if x.abs() < 0.499 {
                assert_eq!(v, height, "x = {x}");
            } else if x.abs() > 0.501 {
                assert_eq!(v, 0.0);
            }
        }
    }

    #[test]
    fn gaussian_kernel_gives_standard_normal() {
        let grid = linspace(-8.0, 8.0, 2001);
        let d = criterion_adjusted_calibration(&CriterionFn::gaussian_kernel(1.0), 0.0, &grid).unwrap();
        let law = GaussianLaw::standard();
        for (x, v) in d.points().iter().zip(d.values()) {
            assert!((v - law.pdf(*x)).abs() < 1e-10);
        }
    }

    #[test]
    fn zero_criterion_is_degenerate() {
        let grid = linspace(-1.0, 1.0, 101);
        let u = CriterionFn::indicator(0.1);
        let err = criterion_adjusted_calibration(&u, 5.0, &grid).unwrap_err();
        assert!(matches!(err, Error::DegenerateCriterion(_)));
    }

    #[test]
    fn scale_invariant() {
        let grid = linspace(-4.0, 4.0, 801);
        let u = CriterionFn::gaussian_kernel(0.7);
        let a = criterion_adjusted_calibration(&u, 0.3, &grid).unwrap();
        let b = criterion_adjusted_calibration(&u.scaled(1234.5), 0.3, &grid).unwrap();
        let sup = a.values().iter().zip(b.values()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        assert!(sup <= 1e-9);
    }
}
