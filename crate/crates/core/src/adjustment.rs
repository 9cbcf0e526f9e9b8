//! The √2 standard-error adjustment and its level conversions.
//!
//! With a Gaussian approximation whose center and scale are both estimated,
//! `√T (θ* - θ•) / ŝ` is asymptotically `N(0, √2)`. Widening the interval by
//! `√2` restores the nominal level; leaving it unadjusted shrinks coverage to
//! `2Φ(u / √2) - 1`.

use serde::{Deserialize, Serialize};

use crate::dist::{standard_normal_cdf, standard_normal_quantile};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalSpec {
    pub center: f64,
    pub se: f64,
    pub level: f64,
    pub adjusted: bool,
}

impl IntervalSpec {
    pub fn new(center: f64, se: f64, level: f64, adjusted: bool) -> Result<Self> {
        if !(se >= 0.0) || !se.is_finite() {
            return Err(Error::domain(format!("standard error must be finite and >= 0, got {se}")));
        }
        if !(level > 0.0 && level < 1.0) {
            return Err(Error::domain(format!("level must lie in (0,1), got {level}")));
        }
        Ok(Self { center, se, level, adjusted })
    }

    pub fn endpoints(&self) -> (f64, f64) {
        let alpha = 1.0 - self.level;
        let u = standard_normal_quantile(1.0 - alpha / 2.0).expect("level checked in constructor");
        let scale = if self.adjusted { std::f64::consts::SQRT_2 } else { 1.0 };
        let half = scale * self.se * u;
        (self.center - half, self.center + half)
    }
}

fn open_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("alpha must lie in (0,1), got {alpha}")))
    }
}

fn half_open_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("alpha must lie in (0,1], got {alpha}")))
    }
}

/// `u_{1-α/2}`, with `u_{1/2} = 0` at `α = 1`.
fn upper_quantile(alpha: f64) -> f64 {
    if alpha == 1.0 {
        0.0
    } else {
        standard_normal_quantile(1.0 - alpha / 2.0).expect("alpha checked by caller")
    }
}

/// `center ∓ se · u_{1-α/2}`.
pub fn unadjusted_interval(center: f64, se: f64, alpha: f64) -> Result<(f64, f64)> {
    open_alpha(alpha)?;
    Ok(IntervalSpec::new(center, se, 1.0 - alpha, false)?.endpoints())
}

/// `center ∓ √2 · se · u_{1-α/2}`.
pub fn adjusted_interval(center: f64, se: f64, alpha: f64) -> Result<(f64, f64)> {
    open_alpha(alpha)?;
    Ok(IntervalSpec::new(center, se, 1.0 - alpha, true)?.endpoints())
}

/// Asymptotic rejection rate of an unadjusted size-`α` test: `2(1 - Φ(u_{1-α/2} / √2))`.
pub fn nominal_to_adjusted(alpha: f64) -> Result<f64> {
    half_open_alpha(alpha)?;
    let u = upper_quantile(alpha);
    Ok(2.0 * standard_normal_cdf(-u / std::f64::consts::SQRT_2))
}

/// Unadjusted level needed for an adjusted size `α`: `2(1 - Φ(√2 · u_{1-α/2}))`.
pub fn adjusted_to_nominal(alpha: f64) -> Result<f64> {
    half_open_alpha(alpha)?;
    let u = upper_quantile(alpha);
    Ok(2.0 * standard_normal_cdf(-std::f64::consts::SQRT_2 * u))
}

/// `√2 · c`.
pub fn adjust_critical_value(c: f64) -> Result<f64> {
    if !(c >= 0.0) || !c.is_finite() {
        return Err(Error::domain(format!("critical value must be finite and >= 0, got {c}")));
    }
    Ok(std::f64::consts::SQRT_2 * c)
}

/// `P(u_{α/2} <= N(0, √2) <= u_{1-α/2}) = 2Φ(u_{1-α/2} / √2) - 1`.
pub fn asymptotic_unadjusted_coverage(alpha: f64) -> Result<f64> {
    open_alpha(alpha)?;
    let u = upper_quantile(alpha);
    Ok(1.0 - 2.0 * standard_normal_cdf(-u / std::f64::consts::SQRT_2))
}

/// Points `(α, nominal_to_adjusted(α))` for plotting.
pub fn conversion_curve(alphas: &[f64]) -> Result<Vec<(f64, f64)>> {
    alphas.iter().map(|&a| Ok((a, nominal_to_adjusted(a)?))).collect()
}

/// `n` evenly spaced levels on `(0, 1]`, ending at 1.
pub fn default_curve_grid(n: usize) -> Vec<f64> {
    (1..=n).map(|i| i as f64 / n as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn intervals() {
        let (l, u) = unadjusted_interval(0.0, 1.0, 0.05).unwrap();
        assert!((u - 1.959_964).abs() < 1e-6 && (l + 1.959_964).abs() < 1e-6);
        assert_eq!(unadjusted_interval(3.0, 0.0, 0.1).unwrap(), (3.0, 3.0));
        let (l, u) = unadjusted_interval(2.0, 0.1, 0.32).unwrap();
        assert!((l - 1.900_554).abs() < 1e-4 && (u - 2.099_446).abs() < 1e-4);
        let (l, u) = adjusted_interval(0.0, 1.0, 0.05).unwrap();
        assert!((u - 2.771_808).abs() < 1e-5 && (l + 2.771_808).abs() < 1e-5);
        assert_eq!(adjusted_interval(3.0, 0.0, 0.1).unwrap(), (3.0, 3.0));
        assert!(unadjusted_interval(0.0, 1.0, 0.0).is_err());
        assert!(adjusted_interval(0.0, -1.0, 0.05).is_err());
    }

    #[test]
    fn width_ratio_is_sqrt2() {
        for &(c, se, a) in &[(0.0, 1.0, 0.05), (5.0, 0.3, 0.32), (-2.0, 7.0, 0.001)] {
            let (l0, u0) = unadjusted_interval(c, se, a).unwrap();
            let (l1, u1) = adjusted_interval(c, se, a).unwrap();
            assert!(((u1 - l1) / (u0 - l0) - std::f64::consts::SQRT_2).abs() < 1e-12);
        }
    }

    #[test]
    fn conversions() {
        assert!((nominal_to_adjusted(0.05).unwrap() - 0.166).abs() < 0.001);
        assert!((nominal_to_adjusted(0.01).unwrap() - 0.069).abs() < 0.001);
        assert_eq!(nominal_to_adjusted(1.0).unwrap(), 1.0);
        assert!((adjusted_to_nominal(0.1).unwrap() - 0.020).abs() < 0.001);
        assert!((adjusted_to_nominal(0.05).unwrap() - 0.0056).abs() < 0.0003);
        assert!((adjusted_to_nominal(0.01).unwrap() - 2.7e-4).abs() < 2e-5);
        assert!(nominal_to_adjusted(0.0).is_err());
        assert!(adjusted_to_nominal(1.5).is_err());
    }

    #[test]
    fn critical_values() {
        assert!((adjust_critical_value(1.96).unwrap() - 2.77).abs() < 0.01);
        assert_eq!(adjust_critical_value(0.0).unwrap(), 0.0);
        assert!((adjust_critical_value(2.576).unwrap() - 3.643).abs() < 5e-4);
        assert!(adjust_critical_value(-1.0).is_err());
    }

    #[test]
    fn asymptotic_coverage() {
        // Four-digit reference values.
        for (alpha, expected) in [(0.32, 0.5181), (0.1, 0.7551), (0.05, 0.8341), (0.01, 0.9314)] {
            assert!((asymptotic_unadjusted_coverage(alpha).unwrap() - expected).abs() < 2e-4, "{alpha}");
        }
        // Equals 1 - nominal_to_adjusted(α).
        for alpha in [0.01, 0.2, 0.7] {
            let c = asymptotic_unadjusted_coverage(alpha).unwrap();
            assert!((c - (1.0 - nominal_to_adjusted(alpha).unwrap())).abs() < 1e-14);
        }
    }

    #[test]
    fn curve() {
        let c = conversion_curve(&default_curve_grid(512)).unwrap();
        assert_eq!(c.len(), 512);
        assert_eq!(*c.last().unwrap(), (1.0, 1.0));
        assert!(c.windows(2).all(|w| w[1].1 > w[0].1));
        let tiny = nominal_to_adjusted(1e-12).unwrap();
        assert!(tiny > 0.0 && tiny < 1e-3);
        let at05 = conversion_curve(&[0.05]).unwrap()[0].1;
        assert!((at05 - 0.166).abs() < 0.001);
    }
}
