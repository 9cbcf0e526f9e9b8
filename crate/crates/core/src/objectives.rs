//! Named objectives `Q_T`, weights `w` and criteria `u` for the Laplace family.
//!
//! `Q_T` is always the per-observation average, so `exp(T Q_T)` is the likelihood
//! itself for the likelihood objectives.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::approx::{sample_mean, sample_sd, CriterionFn, ObjectiveFn, Sample, SdConvention};
use crate::dist::{linspace, Density1D};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObjectiveName {
    /// Gaussian log-likelihood with known `sigma`.
    GaussianLoglik,
    BernoulliLoglik,
    /// `-(m(x) - θ)² / 2` for a named sample moment `m`.
    LeastSquares,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightName {
    #[default]
    Flat,
    IndicatorInterval,
    GaussianKernel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CriterionName {
    Indicator,
    GaussianKernel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveSpec {
    pub name: ObjectiveName,
    #[serde(default)]
    pub params: Value,
    #[serde(default)]
    pub weight_name: WeightName,
    #[serde(default)]
    pub weight_params: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionSpec {
    pub name: CriterionName,
    #[serde(default)]
    pub params: Value,
}

fn param(params: &Value, key: &str) -> Result<f64> {
    params.get(key).and_then(Value::as_f64).ok_or_else(|| Error::Config(format!("missing numeric parameter `{key}`")))
}

fn positive(params: &Value, key: &str) -> Result<f64> {
    let v = param(params, key)?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Config(format!("parameter `{key}` must be > 0, got {v}")))
    }
}

pub fn build_objective(spec: &ObjectiveSpec) -> Result<ObjectiveFn> {
    let obj = match spec.name {
        ObjectiveName::GaussianLoglik => {
            let sigma = positive(&spec.params, "sigma")?;
            let log_norm = (sigma * (2.0 * std::f64::consts::PI).sqrt()).ln();
            ObjectiveFn::new(move |s: &Sample, theta| {
                let x = s.observations();
                let msq = x.iter().map(|v| (v - theta) * (v - theta)).sum::<f64>() / x.len() as f64;
                -msq / (2.0 * sigma * sigma) - log_norm
            })
        }
        ObjectiveName::BernoulliLoglik => ObjectiveFn::new(|s: &Sample, theta| {
            if !(theta > 0.0 && theta < 1.0) {
                return f64::NEG_INFINITY;
            }
            let xbar = sample_mean(s);
            xbar * theta.ln() + (1.0 - xbar) * (1.0 - theta).ln()
        }),
        ObjectiveName::LeastSquares => {
            let moment = spec.params.get("moment").and_then(Value::as_str).unwrap_or("mean");
            let f: fn(&Sample) -> f64 = match moment {
                "mean" => sample_mean,
                "variance" => |s| sample_sd(s, SdConvention::DivT).powi(2),
                "second_moment" => |s| {
                    let x = s.observations();
                    x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64
                },
                other => return Err(Error::UnknownName(format!("moment `{other}`"))),
            };
            ObjectiveFn::new(move |s: &Sample, theta| -0.5 * (f(s) - theta).powi(2))
        }
    };
    Ok(match spec.weight_name {
        WeightName::Flat => obj,
        WeightName::IndicatorInterval => {
            let lo = param(&spec.weight_params, "lo")?;
            let hi = param(&spec.weight_params, "hi")?;
            if !(lo < hi) {
                return Err(Error::Config(format!("indicator interval needs lo < hi, got [{lo}, {hi}]")));
            }
            obj.with_weight(move |t| if (lo..=hi).contains(&t) { 1.0 } else { 0.0 })
        }
        WeightName::GaussianKernel => {
            let center = param(&spec.weight_params, "center")?;
            let scale = positive(&spec.weight_params, "scale")?;
            obj.with_weight(move |t| (-0.5 * ((t - center) / scale).powi(2)).exp())
        }
    })
}

pub fn build_criterion(spec: &CriterionSpec) -> Result<CriterionFn> {
    Ok(match spec.name {
        CriterionName::Indicator => CriterionFn::indicator(positive(&spec.params, "half_width")?),
        CriterionName::GaussianKernel => CriterionFn::gaussian_kernel(positive(&spec.params, "tau")?),
    })
}

/// Grid on `[h, 1 - h]` with `n` points, keeping the Bernoulli log-likelihood finite.
pub fn bernoulli_grid(n: usize) -> Vec<f64> {
    let h = 1.0 / (n + 1) as f64;
    linspace(h, 1.0 - h, n)
}

/// Pointwise `weighted / plain`, scaled so that its maximum is 1.
pub fn weight_change_of_measure(plain: &Density1D, weighted: &Density1D) -> Result<Vec<f64>> {
    let (pp, wp) = (plain.points(), weighted.points());
    let h = plain.spacing().unwrap_or(1.0);
    if pp.len() != wp.len() || pp.iter().zip(&wp).any(|(a, b)| (a - b).abs() > 1e-9 * h) {
        return Err(Error::Alignment("densities live on different grids".into()));
    }
    let (pv, wv) = (plain.values(), weighted.values());
    let mut ratio = Vec::with_capacity(pv.len());
    for (i, (&p, &w)) in pv.iter().zip(&wv).enumerate() {
        if w > 0.0 && p <= 0.0 {
            return Err(Error::domain(format!("plain density vanishes at {} where weighted does not", pp[i])));
        }
        ratio.push(if w > 0.0 { w / p } else { 0.0 });
    }
    let max = ratio.iter().copied().fold(0.0, f64::max);
    if max > 0.0 {
        ratio.iter_mut().for_each(|r| *r /= max);
    }
    Ok(ratio)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approx::laplace_approx;
    use crate::dist::GaussianLaw;
    use crate::inference::mode_estimate;
    use serde_json::json;

    fn spec(name: ObjectiveName, params: Value) -> ObjectiveSpec {
        ObjectiveSpec { name, params, weight_name: WeightName::Flat, weight_params: Value::Null }
    }

    #[test]
    fn gaussian_loglik_gives_gaussian() {
        let s = Sample::new(vec![0.2, -0.3, 0.5, 0.1, 0.0, 0.4, -0.1, 0.3]).unwrap();
        let t = s.len();
        let obj = build_objective(&spec(ObjectiveName::GaussianLoglik, json!({"sigma": 1.0}))).unwrap();
        let law = GaussianLaw::new(sample_mean(&s), 1.0 / (t as f64).sqrt()).unwrap();
        let grid = linspace(law.mean() - 8.0 * law.sd(), law.mean() + 8.0 * law.sd(), 2001);
        let d = laplace_approx(&obj, &s, &grid, t).unwrap();
        let sup = grid.iter().zip(d.values()).map(|(x, v)| (law.pdf(*x) - v).abs()).fold(0.0, f64::max);
        assert!(sup < 1e-6);
    }

    #[test]
    fn bernoulli_mode_at_mean() {
        let s = Sample::new(vec![1.0, 0.0, 1.0, 1.0, 0.0, 1.0, 0.0, 1.0, 1.0, 1.0]).unwrap();
        let obj = build_objective(&spec(ObjectiveName::BernoulliLoglik, Value::Null)).unwrap();
        let grid = bernoulli_grid(999);
        let d = laplace_approx(&obj, &s, &grid, s.len()).unwrap();
        let h = grid[1] - grid[0];
        assert!((mode_estimate(&d) - 0.7).abs() <= h);
    }

    #[test]
    fn bernoulli_all_zero_sample_is_finite() {
        let s = Sample::new(vec![0.0; 5]).unwrap();
        let obj = build_objective(&spec(ObjectiveName::BernoulliLoglik, Value::Null)).unwrap();
        let d = laplace_approx(&obj, &s, &bernoulli_grid(99), 5).unwrap();
        assert!((d.total_mass() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn least_squares_moment() {
        let s = Sample::new(vec![1.0, 2.0, 3.0]).unwrap();
        let sp = spec(ObjectiveName::LeastSquares, json!({"moment": "variance"}));
        let obj = build_objective(&sp).unwrap();
        assert!((obj.eval(&s, 2.0 / 3.0)).abs() < 1e-15);
        let bad = spec(ObjectiveName::LeastSquares, json!({"moment": "kurtosis"}));
        assert!(matches!(build_objective(&bad), Err(Error::UnknownName(_))));
    }

    #[test]
    fn flat_weight_matches_plain() {
        let obj = build_objective(&spec(ObjectiveName::GaussianLoglik, json!({"sigma": 2.0}))).unwrap();
        assert_eq!(obj.weight(123.0), 1.0);
    }

    #[test]
    fn invalid_params() {
        assert!(build_objective(&spec(ObjectiveName::GaussianLoglik, json!({}))).is_err());
        assert!(build_objective(&spec(ObjectiveName::GaussianLoglik, json!({"sigma": -1.0}))).is_err());
        let parsed: std::result::Result<ObjectiveSpec, _> =
            serde_json::from_value(json!({"name": "no-such-objective"}));
        assert!(parsed.is_err());
    }

    #[test]
    fn change_of_measure() {
        let s = Sample::new(vec![0.2, -0.3, 0.5, 0.1]).unwrap();
        let grid = linspace(-2.0, 2.0, 401);
        let base = spec(ObjectiveName::GaussianLoglik, json!({"sigma": 1.0}));
        let plain = laplace_approx(&build_objective(&base).unwrap(), &s, &grid, 4).unwrap();
        let same = weight_change_of_measure(&plain, &plain).unwrap();
        assert!(same.iter().all(|r| (r - 1.0).abs() < 1e-12));

        let weighted_spec = ObjectiveSpec {
            weight_name: WeightName::IndicatorInterval,
            weight_params: json!({"lo": 0.0, "hi": 1.0}),
            ..base
        };
        let weighted = laplace_approx(&build_objective(&weighted_spec).unwrap(), &s, &grid, 4).unwrap();
        let r = weight_change_of_measure(&plain, &weighted).unwrap();
        for (x, v) in grid.iter().zip(&r) {
            let expected = if (0.0..=1.0).contains(x) { 1.0 } else { 0.0 };
            assert!((v - expected).abs() < 1e-9, "x = {x}");
        }

        let a = crate::dist::grid_density(linspace(0.0, 1.0, 3), vec![1.0, 0.0, 0.0]).unwrap();
        let b = crate::dist::grid_density(linspace(0.0, 1.0, 3), vec![0.0, 0.0, 1.0]).unwrap();
        assert!(weight_change_of_measure(&a, &b).is_err());
    }
}
