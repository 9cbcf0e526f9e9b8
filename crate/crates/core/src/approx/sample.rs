use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Observed data `X_1, ..., X_T` with `T >= 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    observations: Vec<f64>,
}

impl Sample {
    pub fn new(observations: Vec<f64>) -> Result<Self> {
        if observations.len() < 2 {
            return Err(Error::InvalidParameter(format!(
                "a sample needs at least 2 observations, got {}",
                observations.len()
            )));
        }
        if let Some(i) = observations.iter().position(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter(format!("observation {i} is not finite")));
        }
        Ok(Self { observations })
    }

    pub fn observations(&self) -> &[f64] {
        &self.observations
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Divisor used in the sample standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SdConvention {
    /// `1/T`, the plug-in estimator.
    #[default]
    DivT,
    /// `1/(T-1)`, the unbiased-variance estimator.
    DivTm1,
}

pub fn sample_mean(s: &Sample) -> f64 {
    mean(s.observations())
}

pub fn sample_sd(s: &Sample, convention: SdConvention) -> f64 {
    sd(s.observations(), convention)
}

pub(crate) fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

pub(crate) fn sd(xs: &[f64], convention: SdConvention) -> f64 {
    let m = mean(xs);
    let ss: f64 = xs.iter().map(|x| (x - m) * (x - m)).sum();
    let div = match convention {
        SdConvention::DivT => xs.len() as f64,
        SdConvention::DivTm1 => (xs.len() - 1) as f64,
    };
    (ss / div).sqrt()
}
