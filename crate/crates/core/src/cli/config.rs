use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::approx::SdConvention;
use crate::dist::linspace;
use crate::error::{Error, Result};
use crate::montecarlo::AssessmentConfig;
use crate::objectives::{CriterionSpec, ObjectiveSpec};

pub const RUN_SCHEMA_VERSION: u32 = 1;

/// `lo:hi:points`, with an odd number of points, at least 101.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl GridSpec {
    pub fn new(lo: f64, hi: f64, points: usize) -> Result<Self> {
        let g = Self { lo, hi, points };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lo.is_finite() && self.hi.is_finite() && self.lo < self.hi) {
            return Err(Error::Config(format!("grid: need finite lo < hi, got {}:{}", self.lo, self.hi)));
        }
        if self.points < 101 || self.points.is_multiple_of(2) {
            return Err(Error::Config(format!("grid: points must be odd and >= 101, got {}", self.points)));
        }
        Ok(())
    }

    pub fn nodes(&self) -> Vec<f64> {
        linspace(self.lo, self.hi, self.points)
    }
}

impl FromStr for GridSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::Config(format!("grid: expected lo:hi:points, got `{s}`"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let lo = parts[0].trim().parse().map_err(|_| bad())?;
        let hi = parts[1].trim().parse().map_err(|_| bad())?;
        let points = parts[2].trim().parse().map_err(|_| bad())?;
        GridSpec::new(lo, hi, points)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Approximation {
    /// `N(X̄, ŝ/√T)`.
    Gaussian,
    /// `N(X̄, σ/√T)` with `σ` given.
    GaussianKnownSd,
    /// Unit point mass at `θ*`.
    Calibration,
    /// Criterion smoothing around `θ*`.
    CriterionCalibration,
    Laplace,
    CriterionLaplace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

/// Configuration file shared by all subcommands. Command-line flags take precedence.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    #[serde(default)]
    pub grid: Option<GridSpec>,
    #[serde(default)]
    pub approximation: Option<Approximation>,
    #[serde(default)]
    pub alphas: Option<Vec<f64>>,
    #[serde(default)]
    pub test_values: Option<Vec<f64>>,
    #[serde(default)]
    pub theta_star: Option<f64>,
    #[serde(default)]
    pub sigma: Option<f64>,
    #[serde(default)]
    pub sd_convention: Option<SdConvention>,
    #[serde(default)]
    pub objective: Option<ObjectiveSpec>,
    #[serde(default)]
    pub criterion: Option<CriterionSpec>,
    #[serde(default)]
    pub assessment: Option<AssessmentConfig>,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub format: Option<OutputFormat>,
}

impl RunConfig {
    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let cfg: RunConfig =
            serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        if cfg.schema_version != RUN_SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "schema_version: expected {RUN_SCHEMA_VERSION}, got {}",
                cfg.schema_version
            )));
        }
        Ok(cfg)
    }
}

pub fn check_alphas(alphas: &[f64]) -> Result<()> {
    if alphas.is_empty() {
        return Err(Error::Config("alpha: at least one value required".into()));
    }
    match alphas.iter().find(|a| !(**a > 0.0 && **a < 1.0)) {
        Some(a) => Err(Error::Config(format!("alpha: {a} is outside (0,1)"))),
        None => Ok(()),
    }
}

/// Fails early if `path` cannot be created.
pub fn check_writable(path: &std::path::Path) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => std::path::Path::new("."),
    };
    let meta = std::fs::metadata(dir).map_err(|e| Error::Config(format!("output directory {}: {e}", dir.display())))?;
    if !meta.is_dir() || meta.permissions().readonly() {
        return Err(Error::Config(format!("output directory {} is not writable", dir.display())));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        let g: GridSpec = "-1:1:201".parse().unwrap();
        assert_eq!((g.lo, g.hi, g.points), (-1.0, 1.0, 201));
        assert!("0:1:100".parse::<GridSpec>().is_err());
        assert!("0:1:99".parse::<GridSpec>().is_err());
        assert!("1:0:101".parse::<GridSpec>().is_err());
        assert!("0:1".parse::<GridSpec>().is_err());
        assert_eq!(g.nodes().len(), 201);
    }

    #[test]
    fn alphas() {
        assert!(check_alphas(&[0.05, 0.01]).is_ok());
        assert!(check_alphas(&[0.0]).is_err());
        assert!(check_alphas(&[]).is_err());
    }

    #[test]
    fn run_config_json() {
        let cfg: RunConfig = serde_json::from_str(
            r#"{"schema_version":1,"grid":{"lo":0,"hi":1,"points":101},"approximation":"laplace",
               "objective":{"name":"bernoulli-loglik"}}"#,
        )
        .unwrap();
        assert_eq!(cfg.approximation, Some(Approximation::Laplace));
        let back: RunConfig = serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(back, cfg);
        assert!(serde_json::from_str::<RunConfig>(r#"{"schema_version":1,"gird":null}"#).is_err());
    }
}
