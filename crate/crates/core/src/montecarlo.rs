//! Monte-Carlo assessment of the Gaussian approximation of the sample-mean proxy.
//!
//! Each replication simulates `T` observations, fits `N(X̄, ŝ/√T)` and scores it
//! against the exact proxy law. Coverage is the exact probability, under that law,
//! of the unadjusted and √2-adjusted intervals, so no inner simulation loop exists.
//!
//! Replication `m` of every (DGP, T) cell draws from stream `m`. Rows therefore
//! share random numbers; with `θ0 = 0` the Gaussian rows differ only by an exact
//! rescaling, and a smaller `T` uses a prefix of the larger-`T` sample.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::adjustment::{adjusted_interval, unadjusted_interval};
use crate::approx::{mean, sd, SdConvention};
use crate::dist::{GaussianLaw, RngStream};
use crate::error::{Error, Result};
use crate::metrics::{exact_cdf_distances, ProxyTruth};
use crate::output::{csv_bytes, format_g17};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_LEVELS: [f64; 4] = [0.68, 0.90, 0.95, 0.99];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Dgp {
    Gaussian { theta0: f64, s: f64 },
    Bernoulli { p: f64 },
}

impl Dgp {
    pub fn label(&self) -> String {
        match self {
            Dgp::Gaussian { theta0, s } => format!("N({theta0},{s})"),
            Dgp::Bernoulli { p } => format!("B({p})"),
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            Dgp::Gaussian { theta0, .. } => theta0,
            Dgp::Bernoulli { p } => p,
        }
    }

    pub fn sd(&self) -> f64 {
        match *self {
            Dgp::Gaussian { s, .. } => s,
            Dgp::Bernoulli { p } => (p * (1.0 - p)).sqrt(),
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Dgp::Gaussian { theta0, s } if theta0.is_finite() && s > 0.0 && s.is_finite() => Ok(()),
            Dgp::Bernoulli { p } if p > 0.0 && p < 1.0 => Ok(()),
            other => Err(Error::Config(format!("dgps: invalid parameters in {other:?}"))),
        }
    }
}

fn default_levels() -> Vec<f64> {
    DEFAULT_LEVELS.to_vec()
}

fn default_schema() -> u32 {
    SCHEMA_VERSION
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssessmentConfig {
    #[serde(default = "default_schema")]
    pub schema_version: u32,
    pub dgps: Vec<Dgp>,
    pub sample_sizes: Vec<u32>,
    pub replications: usize,
    #[serde(default = "default_levels")]
    pub levels: Vec<f64>,
    pub seed: u64,
    #[serde(default)]
    pub sd_convention: SdConvention,
}

impl AssessmentConfig {
    /// The four DGPs and three sample sizes of the reference assessment, `M = 10⁴`.
    pub fn paper_defaults(seed: u64) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            dgps: vec![
                Dgp::Gaussian { theta0: 0.0, s: 0.2 },
                Dgp::Gaussian { theta0: 0.0, s: 0.4 },
                Dgp::Bernoulli { p: 0.5 },
                // Half the standard deviation of Bernoulli(1/2).
                Dgp::Bernoulli { p: (2.0 - 3f64.sqrt()) / 4.0 },
            ],
            sample_sizes: vec![20, 50, 100],
            replications: 10_000,
            levels: default_levels(),
            seed,
            sd_convention: SdConvention::DivT,
        }
    }

    /// Same grid with `M = 2000`.
    pub fn ci_defaults(seed: u64) -> Self {
        Self { replications: 2000, ..Self::paper_defaults(seed) }
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "schema_version: expected {SCHEMA_VERSION}, got {}",
                self.schema_version
            )));
        }
        if self.dgps.is_empty() {
            return Err(Error::Config("dgps: at least one DGP required".into()));
        }
        self.dgps.iter().try_for_each(Dgp::validate)?;
        if self.sample_sizes.is_empty() || self.sample_sizes.iter().any(|&t| t < 2) {
            return Err(Error::Config("sample_sizes: need at least one T, each >= 2".into()));
        }
        if self.replications == 0 {
            return Err(Error::Config("replications: must be >= 1".into()));
        }
        if self.levels.is_empty() || self.levels.iter().any(|l| !(*l > 0.0 && *l < 1.0)) {
            return Err(Error::Config("levels: need at least one level, each in (0,1)".into()));
        }
        Ok(())
    }
}

/// Exact law of `X̄_T` under `dgp`.
pub fn true_proxy_law(dgp: &Dgp, t: u32) -> Result<ProxyTruth> {
    match *dgp {
        Dgp::Gaussian { theta0, s } => ProxyTruth::gaussian_mean(theta0, s, t),
        Dgp::Bernoulli { p } => ProxyTruth::binomial_mean(t, p),
    }
}

/// `t` draws from `dgp`, using `stream` from its start.
pub fn simulate(dgp: &Dgp, t: u32, stream: RngStream) -> Vec<f64> {
    let mut rng = stream.rng();
    match *dgp {
        Dgp::Gaussian { theta0, s } => (0..t).map(|_| theta0 + s * rng.sample::<f64, _>(StandardNormal)).collect(),
        Dgp::Bernoulli { p } => (0..t).map(|_| if rng.random::<f64>() < p { 1.0 } else { 0.0 }).collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicationRecord {
    pub mean: f64,
    /// `ŝ_T / √T`.
    pub se: f64,
    /// `None` for degenerate samples.
    pub fitted: Option<GaussianLaw>,
    pub l2: Option<f64>,
    pub sup: Option<f64>,
    /// Indexed like the requested levels.
    pub coverage_unadjusted: Vec<f64>,
    pub coverage_adjusted: Vec<f64>,
    pub degenerate: bool,
}

/// Exact coverage of `center ∓ se·u` and `center ∓ √2·se·u` under `truth`, per level.
pub fn interval_coverage(center: f64, se: f64, truth: &ProxyTruth, levels: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut unadj = Vec::with_capacity(levels.len());
    let mut adj = Vec::with_capacity(levels.len());
    for &level in levels {
        let alpha = 1.0 - level;
        let (a, b) = unadjusted_interval(center, se, alpha)?;
        unadj.push(truth.interval_probability(a, b));
        let (a, b) = adjusted_interval(center, se, alpha)?;
        adj.push(truth.interval_probability(a, b));
    }
    Ok((unadj, adj))
}

/// Fits the Gaussian approximation to `x` and scores it against `truth`.
pub fn assess_sample(
    x: &[f64],
    truth: &ProxyTruth,
    levels: &[f64],
    convention: SdConvention,
) -> Result<ReplicationRecord> {
    if x.len() < 2 {
        return Err(Error::DegenerateInput("need T >= 2 observations".into()));
    }
    let m = mean(x);
    let degenerate = x.iter().all(|&v| v == x[0]);
    let se = if degenerate { 0.0 } else { sd(x, convention) / (x.len() as f64).sqrt() };
    let (coverage_unadjusted, coverage_adjusted) = interval_coverage(m, se, truth, levels)?;
    let (fitted, l2, sup) = if degenerate {
        (None, None, None)
    } else {
        let law = GaussianLaw::new(m, se)?;
        let (l2, sup) = exact_cdf_distances(&law, truth.cdf())?;
        (Some(law), Some(l2), Some(sup))
    };
    Ok(ReplicationRecord { mean: m, se, fitted, l2, sup, coverage_unadjusted, coverage_adjusted, degenerate })
}

/// One replication: simulate, fit, score.
pub fn replicate(
    dgp: &Dgp,
    t: u32,
    stream: RngStream,
    levels: &[f64],
    convention: SdConvention,
) -> Result<ReplicationRecord> {
    let truth = true_proxy_law(dgp, t)?;
    assess_sample(&simulate(dgp, t, stream), &truth, levels, convention)
}

/// `√(mean((v - target)²))`.
pub fn rmse(values: &[f64], target: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::Empty("rmse of no values".into()));
    }
    let sq: Vec<f64> = values.iter().map(|v| (v - target) * (v - target)).collect();
    Ok((pairwise_sum(&sq) / values.len() as f64).sqrt())
}

/// Order-fixed pairwise summation.
fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 16 {
        v.iter().sum()
    } else {
        let (a, b) = v.split_at(v.len() / 2);
        pairwise_sum(a) + pairwise_sum(b)
    }
}

/// Mean and Monte-Carlo standard error `√(v̂/M)`; `v̂` uses divisor `M - 1`.
fn mean_and_se(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let m = pairwise_sum(v) / n;
    if v.len() < 2 {
        return (m, 0.0);
    }
    let dev: Vec<f64> = v.iter().map(|x| (x - m) * (x - m)).collect();
    (m, (pairwise_sum(&dev) / (n - 1.0) / n).sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelCoverage {
    pub level: f64,
    pub unadjusted: f64,
    pub adjusted: f64,
    pub unadjusted_mcse: f64,
    pub adjusted_mcse: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssessmentRow {
    pub dgp: String,
    pub t: u32,
    pub replications: usize,
    pub degenerate: usize,
    /// RMSE of `X̄_T` around the true mean.
    pub rmse_mean: f64,
    pub rmse_mean_mcse: f64,
    /// RMSE of `ŝ_T/√T` around `s/√T`.
    pub rmse_se: f64,
    pub rmse_se_mcse: f64,
    /// Averages over non-degenerate replications; `None` if there are none.
    pub l2_mean: Option<f64>,
    pub l2_mcse: Option<f64>,
    pub sup_mean: Option<f64>,
    pub sup_mcse: Option<f64>,
    pub coverage: Vec<LevelCoverage>,
}

impl AssessmentRow {
    pub fn level(&self, level: f64) -> Option<&LevelCoverage> {
        self.coverage.iter().find(|c| (c.level - level).abs() < 1e-12)
    }
}

/// RMSE with a delta-method standard error.
fn rmse_and_se(sq_errors: &[f64]) -> (f64, f64) {
    let (mse, mse_se) = mean_and_se(sq_errors);
    let r = mse.sqrt();
    (r, if r > 0.0 { mse_se / (2.0 * r) } else { 0.0 })
}

fn aggregate(dgp: &Dgp, t: u32, levels: &[f64], records: &[ReplicationRecord]) -> AssessmentRow {
    let target_se = dgp.sd() / (t as f64).sqrt();
    let sq_mean: Vec<f64> = records.iter().map(|r| (r.mean - dgp.mean()).powi(2)).collect();
    let sq_se: Vec<f64> = records.iter().map(|r| (r.se - target_se).powi(2)).collect();
    let (rmse_mean, rmse_mean_mcse) = rmse_and_se(&sq_mean);
    let (rmse_se, rmse_se_mcse) = rmse_and_se(&sq_se);
    let l2: Vec<f64> = records.iter().filter_map(|r| r.l2).collect();
    let sup: Vec<f64> = records.iter().filter_map(|r| r.sup).collect();
    let opt = |v: &[f64]| {
        if v.is_empty() {
            (None, None)
        } else {
            let (m, s) = mean_and_se(v);
            (Some(m), Some(s))
        }
    };
    let (l2_mean, l2_mcse) = opt(&l2);
    let (sup_mean, sup_mcse) = opt(&sup);
    let coverage = levels
        .iter()
        .enumerate()
        .map(|(i, &level)| {
            let u: Vec<f64> = records.iter().map(|r| r.coverage_unadjusted[i]).collect();
            let a: Vec<f64> = records.iter().map(|r| r.coverage_adjusted[i]).collect();
            let (unadjusted, unadjusted_mcse) = mean_and_se(&u);
            let (adjusted, adjusted_mcse) = mean_and_se(&a);
            LevelCoverage { level, unadjusted, adjusted, unadjusted_mcse, adjusted_mcse }
        })
        .collect();
    AssessmentRow {
        dgp: dgp.label(),
        t,
        replications: records.len(),
        degenerate: records.iter().filter(|r| r.degenerate).count(),
        rmse_mean,
        rmse_mean_mcse,
        rmse_se,
        rmse_se_mcse,
        l2_mean,
        l2_mcse,
        sup_mean,
        sup_mcse,
        coverage,
    }
}

/// All replication records of one (DGP, T) cell, in replication order.
pub fn cell_records(cfg: &AssessmentConfig, dgp: &Dgp, t: u32) -> Result<Vec<ReplicationRecord>> {
    let truth = true_proxy_law(dgp, t)?;
    (0..cfg.replications as u64)
        .into_par_iter()
        .map(|m| {
            let x = simulate(dgp, t, RngStream::new(cfg.seed, m));
            assess_sample(&x, &truth, &cfg.levels, cfg.sd_convention)
        })
        .collect()
}

/// One row per (DGP, T), DGP-major. Bit-reproducible for a given config, whatever the thread count.
pub fn run_assessment(cfg: &AssessmentConfig) -> Result<Vec<AssessmentRow>> {
    cfg.validate()?;
    let mut rows = Vec::with_capacity(cfg.dgps.len() * cfg.sample_sizes.len());
    for dgp in &cfg.dgps {
        for &t in &cfg.sample_sizes {
            let records = cell_records(cfg, dgp, t)?;
            rows.push(aggregate(dgp, t, &cfg.levels, &records));
        }
    }
    Ok(rows)
}

/// [`run_assessment`] on a dedicated pool of `threads` workers.
pub fn run_assessment_with_threads(cfg: &AssessmentConfig, threads: usize) -> Result<Vec<AssessmentRow>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::Config(format!("threads: {e}")))?;
    pool.install(|| run_assessment(cfg))
}

pub fn csv_header(levels: &[f64]) -> Vec<String> {
    let mut h: Vec<String> = [
        "dgp",
        "T",
        "replications",
        "degenerate",
        "rmse_mean",
        "rmse_mean_mcse",
        "rmse_se",
        "rmse_se_mcse",
        "l2_mean",
        "l2_mcse",
        "sup_mean",
        "sup_mcse",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    for prefix in ["coverage_unadjusted", "coverage_adjusted", "mcse_unadjusted", "mcse_adjusted"] {
        h.extend(levels.iter().map(|l| format!("{prefix}_{l}")));
    }
    h
}

/// One CSV line per row; missing averages are empty fields.
pub fn rows_to_csv(rows: &[AssessmentRow], levels: &[f64]) -> Result<Vec<u8>> {
    let opt = |v: Option<f64>| v.map(format_g17).unwrap_or_default();
    let records: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let mut f = vec![
                r.dgp.clone(),
                r.t.to_string(),
                r.replications.to_string(),
                r.degenerate.to_string(),
                format_g17(r.rmse_mean),
                format_g17(r.rmse_mean_mcse),
                format_g17(r.rmse_se),
                format_g17(r.rmse_se_mcse),
                opt(r.l2_mean),
                opt(r.l2_mcse),
                opt(r.sup_mean),
                opt(r.sup_mcse),
            ];
            let pick = |g: fn(&LevelCoverage) -> f64| -> Vec<String> {
                levels.iter().map(|&l| r.level(l).map(|c| format_g17(g(c))).unwrap_or_default()).collect()
            };
            f.extend(pick(|c| c.unadjusted));
            f.extend(pick(|c| c.adjusted));
            f.extend(pick(|c| c.unadjusted_mcse));
            f.extend(pick(|c| c.adjusted_mcse));
            f
        })
        .collect();
    csv_bytes(&csv_header(levels), &records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::standard_normal_cdf;

    #[test]
    fn true_law_examples() {
        let t = true_proxy_law(&Dgp::Gaussian { theta0: 0.0, s: 0.2 }, 100).unwrap();
        assert!((t.limit_law().unwrap().sd() - 0.02).abs() < 1e-15);
        let b = true_proxy_law(&Dgp::Bernoulli { p: 0.5 }, 2).unwrap();
        assert_eq!(b.cdf().jump_points(), &[0.0, 0.5, 1.0]);
        assert!((b.interval_probability(0.5, 0.5) - 0.5).abs() < 1e-15);
        assert!((b.interval_probability(0.0, 0.0) - 0.25).abs() < 1e-15);
        let one = true_proxy_law(&Dgp::Bernoulli { p: 0.3 }, 1).unwrap();
        assert!((one.interval_probability(1.0, 1.0) - 0.3).abs() < 1e-15);
    }

    #[test]
    fn fitted_equal_to_truth() {
        let truth = true_proxy_law(&Dgp::Gaussian { theta0: 1.0, s: 0.5 }, 25).unwrap();
        let (u, a) = interval_coverage(1.0, 0.1, &truth, &[0.95]).unwrap();
        assert!((u[0] - 0.95).abs() < 1e-9);
        let expected = 2.0 * standard_normal_cdf(std::f64::consts::SQRT_2 * 1.959_963_984_540_054) - 1.0;
        assert!((a[0] - expected).abs() < 1e-9);
    }

    #[test]
    fn bernoulli_two_draws() {
        let truth = true_proxy_law(&Dgp::Bernoulli { p: 0.5 }, 2).unwrap();
        let r = assess_sample(&[1.0, 0.0], &truth, &[0.95], SdConvention::DivT).unwrap();
        assert_eq!(r.mean, 0.5);
        assert!((r.se - 0.353_553_390_593_273_8).abs() < 1e-15);
        assert!(!r.degenerate);
        assert_eq!(r.coverage_unadjusted[0], 1.0);

        let d = assess_sample(&[1.0, 1.0], &truth, &[0.95], SdConvention::DivT).unwrap();
        assert!(d.degenerate);
        assert!(d.l2.is_none() && d.fitted.is_none());
        assert!((d.coverage_unadjusted[0] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn rmse_examples() {
        assert_eq!(rmse(&[3.0, 3.0, 3.0], 3.0).unwrap(), 0.0);
        assert_eq!(rmse(&[0.0, 2.0], 1.0).unwrap(), 1.0);
        assert!(rmse(&[], 1.0).is_err());
    }

    #[test]
    fn single_replication_row() {
        let mut cfg = AssessmentConfig::paper_defaults(9);
        cfg.replications = 1;
        cfg.dgps.truncate(1);
        cfg.sample_sizes = vec![20];
        let row = &run_assessment(&cfg).unwrap()[0];
        let rec = replicate(&cfg.dgps[0], 20, RngStream::new(9, 0), &cfg.levels, cfg.sd_convention).unwrap();
        assert_eq!(row.rmse_mean, (rec.mean - 0.0).abs());
        assert_eq!(row.l2_mean, rec.l2);
        assert_eq!(row.coverage[2].unadjusted, rec.coverage_unadjusted[2]);
        assert_eq!(row.coverage[2].unadjusted_mcse, 0.0);
    }

    #[test]
    fn config_validation() {
        let mut cfg = AssessmentConfig::paper_defaults(1);
        cfg.replications = 0;
        assert!(matches!(cfg.validate(), Err(Error::Config(m)) if m.starts_with("replications")));
        let missing_seed = r#"{"dgps":[{"kind":"bernoulli","p":0.5}],"sample_sizes":[20],"replications":5}"#;
        assert!(serde_json::from_str::<AssessmentConfig>(missing_seed).is_err());
        let ok = r#"{"dgps":[{"kind":"bernoulli","p":0.5}],"sample_sizes":[20],"replications":5,"seed":3}"#;
        let cfg: AssessmentConfig = serde_json::from_str(ok).unwrap();
        assert_eq!(cfg.levels, DEFAULT_LEVELS.to_vec());
        cfg.validate().unwrap();
    }

    #[test]
    fn csv_shape() {
        let mut cfg = AssessmentConfig::ci_defaults(5);
        cfg.replications = 20;
        let rows = run_assessment(&cfg).unwrap();
        assert_eq!(rows.len(), 12);
        let bytes = rows_to_csv(&rows, &cfg.levels).unwrap();
        let mut rdr = csv::Reader::from_reader(bytes.as_slice());
        assert_eq!(rdr.headers().unwrap().len(), 12 + 16);
        assert_eq!(rdr.records().count(), 12);
    }
}
