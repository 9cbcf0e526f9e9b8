use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::config::{check_alphas, check_writable, Approximation, GridSpec, OutputFormat, RunConfig};
use super::ingest::{read_column, Column};
use super::{AdjustArgs, AdjustKind, AssessArgs, DistanceArgs, InferArgs, Profile, ProxyCurvesArgs, TablesArgs};
use crate::adjustment::{
    adjust_critical_value, adjusted_interval, adjusted_to_nominal, conversion_curve, default_curve_grid,
    nominal_to_adjusted, unadjusted_interval,
};
use crate::approx::{
    criterion_adjusted_calibration, criterion_adjusted_laplace, gaussian_approx_known_sd, gaussian_approx_with,
    laplace_approx, plain_calibration, sample_mean, Sample, SdConvention,
};
use crate::dist::{default_grid, Density1D, GaussianLaw, RngStream};
use crate::error::{Error, Result};
use crate::inference::{hpd_region, mode_estimate, neoclassical_test, ConfidenceRegion, Members, TestDecision};
use crate::metrics::{distance_report, gaussian_pair_report, DistanceReport, ProxyTruth};
use crate::montecarlo::{
    rows_to_csv, run_assessment, run_assessment_with_threads, simulate, AssessmentConfig, AssessmentRow, Dgp,
};
use crate::objectives::{build_criterion, build_objective};
use crate::output::{atomic_write, csv_bytes, format_g17};

/// Writes to `out` atomically, or to stdout.
fn emit(bytes: &[u8], out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => atomic_write(p, bytes),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes).map_err(|e| Error::Io(e.to_string()))
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> Result<Vec<u8>> {
    let mut s = serde_json::to_vec_pretty(v).map_err(|e| Error::Io(e.to_string()))?;
    s.push(b'\n');
    Ok(s)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianIntervals {
    pub alpha: f64,
    pub se: f64,
    pub unadjusted: (f64, f64),
    pub adjusted: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InferReport {
    pub schema_version: u32,
    pub approximation: Approximation,
    pub observations: usize,
    pub sample_mean: f64,
    pub estimate: f64,
    /// Test sizes, one per region, in request order.
    pub alphas: Vec<f64>,
    pub regions: Vec<ConfidenceRegion>,
    pub tests: Vec<TestDecision>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gaussian_intervals: Option<Vec<GaussianIntervals>>,
}

fn require<T>(v: Option<T>, what: &str, approx: Approximation) -> Result<T> {
    v.ok_or_else(|| Error::Config(format!("{what}: required by approximation {approx:?}")))
}

fn infer_density(
    approx: Approximation,
    s: &Sample,
    cfg: &RunConfig,
    grid: Option<GridSpec>,
    theta_star: Option<f64>,
    sigma: Option<f64>,
) -> Result<(Density1D, Option<GaussianLaw>)> {
    let conv = cfg.sd_convention.unwrap_or_default();
    let gaussian = |law: GaussianLaw| -> Result<(Density1D, Option<GaussianLaw>)> {
        let nodes = grid.map(|g| g.nodes()).unwrap_or_else(|| default_grid(&law));
        Ok((Density1D::from_gaussian(&law, nodes)?, Some(law)))
    };
    match approx {
        Approximation::Gaussian => gaussian(gaussian_approx_with(s, conv)?),
        Approximation::GaussianKnownSd => {
            let sigma = require(sigma, "sigma", approx)?;
            gaussian(gaussian_approx_known_sd(s, sigma)?)
        }
        Approximation::Calibration => Ok((plain_calibration(require(theta_star, "theta_star", approx)?)?, None)),
        Approximation::CriterionCalibration => {
            let u = build_criterion(require(cfg.criterion.as_ref(), "criterion", approx)?)?;
            let grid = require(grid, "grid", approx)?;
            let ts = require(theta_star, "theta_star", approx)?;
            Ok((criterion_adjusted_calibration(&u, ts, &grid.nodes())?, None))
        }
        Approximation::Laplace => {
            let obj = build_objective(require(cfg.objective.as_ref(), "objective", approx)?)?;
            let grid = require(grid, "grid", approx)?;
            Ok((laplace_approx(&obj, s, &grid.nodes(), s.len())?, None))
        }
        Approximation::CriterionLaplace => {
            let obj = build_objective(require(cfg.objective.as_ref(), "objective", approx)?)?;
            let u = build_criterion(require(cfg.criterion.as_ref(), "criterion", approx)?)?;
            let grid = require(grid, "grid", approx)?;
            Ok((criterion_adjusted_laplace(&u, &obj, s, &grid.nodes(), s.len())?, None))
        }
    }
}

fn infer_csv(r: &InferReport) -> Result<Vec<u8>> {
    let header: Vec<String> = ["record", "alpha", "lower", "upper", "value"].iter().map(|s| s.to_string()).collect();
    let g = |v: f64| format_g17(v);
    let mut rows = vec![vec!["estimate".into(), String::new(), String::new(), String::new(), g(r.estimate)]];
    for (reg, a) in r.regions.iter().zip(&r.alphas) {
        let alpha = g(*a);
        rows.push(vec!["threshold_k".into(), alpha.clone(), String::new(), String::new(), g(reg.threshold_k)]);
        rows.push(vec!["achieved_mass".into(), alpha.clone(), String::new(), String::new(), g(reg.achieved_mass)]);
        match &reg.members {
            Members::Intervals(iv) => {
                for (a, b) in iv {
                    rows.push(vec!["hpd_interval".into(), alpha.clone(), g(*a), g(*b), String::new()]);
                }
            }
            Members::Atoms(atoms) => {
                for a in atoms {
                    rows.push(vec!["hpd_atom".into(), alpha.clone(), String::new(), String::new(), g(*a)]);
                }
            }
        }
    }
    let per_alpha = r.tests.len() / r.alphas.len().max(1);
    for (i, t) in r.tests.iter().enumerate() {
        let decision = match t.decision {
            crate::inference::Decision::NotRejected => "not_rejected",
            crate::inference::Decision::Rejected => "rejected",
        };
        rows.push(vec![
            format!("test_{decision}"),
            g(r.alphas[i / per_alpha]),
            String::new(),
            String::new(),
            g(t.tested_value),
        ]);
    }
    for gi in r.gaussian_intervals.iter().flatten() {
        let alpha = g(gi.alpha);
        rows.push(vec!["unadjusted".into(), alpha.clone(), g(gi.unadjusted.0), g(gi.unadjusted.1), g(gi.se)]);
        rows.push(vec!["adjusted".into(), alpha, g(gi.adjusted.0), g(gi.adjusted.1), g(gi.se)]);
    }
    csv_bytes(&header, &rows)
}

/// Estimate, HPD regions, tests and (for Gaussian approximations) both interval kinds.
pub fn cmd_infer(args: &InferArgs) -> Result<InferReport> {
    let cfg = match &args.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig { schema_version: super::config::RUN_SCHEMA_VERSION, ..Default::default() },
    };
    let out = args.out.clone().or_else(|| cfg.out.clone());
    if let Some(p) = &out {
        check_writable(p)?;
    }
    let format = args.format.or(cfg.format).unwrap_or_default();
    let approx = args.approx.or(cfg.approximation).unwrap_or(Approximation::Gaussian);
    let alphas =
        if args.alpha.is_empty() { cfg.alphas.clone().unwrap_or_else(|| vec![0.05]) } else { args.alpha.clone() };
    check_alphas(&alphas)?;
    let tests = if args.test_values.is_empty() {
        cfg.test_values.clone().unwrap_or_default()
    } else {
        args.test_values.clone()
    };
    let grid = args.grid.or(cfg.grid);
    if let Some(g) = grid {
        g.validate()?;
    }

    let column = args.column.as_deref().map(Column::parse).unwrap_or_default();
    let x = read_column(&args.data, args.header, &column)?;
    let s = Sample::new(x).map_err(|e| Error::Ingestion(e.to_string()))?;

    let theta_star = args.theta_star.or(cfg.theta_star);
    let sigma = args.sigma.or(cfg.sigma);
    let (density, law) = infer_density(approx, &s, &cfg, grid, theta_star, sigma)?;

    let regions = alphas.iter().map(|&a| hpd_region(&density, a)).collect::<Result<Vec<_>>>()?;
    let mut decisions = Vec::new();
    for &a in &alphas {
        for &v in &tests {
            decisions.push(neoclassical_test(&density, a, v)?);
        }
    }
    let gaussian_intervals = match law {
        Some(law) => Some(
            alphas
                .iter()
                .map(|&a| {
                    Ok(GaussianIntervals {
                        alpha: a,
                        se: law.sd(),
                        unadjusted: unadjusted_interval(law.mean(), law.sd(), a)?,
                        adjusted: adjusted_interval(law.mean(), law.sd(), a)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?,
        ),
        None => None,
    };
    let report = InferReport {
        schema_version: super::config::RUN_SCHEMA_VERSION,
        approximation: approx,
        observations: s.len(),
        sample_mean: sample_mean(&s),
        estimate: mode_estimate(&density),
        alphas,
        regions,
        tests: decisions,
        gaussian_intervals,
    };
    let bytes = match format {
        OutputFormat::Json => to_json(&report)?,
        OutputFormat::Csv => infer_csv(&report)?,
    };
    emit(&bytes, out.as_deref())?;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssessReport {
    pub config: AssessmentConfig,
    pub rows: Vec<AssessmentRow>,
}

/// Resolves the assessment config: file or profile, then flag and environment overrides.
pub fn assessment_config(args: &AssessArgs) -> Result<AssessmentConfig> {
    let mut cfg = match (&args.config, args.profile) {
        (Some(p), _) => {
            let text = std::fs::read_to_string(p).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?;
            // A seed supplied on the command line or in NEO_SEED may stand in for a missing one.
            let mut value: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?;
            if let (Some(seed), Some(obj)) = (args.seed, value.as_object_mut()) {
                obj.insert("seed".into(), seed.into());
            }
            serde_json::from_value(value).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?
        }
        (None, profile) => {
            let seed = args
                .seed
                .ok_or_else(|| Error::Config("seed: required (use --seed, NEO_SEED or a config file)".into()))?;
            match profile.unwrap_or(Profile::Paper) {
                Profile::Paper => AssessmentConfig::paper_defaults(seed),
                Profile::Ci => AssessmentConfig::ci_defaults(seed),
            }
        }
    };
    if let Some(m) = args.replications {
        cfg.replications = m;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Runs the Monte-Carlo assessment and writes its rows.
pub fn cmd_assess(args: &AssessArgs) -> Result<AssessReport> {
    if let Some(p) = &args.out {
        check_writable(p)?;
    }
    let config = assessment_config(args)?;
    let rows = match args.threads {
        Some(n) => run_assessment_with_threads(&config, n)?,
        None => run_assessment(&config)?,
    };
    let bytes = match args.format.unwrap_or(OutputFormat::Csv) {
        OutputFormat::Csv => rows_to_csv(&rows, &config.levels)?,
        OutputFormat::Json => to_json(&AssessReport { config: config.clone(), rows: rows.clone() })?,
    };
    emit(&bytes, args.out.as_deref())?;
    Ok(AssessReport { config, rows })
}

pub const TABLE_LEVELS: [f64; 4] = [0.01, 0.05, 0.1, 0.32];
pub const TABLE_CRITICAL_VALUES: [f64; 4] = [2.58, 1.96, 1.64, 0.99];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tables {
    /// `(nominal, adjusted)`.
    pub nominal_to_adjusted: Vec<(f64, f64)>,
    /// `(adjusted, nominal)`.
    pub adjusted_to_nominal: Vec<(f64, f64)>,
    /// `(critical value, adjusted critical value)`.
    pub critical_values: Vec<(f64, f64)>,
    pub curve: Vec<(f64, f64)>,
}

pub fn conversion_tables(curve_points: usize) -> Result<Tables> {
    Ok(Tables {
        nominal_to_adjusted: conversion_curve(&TABLE_LEVELS)?,
        adjusted_to_nominal: TABLE_LEVELS.iter().map(|&a| Ok((a, adjusted_to_nominal(a)?))).collect::<Result<_>>()?,
        critical_values: TABLE_CRITICAL_VALUES
            .iter()
            .map(|&c| Ok((c, adjust_critical_value(c)?)))
            .collect::<Result<_>>()?,
        curve: conversion_curve(&default_curve_grid(curve_points))?,
    })
}

fn pairs_csv(a: &str, b: &str, rows: &[(f64, f64)]) -> Result<Vec<u8>> {
    let rows: Vec<Vec<String>> = rows.iter().map(|(x, y)| vec![format_g17(*x), format_g17(*y)]).collect();
    csv_bytes(&[a.to_string(), b.to_string()], &rows)
}

/// Writes the three conversion tables and the nominal-versus-adjusted curve.
pub fn cmd_tables(args: &TablesArgs) -> Result<Vec<PathBuf>> {
    let dir = &args.out_dir;
    if !dir.is_dir() {
        return Err(Error::Config(format!("out-dir {} is not a directory", dir.display())));
    }
    check_writable(&dir.join("table3.csv"))?;
    let t = conversion_tables(args.curve_points)?;
    let files = [
        ("table3.csv", pairs_csv("nominal_level", "adjusted_level", &t.nominal_to_adjusted)?),
        ("table4.csv", pairs_csv("adjusted_level", "nominal_level", &t.adjusted_to_nominal)?),
        ("table6.csv", pairs_csv("critical_value", "adjusted_critical_value", &t.critical_values)?),
        ("level_curve.csv", pairs_csv("nominal_level", "adjusted_level", &t.curve)?),
    ];
    let mut written = Vec::new();
    for (name, bytes) in files {
        let p = dir.join(name);
        atomic_write(&p, &bytes)?;
        written.push(p);
    }
    Ok(written)
}

pub fn cmd_adjust(kind: AdjustKind, value: f64) -> Result<f64> {
    match kind {
        AdjustKind::Se => {
            if value >= 0.0 && value.is_finite() {
                Ok(std::f64::consts::SQRT_2 * value)
            } else {
                Err(Error::Domain(format!("standard error must be finite and >= 0, got {value}")))
            }
        }
        AdjustKind::Pvalue => nominal_to_adjusted(value),
        AdjustKind::Tstat => adjust_critical_value(value),
    }
}

pub fn run_adjust(args: &AdjustArgs) -> Result<f64> {
    let v = cmd_adjust(args.kind, args.value)?;
    emit(format!("{}\n", format_g17(v)).as_bytes(), None)?;
    Ok(v)
}

/// A law named on the command line.
#[derive(Debug, Clone, PartialEq)]
pub enum LawSpec {
    Normal { mean: f64, sd: f64 },
    GaussianMean { theta0: f64, s: f64, t: u32 },
    BinomialMean { t: u32, p: f64 },
    Data(PathBuf),
}

impl std::str::FromStr for LawSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = s.split_once(':').ok_or_else(|| Error::Config(format!("law spec `{s}` lacks a kind")))?;
        let nums = |n: usize| -> Result<Vec<f64>> {
            let v: Vec<f64> = rest
                .split(':')
                .map(|p| p.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::Config(format!("law spec `{s}`: non-numeric parameter")))?;
            if v.len() != n {
                return Err(Error::Config(format!("law spec `{s}`: expected {n} parameters")));
            }
            Ok(v)
        };
        let count = |v: f64| -> Result<u32> {
            if v >= 1.0 && v.fract() == 0.0 && v <= u32::MAX as f64 {
                Ok(v as u32)
            } else {
                Err(Error::Config(format!("law spec `{s}`: T must be a positive integer")))
            }
        };
        match kind {
            "normal" => {
                let v = nums(2)?;
                Ok(LawSpec::Normal { mean: v[0], sd: v[1] })
            }
            "gaussian-mean" => {
                let v = nums(3)?;
                Ok(LawSpec::GaussianMean { theta0: v[0], s: v[1], t: count(v[2])? })
            }
            "binomial-mean" => {
                let v = nums(2)?;
                Ok(LawSpec::BinomialMean { t: count(v[0])?, p: v[1] })
            }
            "data" => Ok(LawSpec::Data(PathBuf::from(rest))),
            other => Err(Error::UnknownName(format!("law kind `{other}`"))),
        }
    }
}

/// Distances from a Gaussian (parametric or fitted to data) to a reference law.
pub fn cmd_distance(args: &DistanceArgs) -> Result<DistanceReport> {
    if let Some(p) = &args.out {
        check_writable(p)?;
    }
    let fitted = match &args.fitted {
        LawSpec::Normal { mean, sd } => GaussianLaw::new(*mean, *sd)?,
        LawSpec::Data(path) => {
            let x = read_column(path, args.header, &Column::First)?;
            let s = Sample::new(x).map_err(|e| Error::Ingestion(e.to_string()))?;
            gaussian_approx_with(&s, SdConvention::DivT)?
        }
        other => return Err(Error::Config(format!("fitted law must be Gaussian, got {other:?}"))),
    };
    let report = match &args.truth {
        LawSpec::Normal { mean, sd } => {
            gaussian_pair_report(&fitted, &GaussianLaw::new(*mean, *sd)?, args.grid_points)?
        }
        LawSpec::GaussianMean { theta0, s, t } => {
            distance_report(&fitted, &ProxyTruth::gaussian_mean(*theta0, *s, *t)?, args.grid_points)?
        }
        LawSpec::BinomialMean { t, p } => {
            distance_report(&fitted, &ProxyTruth::binomial_mean(*t, *p)?, args.grid_points)?
        }
        LawSpec::Data(_) => return Err(Error::Config("truth must be a parametric law".into())),
    };
    emit(&to_json(&report)?, args.out.as_deref())?;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveRegion {
    pub mean: f64,
    pub sd: f64,
    pub region: Members,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProxyCurvesSidecar {
    pub theta0: f64,
    pub s: f64,
    pub t: u32,
    pub seed: u64,
    pub level: f64,
    pub truth: CurveRegion,
    pub fitted: Vec<CurveRegion>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProxyCurves {
    pub theta: Vec<f64>,
    pub f_true: Vec<f64>,
    pub f_fit: Vec<Vec<f64>>,
    pub sidecar: ProxyCurvesSidecar,
}

/// True proxy density and `k` seeded fitted densities on one grid, with their HPD regions.
pub fn proxy_curves(args: &ProxyCurvesArgs) -> Result<ProxyCurves> {
    check_alphas(&[args.alpha])?;
    let dgp = Dgp::Gaussian { theta0: args.theta0, s: args.s };
    let truth = GaussianLaw::new(args.theta0, args.s / (args.t as f64).sqrt())?;
    if args.t < 2 {
        return Err(Error::Config("t: must be >= 2".into()));
    }
    let theta = match args.grid {
        Some(g) => g.nodes(),
        None => default_grid(&truth),
    };
    let region_of = |law: &GaussianLaw| -> Result<(Vec<f64>, CurveRegion)> {
        let d = Density1D::from_gaussian(law, theta.clone())?;
        let region = hpd_region(&d, args.alpha)?.members;
        Ok((d.values(), CurveRegion { mean: law.mean(), sd: law.sd(), region }))
    };
    let (f_true, truth_region) = region_of(&truth)?;
    let mut f_fit = Vec::with_capacity(args.k);
    let mut fitted = Vec::with_capacity(args.k);
    for j in 0..args.k {
        let x = simulate(&dgp, args.t, RngStream::new(args.seed, j as u64));
        let law = gaussian_approx_with(&Sample::new(x)?, SdConvention::DivT)?;
        let (v, r) = region_of(&law)?;
        f_fit.push(v);
        fitted.push(r);
    }
    Ok(ProxyCurves {
        theta,
        f_true,
        f_fit,
        sidecar: ProxyCurvesSidecar {
            theta0: args.theta0,
            s: args.s,
            t: args.t,
            seed: args.seed,
            level: 1.0 - args.alpha,
            truth: truth_region,
            fitted,
        },
    })
}

/// Writes the curve CSV to `out` and the regions to `out` with a `.json` extension.
pub fn cmd_proxy_curves(args: &ProxyCurvesArgs) -> Result<ProxyCurves> {
    check_writable(&args.out)?;
    if args.out.extension().is_some_and(|e| e == "json") {
        return Err(Error::Config("out: the curve file must not use the sidecar's .json extension".into()));
    }
    let curves = proxy_curves(args)?;
    let mut header = vec!["theta".to_string(), "f_true".to_string()];
    header.extend((1..=args.k).map(|j| format!("f_fit_{j}")));
    let rows: Vec<Vec<String>> = (0..curves.theta.len())
        .map(|i| {
            let mut r = vec![format_g17(curves.theta[i]), format_g17(curves.f_true[i])];
            r.extend(curves.f_fit.iter().map(|f| format_g17(f[i])));
            r
        })
        .collect();
    atomic_write(&args.out, &csv_bytes(&header, &rows)?)?;
    atomic_write(&args.out.with_extension("json"), &to_json(&curves.sidecar)?)?;
    Ok(curves)
}
