//! Distances between an approximation and the true proxy law.
//!
//! Numeric CDF distances work on any pair of [`Cdf`]s over an evaluation grid
//! refined with the jump points of step functions. Gaussian pairs also have
//! closed forms for Hellinger, 2-Wasserstein and Kolmogorov distances.

use rand::Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::approx::SdConvention;
use crate::dist::{
    linspace, standard_normal_cdf, standard_normal_quantile, BinomialMeanLaw, Cdf, GaussianLaw, RngStream,
};
use crate::error::{Error, Result};

/// Default Berry-Esseen constant (upper end of the known range).
pub const BERRY_ESSEEN_C: f64 = 0.4748;
const BERRY_ESSEEN_C_MIN: f64 = 0.3989;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum ProxyKind {
    /// `N(θ0, s/√T)`: the sample mean of `T` Gaussian draws.
    GaussianMean { theta0: f64, s: f64, t: u32 },
    /// `Binomial(T, p) / T`: the sample mean of `T` Bernoulli draws.
    BinomialMean { t: u32, p: f64 },
}

/// Exact sampling law of the sample-mean proxy under a known data-generating process.
#[derive(Debug, Clone, PartialEq)]
pub struct ProxyTruth {
    kind: ProxyKind,
    cdf: Cdf,
}

impl ProxyTruth {
    pub fn gaussian_mean(theta0: f64, s: f64, t: u32) -> Result<Self> {
        if t == 0 {
            return Err(Error::InvalidParameter("T must be >= 1".into()));
        }
        let law = GaussianLaw::new(theta0, s / (t as f64).sqrt())?;
        Ok(Self { kind: ProxyKind::GaussianMean { theta0, s, t }, cdf: Cdf::Gaussian(law) })
    }

    pub fn binomial_mean(t: u32, p: f64) -> Result<Self> {
        let law = BinomialMeanLaw::new(t, p)?;
        Ok(Self { kind: ProxyKind::BinomialMean { t, p }, cdf: law.to_cdf() })
    }

    pub fn kind(&self) -> ProxyKind {
        self.kind
    }

    pub fn cdf(&self) -> &Cdf {
        &self.cdf
    }

    pub fn sample_size(&self) -> u32 {
        match self.kind {
            ProxyKind::GaussianMean { t, .. } | ProxyKind::BinomialMean { t, .. } => t,
        }
    }

    /// Mean of one observation.
    pub fn theta0(&self) -> f64 {
        match self.kind {
            ProxyKind::GaussianMean { theta0, .. } => theta0,
            ProxyKind::BinomialMean { p, .. } => p,
        }
    }

    /// Standard deviation of one observation.
    pub fn s(&self) -> f64 {
        match self.kind {
            ProxyKind::GaussianMean { s, .. } => s,
            ProxyKind::BinomialMean { p, .. } => (p * (1.0 - p)).sqrt(),
        }
    }

    /// `E|X - θ0|³` of one observation.
    pub fn third_abs_moment(&self) -> f64 {
        match self.kind {
            ProxyKind::GaussianMean { s, .. } => 2.0 * (2.0 / std::f64::consts::PI).sqrt() * s * s * s,
            ProxyKind::BinomialMean { p, .. } => p * (1.0 - p) * (p * p + (1.0 - p) * (1.0 - p)),
        }
    }

    /// The CLT limit law `N(θ0, s/√T)`.
    pub fn limit_law(&self) -> Result<GaussianLaw> {
        GaussianLaw::new(self.theta0(), self.s() / (self.sample_size() as f64).sqrt())
    }

    /// `P(a <= θ• <= b)`, counting atoms on either endpoint.
    pub fn interval_probability(&self, a: f64, b: f64) -> f64 {
        if b < a {
            return 0.0;
        }
        (self.cdf.eval(b) - self.cdf.eval_left(a)).clamp(0.0, 1.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceReport {
    pub l2_cdf: f64,
    pub sup_cdf: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub hellinger: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wasserstein2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wasserstein1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub berry_esseen_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub kolmogorov_error_bound: Option<f64>,
}

/// Uniform evaluation grid spanning the effective ranges of all inputs.
pub fn evaluation_grid(cdfs: &[&Cdf], n: usize) -> Vec<f64> {
    let (lo, hi) = cdfs
        .iter()
        .map(|c| c.effective_range())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (a, b)| (lo.min(a), hi.max(b)));
    if lo == hi {
        return linspace(lo - 1.0, hi + 1.0, n);
    }
    linspace(lo, hi, n)
}

fn refined_grid(f1: &Cdf, f2: &Cdf, eval_grid: &[f64]) -> Result<Vec<f64>> {
    if eval_grid.is_empty() {
        return Err(Error::Empty("evaluation grid".into()));
    }
    let jumps: Vec<f64> = f1.jump_points().iter().chain(f2.jump_points()).copied().collect();
    if jumps.is_empty() {
        return Ok(eval_grid.to_vec());
    }
    let lo = eval_grid.iter().chain(&jumps).copied().fold(f64::INFINITY, f64::min);
    let hi = eval_grid.iter().chain(&jumps).copied().fold(f64::NEG_INFINITY, f64::max);
    let delta = 1e-12 * (hi - lo).max(f64::MIN_POSITIVE);
    let mut pts: Vec<f64> = eval_grid.to_vec();
    for j in jumps {
        pts.push(j);
        pts.push(j - delta);
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    Ok(pts)
}

/// `sup_x |F1(x) - F2(x)|` over the refined grid; left limits at jumps are included.
pub fn sup_cdf_distance(f1: &Cdf, f2: &Cdf, eval_grid: &[f64]) -> Result<f64> {
    let pts = refined_grid(f1, f2, eval_grid)?;
    let mut sup = pts.iter().map(|&x| (f1.eval(x) - f2.eval(x)).abs()).fold(0.0, f64::max);
    for &j in f1.jump_points().iter().chain(f2.jump_points()) {
        sup = sup.max((f1.eval_left(j) - f2.eval_left(j)).abs());
    }
    Ok(sup)
}

fn trapezoid_nonuniform(xs: &[f64], ys: &[f64]) -> f64 {
    xs.windows(2).zip(ys.windows(2)).map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1])).sum()
}

/// `(∫ (F1 - F2)²)^{1/2}` by the trapezoid rule on the refined grid.
pub fn l2_cdf_distance(f1: &Cdf, f2: &Cdf, eval_grid: &[f64]) -> Result<f64> {
    let pts = refined_grid(f1, f2, eval_grid)?;
    let sq: Vec<f64> = pts.iter().map(|&x| (f1.eval(x) - f2.eval(x)).powi(2)).collect();
    Ok(trapezoid_nonuniform(&pts, &sq).sqrt())
}

/// `∫ |F1 - F2|` by the trapezoid rule on the refined grid.
pub fn wasserstein1_numeric(f1: &Cdf, f2: &Cdf, eval_grid: &[f64]) -> Result<f64> {
    let pts = refined_grid(f1, f2, eval_grid)?;
    let abs: Vec<f64> = pts.iter().map(|&x| (f1.eval(x) - f2.eval(x)).abs()).collect();
    Ok(trapezoid_nonuniform(&pts, &abs))
}

/// Hellinger distance `(∫ (√f_a - √f_b)²)^{1/2}` between two Gaussians, in `[0, √2]`.
pub fn hellinger_gaussian(a: &GaussianLaw, b: &GaussianLaw) -> f64 {
    let (sa, sb) = (a.sd(), b.sd());
    let var_sum = sa * sa + sb * sb;
    let d = a.mean() - b.mean();
    let affinity = (2.0 * sa * sb / var_sum).sqrt() * (-d * d / (4.0 * var_sum)).exp();
    std::f64::consts::SQRT_2 * (1.0 - affinity).max(0.0).sqrt()
}

/// 2-Wasserstein distance between two Gaussians.
pub fn wasserstein2_gaussian(a: &GaussianLaw, b: &GaussianLaw) -> f64 {
    let d = a.mean() - b.mean();
    let ds = a.sd() - b.sd();
    // Same as √(Δ² + σa² + σb² - 2σaσb) without cancellation.
    (d * d + ds * ds).sqrt()
}

/// Density-crossing points of two Gaussians with different scales.
fn density_crossings(a: &GaussianLaw, b: &GaussianLaw) -> Vec<f64> {
    let (ma, mb) = (a.mean(), b.mean());
    let (va, vb) = (a.sd() * a.sd(), b.sd() * b.sd());
    let qa = 0.5 / vb - 0.5 / va;
    let qb = ma / va - mb / vb;
    let qc = 0.5 * mb * mb / vb - 0.5 * ma * ma / va + (b.sd() / a.sd()).ln();
    let disc = qb * qb - 4.0 * qa * qc;
    if disc < 0.0 {
        return Vec::new();
    }
    let root = disc.sqrt();
    let q = -0.5 * (qb + qb.signum() * root);
    let mut out = Vec::with_capacity(2);
    if q != 0.0 {
        out.push(qc / q);
        out.push(q / qa);
    } else {
        out.push(0.0);
    }
    out
}

/// Kolmogorov distance between two Gaussians, evaluated at the density crossings.
pub fn kolmogorov_gaussian_exact(a: &GaussianLaw, b: &GaussianLaw) -> f64 {
    if a.sd() == b.sd() {
        let z = (a.mean() - b.mean()).abs() / (2.0 * a.sd());
        return 2.0 * standard_normal_cdf(z) - 1.0;
    }
    density_crossings(a, b).into_iter().map(|x| (a.cdf(x) - b.cdf(x)).abs()).fold(0.0, f64::max)
}

/// `E|X - c|` for `X ~ N(μ, σ)`.
fn folded_mean(law: &GaussianLaw, c: f64) -> f64 {
    let (m, sd) = (law.mean() - c, law.sd());
    sd * (2.0 / std::f64::consts::PI).sqrt() * (-0.5 * (m / sd).powi(2)).exp()
        + m * (1.0 - 2.0 * standard_normal_cdf(-m / sd))
}

/// Exact `(L², sup)` CDF distances between a Gaussian and a Gaussian or step truth.
///
/// L² uses `∫(F - G)² = E|X - Y| - E|X - X'|/2 - E|Y - Y'|/2` for independent copies.
/// Sup is attained at a density crossing (Gaussian) or at a jump, from either side (step).
pub fn exact_cdf_distances(fitted: &GaussianLaw, truth: &Cdf) -> Result<(f64, f64)> {
    let inv_sqrt_pi = 1.0 / std::f64::consts::PI.sqrt();
    match truth {
        Cdf::Gaussian(law) => {
            let diff =
                GaussianLaw::new(fitted.mean() - law.mean(), (fitted.sd() * fitted.sd() + law.sd() * law.sd()).sqrt())?;
            let cross = folded_mean(&diff, 0.0);
            let sq = cross - inv_sqrt_pi * (fitted.sd() + law.sd());
            Ok((sq.max(0.0).sqrt(), kolmogorov_gaussian_exact(fitted, law)))
        }
        Cdf::Step { points, cumulative } => {
            let mut cross = 0.0;
            let mut sup: f64 = 0.0;
            // Σ_{j<k} p_j p_k (y_k - y_j), accumulated left to right.
            let (mut self_energy, mut mass_left, mut moment_left) = (0.0, 0.0, 0.0);
            let mut prev = 0.0;
            for (&y, &c) in points.iter().zip(cumulative) {
                let p = c - prev;
                prev = c;
                cross += p * folded_mean(fitted, y);
                self_energy += p * (y * mass_left - moment_left);
                mass_left += p;
                moment_left += p * y;
                let phi = fitted.cdf(y);
                sup = sup.max((phi - c).abs()).max((phi - (c - p)).abs());
            }
            let sq = cross - inv_sqrt_pi * fitted.sd() - self_energy;
            Ok((sq.max(0.0).sqrt(), sup))
        }
        Cdf::Linear { .. } => Err(Error::InvalidParameter("exact distances need a Gaussian or step truth".into())),
    }
}

/// `C ζ s⁻³ / √T`.
pub fn berry_esseen_bound(third_abs_moment: f64, sd: f64, t: u32, c: f64) -> Result<f64> {
    if !(BERRY_ESSEEN_C_MIN..=BERRY_ESSEEN_C).contains(&c) {
        return Err(Error::Constant(c));
    }
    if !(third_abs_moment >= 0.0) || !(sd > 0.0) || t == 0 {
        return Err(Error::InvalidParameter(format!(
            "need zeta >= 0, sd > 0, T >= 1; got {third_abs_moment}, {sd}, {t}"
        )));
    }
    Ok(c * third_abs_moment / (sd * sd * sd) / (t as f64).sqrt())
}

/// Triangle-inequality bound on the Kolmogorov distance between `fitted` and the true proxy law:
/// exact distance to the limit Gaussian plus the Berry-Esseen term.
pub fn kolmogorov_error_bound(fitted: &GaussianLaw, truth: &ProxyTruth) -> Result<f64> {
    let limit = truth.limit_law()?;
    let be = berry_esseen_bound(truth.third_abs_moment(), truth.s(), truth.sample_size(), BERRY_ESSEEN_C)?;
    Ok(kolmogorov_gaussian_exact(fitted, &limit) + be)
}

/// All distances between a fitted Gaussian and a proxy truth.
pub fn distance_report(fitted: &GaussianLaw, truth: &ProxyTruth, grid_points: usize) -> Result<DistanceReport> {
    let fitted_cdf = Cdf::Gaussian(*fitted);
    let grid = evaluation_grid(&[&fitted_cdf, truth.cdf()], grid_points);
    let (l2_cdf, sup_cdf) = exact_cdf_distances(fitted, truth.cdf())?;
    let mut report = DistanceReport {
        l2_cdf,
        sup_cdf,
        hellinger: None,
        wasserstein2: None,
        wasserstein1: Some(wasserstein1_numeric(&fitted_cdf, truth.cdf(), &grid)?),
        berry_esseen_bound: Some(berry_esseen_bound(
            truth.third_abs_moment(),
            truth.s(),
            truth.sample_size(),
            BERRY_ESSEEN_C,
        )?),
        kolmogorov_error_bound: Some(kolmogorov_error_bound(fitted, truth)?),
    };
    if let Cdf::Gaussian(law) = truth.cdf() {
        report.hellinger = Some(hellinger_gaussian(fitted, law));
        report.wasserstein2 = Some(wasserstein2_gaussian(fitted, law));
    }
    Ok(report)
}

/// Distances between two parametric Gaussians.
pub fn gaussian_pair_report(a: &GaussianLaw, b: &GaussianLaw, grid_points: usize) -> Result<DistanceReport> {
    let (fa, fb) = (Cdf::Gaussian(*a), Cdf::Gaussian(*b));
    let grid = evaluation_grid(&[&fa, &fb], grid_points);
    Ok(DistanceReport {
        l2_cdf: l2_cdf_distance(&fa, &fb, &grid)?,
        sup_cdf: kolmogorov_gaussian_exact(a, b),
        hellinger: Some(hellinger_gaussian(a, b)),
        wasserstein2: Some(wasserstein2_gaussian(a, b)),
        wasserstein1: Some(wasserstein1_numeric(&fa, &fb, &grid)?),
        berry_esseen_bound: None,
        kolmogorov_error_bound: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub standard_error: f64,
    pub draws: usize,
}

/// Options of [`fitted_cdf_law_oracle`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FittedCdfOracle {
    pub theta0: f64,
    pub s: f64,
    pub t: u32,
    pub n_mc: usize,
    /// Use the true `s` in the fitted law instead of an estimate.
    pub sd_known: bool,
    pub convention: SdConvention,
}

/// Monte-Carlo estimate of `H_x(y) = P(F̂(x) <= y)` for the fitted Gaussian CDF
/// under i.i.d. `N(θ0, s)` data.
///
/// Draws `X̄ ~ N(θ0, s/√T)` and, independently, `W ~ χ²_{T-1}` with `s_T² = s² W / d`
/// (`d = T` or `T - 1` by convention), then thresholds `Φ((x - X̄) / (s_T/√T))`.
pub fn fitted_cdf_law_oracle(x: f64, y: f64, opts: &FittedCdfOracle, stream: RngStream) -> Result<McEstimate> {
    if opts.t < 2 {
        return Err(Error::InvalidParameter("T must be >= 2".into()));
    }
    if !(opts.s > 0.0) {
        return Err(Error::InvalidParameter("s must be > 0".into()));
    }
    if opts.n_mc == 0 {
        return Err(Error::InvalidParameter("n_mc must be >= 1".into()));
    }
    // F̂(x) lies strictly inside (0, 1).
    if y >= 1.0 {
        return Ok(McEstimate { estimate: 1.0, standard_error: 0.0, draws: opts.n_mc });
    }
    if y <= 0.0 {
        return Ok(McEstimate { estimate: 0.0, standard_error: 0.0, draws: opts.n_mc });
    }
    let t = opts.t as f64;
    let chi = ChiSquared::new(t - 1.0).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let div = match opts.convention {
        SdConvention::DivT => t,
        SdConvention::DivTm1 => t - 1.0,
    };
    let threshold = standard_normal_quantile(y)?;
    let mut rng = stream.rng();
    let mut hits = 0usize;
    for _ in 0..opts.n_mc {
        let z: f64 = rng.sample(StandardNormal);
        let xbar = opts.theta0 + opts.s / t.sqrt() * z;
        let s_t = if opts.sd_known { opts.s } else { opts.s * (chi.sample(&mut rng) / div).sqrt() };
        let stat = (x - xbar) / (s_t / t.sqrt());
        if stat <= threshold {
            hits += 1;
        }
    }
    let p = hits as f64 / opts.n_mc as f64;
    Ok(McEstimate { estimate: p, standard_error: (p * (1.0 - p) / opts.n_mc as f64).sqrt(), draws: opts.n_mc })
}
