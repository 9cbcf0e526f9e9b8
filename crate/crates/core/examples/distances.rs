//! Distances between fitted Gaussians and exact proxy laws, with the Berry-Esseen envelope.

use neoclassical::approx::{gaussian_approx, Sample, SdConvention};
use neoclassical::dist::{GaussianLaw, RngStream};
use neoclassical::metrics::{
    berry_esseen_bound, distance_report, fitted_cdf_law_oracle, gaussian_pair_report, kolmogorov_gaussian_exact,
    FittedCdfOracle, ProxyTruth, BERRY_ESSEEN_C,
};
use neoclassical::montecarlo::{simulate, Dgp};

fn main() -> Result<(), neoclassical::Error> {
    let a = GaussianLaw::new(0.0, 1.0)?;
    let b = GaussianLaw::new(0.5, 1.5)?;
    println!("N(0,1) vs N(0.5,1.5): {:#?}", gaussian_pair_report(&a, &b, 20_001)?);

    let x = simulate(&Dgp::Bernoulli { p: 0.5 }, 50, RngStream::new(11, 0));
    let fitted = gaussian_approx(&Sample::new(x)?)?;
    let truth = ProxyTruth::binomial_mean(50, 0.5)?;
    let r = distance_report(&fitted, &truth, 20_001)?;
    println!("fitted vs Binomial(50, .5)/50: sup {:.4} <= bound {:.4}", r.sup_cdf, r.kolmogorov_error_bound.unwrap());

    for t in [20, 50, 100] {
        let truth = ProxyTruth::binomial_mean(t, 0.5)?;
        let limit = truth.limit_law()?;
        let gap = distance_report(&limit, &truth, 20_001)?.sup_cdf;
        let be = berry_esseen_bound(truth.third_abs_moment(), truth.s(), t, BERRY_ESSEEN_C)?;
        println!("T = {t:>3}: sup|F_T - Φ| = {gap:.4}, Berry-Esseen {be:.4}");
    }

    let truth = GaussianLaw::new(0.0, 0.2 / 10.0)?;
    let opts =
        FittedCdfOracle { theta0: 0.0, s: 0.2, t: 100, n_mc: 20_000, sd_known: false, convention: SdConvention::DivT };
    let y = truth.cdf(0.01);
    let est = fitted_cdf_law_oracle(0.01, y, &opts, RngStream::new(5, 0))?;
    println!("P(F̂(0.01) <= F(0.01)) ≈ {:.4} ± {:.4}", est.estimate, est.standard_error);
    println!("exact Kolmogorov N(0,1) vs N(0,2): {:.6}", kolmogorov_gaussian_exact(&a, &GaussianLaw::new(0.0, 2.0)?));
    Ok(())
}
