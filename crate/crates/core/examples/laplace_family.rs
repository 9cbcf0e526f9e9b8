//! Laplace quasi-posteriors from registry objectives, weights and criteria.

use neoclassical::approx::{criterion_adjusted_laplace, gaussian_approx_known_sd, laplace_approx, Sample};
use neoclassical::dist::{linspace, RngStream};
use neoclassical::inference::{hpd_region, mode_estimate};
use neoclassical::montecarlo::{simulate, Dgp};
use neoclassical::objectives::{
    bernoulli_grid, build_criterion, build_objective, weight_change_of_measure, CriterionSpec, ObjectiveSpec,
};
use serde_json::json;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let x = simulate(&Dgp::Gaussian { theta0: 1.0, s: 1.0 }, 50, RngStream::new(3, 0));
    let s = Sample::new(x)?;
    let grid = linspace(0.0, 2.0, 1001);

    let plain_spec: ObjectiveSpec =
        serde_json::from_value(json!({"name": "gaussian-loglik", "params": {"sigma": 1.0}}))?;
    let plain = laplace_approx(&build_objective(&plain_spec)?, &s, &grid, s.len())?;
    let reference = gaussian_approx_known_sd(&s, 1.0)?;
    let gap = grid.iter().zip(plain.values()).map(|(t, v)| (reference.pdf(*t) - v).abs()).fold(0.0, f64::max);
    println!("gaussian-loglik: mode {:.4}, sup gap to N(X̄, 1/√T) {gap:.2e}", mode_estimate(&plain));

    let weighted_spec: ObjectiveSpec = serde_json::from_value(json!({
        "name": "gaussian-loglik", "params": {"sigma": 1.0},
        "weight_name": "indicator-interval", "weight_params": {"lo": 0.9, "hi": 2.0}
    }))?;
    let weighted = laplace_approx(&build_objective(&weighted_spec)?, &s, &grid, s.len())?;
    let ratio = weight_change_of_measure(&plain, &weighted)?;
    println!(
        "indicator weight: 95% region {:?}, recovered weight at 0.5 / 1.5: {} / {}",
        hpd_region(&weighted, 0.05)?.members,
        ratio[250],
        ratio[750]
    );

    let u = build_criterion(&serde_json::from_value::<CriterionSpec>(
        json!({"name": "gaussian-kernel", "params": {"tau": 0.1}}),
    )?)?;
    let smoothed = criterion_adjusted_laplace(&u, &build_objective(&plain_spec)?, &s, &grid, s.len())?;
    println!("criterion-smoothed: 95% region {:?}", hpd_region(&smoothed, 0.05)?.members);

    let coin = Sample::new(simulate(&Dgp::Bernoulli { p: 0.3 }, 40, RngStream::new(3, 1)))?;
    let spec: ObjectiveSpec = serde_json::from_value(json!({"name": "bernoulli-loglik"}))?;
    let d = laplace_approx(&build_objective(&spec)?, &coin, &bernoulli_grid(999), coin.len())?;
    println!("bernoulli-loglik: mode {:.3}, 95% region {:?}", mode_estimate(&d), hpd_region(&d, 0.05)?.members);
    Ok(())
}
