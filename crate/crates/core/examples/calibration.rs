//! Plain calibration (a point mass) and its criterion-smoothed variants.

use neoclassical::approx::{criterion_adjusted_calibration, plain_calibration, CriterionFn};
use neoclassical::dist::linspace;
use neoclassical::inference::{hpd_region, mode_estimate};

fn main() -> Result<(), neoclassical::Error> {
    let theta_star = 1.5;
    let plain = plain_calibration(theta_star)?;
    println!("plain: estimate {}, 95% region {:?}", mode_estimate(&plain), hpd_region(&plain, 0.05)?.members);

    let grid = linspace(0.0, 3.0, 601);
    for (name, u) in
        [("indicator(0.25)", CriterionFn::indicator(0.25)), ("gaussian-kernel(0.2)", CriterionFn::gaussian_kernel(0.2))]
    {
        let d = criterion_adjusted_calibration(&u, theta_star, &grid)?;
        let r = hpd_region(&d, 0.05)?;
        println!("{name}: estimate {:.3}, 95% region {:?}", mode_estimate(&d), r.members);
    }
    Ok(())
}
