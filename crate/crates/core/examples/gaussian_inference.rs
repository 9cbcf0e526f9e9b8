//! Mode estimate, HPD regions, tests and unadjusted versus √2-adjusted
//! intervals from a Gaussian approximation of the sample-mean proxy.

use neoclassical::adjustment::{adjusted_interval, unadjusted_interval};
use neoclassical::approx::{gaussian_approx, Sample};
use neoclassical::dist::{default_grid, Density1D, RngStream};
use neoclassical::inference::{hpd_region, mode_estimate, neoclassical_test};
use neoclassical::montecarlo::{simulate, Dgp};

fn main() -> Result<(), neoclassical::Error> {
    let x = simulate(&Dgp::Gaussian { theta0: 0.0, s: 0.2 }, 100, RngStream::new(7, 0));
    let s = Sample::new(x)?;
    let law = gaussian_approx(&s)?;
    let d = Density1D::from_gaussian(&law, default_grid(&law))?;
    println!("fitted N({:.5}, {:.5}), estimate {:.5}", law.mean(), law.sd(), mode_estimate(&d));

    for alpha in [0.32, 0.1, 0.05, 0.01] {
        let r = hpd_region(&d, alpha)?;
        let (ul, uu) = unadjusted_interval(law.mean(), law.sd(), alpha)?;
        let (al, au) = adjusted_interval(law.mean(), law.sd(), alpha)?;
        println!(
            "alpha {alpha:<4}  hpd {:?}  mass {:.4}  unadjusted [{ul:.4}, {uu:.4}]  adjusted [{al:.4}, {au:.4}]",
            r.members, r.achieved_mass
        );
    }
    for theta in [0.0, 0.05] {
        let t = neoclassical_test(&d, 0.05, theta)?;
        println!("test theta = {theta}: {:?}", t.decision);
    }
    Ok(())
}
