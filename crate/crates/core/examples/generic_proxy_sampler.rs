//! Draws of the generic proxy by inverse transform from an approximated law,
//! on a stream independent of the data stream.

use neoclassical::approx::{gaussian_approx, Sample};
use neoclassical::dist::{density_cdf, linspace, sample_generic_proxy, uniforms, Cdf, Density1D, RngStream};
use neoclassical::montecarlo::{simulate, Dgp};

fn main() -> Result<(), neoclassical::Error> {
    let data = simulate(&Dgp::Gaussian { theta0: 0.0, s: 0.4 }, 20, RngStream::new(1, 0));
    let law = gaussian_approx(&Sample::new(data)?)?;

    let closed = Cdf::Gaussian(law);
    let gridded = density_cdf(&Density1D::from_gaussian(
        &law,
        linspace(law.mean() - 8.0 * law.sd(), law.mean() + 8.0 * law.sd(), 4001),
    )?);

    let u = uniforms(RngStream::new(1, 1), 100_000);
    for (name, cdf) in [("closed form", &closed), ("grid", &gridded)] {
        let draws = u.iter().map(|&v| sample_generic_proxy(cdf, v)).collect::<Result<Vec<_>, _>>()?;
        let n = draws.len() as f64;
        let mean = draws.iter().sum::<f64>() / n;
        let sd = (draws.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / n).sqrt();
        println!("{name:<12} mean {mean:.5} (target {:.5}), sd {sd:.5} (target {:.5})", law.mean(), law.sd());
    }
    Ok(())
}
