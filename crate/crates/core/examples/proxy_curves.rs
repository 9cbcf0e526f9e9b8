//! True proxy density next to seeded fitted densities, with their 95% regions.

use neoclassical::cli::commands::proxy_curves;
use neoclassical::cli::ProxyCurvesArgs;

fn main() -> Result<(), neoclassical::Error> {
    let args = ProxyCurvesArgs {
        theta0: 0.0,
        s: 0.4,
        t: 20,
        k: 2,
        seed: 1,
        alpha: 0.05,
        grid: None,
        out: "proxy_curves.csv".into(),
    };
    let c = proxy_curves(&args)?;
    println!("{} grid points", c.theta.len());
    println!("truth N({}, {:.4}): {:?}", c.sidecar.truth.mean, c.sidecar.truth.sd, c.sidecar.truth.region);
    for (j, f) in c.sidecar.fitted.iter().enumerate() {
        println!("fit {}: N({:.4}, {:.4}): {:?}", j + 1, f.mean, f.sd, f.region);
    }
    Ok(())
}
