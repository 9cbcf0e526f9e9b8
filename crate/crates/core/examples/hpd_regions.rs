//! Highest-density regions of a bimodal grid density and of an atomic law.

use neoclassical::dist::{atom_density, grid_density, linspace, GaussianLaw};
use neoclassical::inference::{hpd_region, hpd_threshold, region_mass};

fn main() -> Result<(), neoclassical::Error> {
    let left = GaussianLaw::new(-2.0, 0.5)?;
    let right = GaussianLaw::new(1.5, 0.8)?;
    let grid = linspace(-5.0, 5.0, 2001);
    let raw = grid.iter().map(|&t| 0.4 * left.pdf(t) + 0.6 * right.pdf(t)).collect();
    let d = grid_density(grid, raw)?;
    for alpha in [0.5, 0.2, 0.05] {
        let r = hpd_region(&d, alpha)?;
        println!("alpha {alpha}: k = {:.5}, mass = {:.5}, {:?}", r.threshold_k, r.achieved_mass, r.members);
        assert!((region_mass(&d, &r)? - r.achieved_mass).abs() < 1e-12);
    }

    let atoms = atom_density(vec![(0.0, 0.1), (1.0, 0.45), (2.0, 0.3), (3.0, 0.15)])?;
    for alpha in [0.6, 0.3, 0.1] {
        let r = hpd_region(&atoms, alpha)?;
        println!("atoms alpha {alpha}: k = {}, {:?}", hpd_threshold(&atoms, alpha)?, r.members);
    }
    Ok(())
}
