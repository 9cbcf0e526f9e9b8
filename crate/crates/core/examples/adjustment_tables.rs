//! Level and critical-value conversions implied by the √2 adjustment.

use neoclassical::adjustment::{asymptotic_unadjusted_coverage, conversion_curve, default_curve_grid};
use neoclassical::cli::conversion_tables;

fn main() -> Result<(), neoclassical::Error> {
    let t = conversion_tables(512)?;
    println!("nominal -> adjusted level");
    for (a, b) in &t.nominal_to_adjusted {
        println!("  {a:<5} {b:.4}");
    }
    println!("adjusted -> nominal level");
    for (a, b) in &t.adjusted_to_nominal {
        println!("  {a:<5} {b:.3e}");
    }
    println!("critical value -> adjusted critical value");
    for (a, b) in &t.critical_values {
        println!("  {a:<5} {b:.4}");
    }
    println!("coverage of unadjusted intervals, large T");
    for alpha in [0.32, 0.1, 0.05, 0.01] {
        println!("  {:.2} -> {:.4}", 1.0 - alpha, asymptotic_unadjusted_coverage(alpha)?);
    }
    let curve = conversion_curve(&default_curve_grid(8))?;
    println!("curve sample: {curve:.3?}");
    Ok(())
}
