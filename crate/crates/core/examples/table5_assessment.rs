//! Monte-Carlo assessment of the Gaussian approximation over the reference grid
//! of DGPs and sample sizes. Pass `--ci` for the smaller replication count.

use neoclassical::adjustment::asymptotic_unadjusted_coverage;
use neoclassical::montecarlo::{run_assessment, AssessmentConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ci = std::env::args().any(|a| a == "--ci");
    let cfg = if ci { AssessmentConfig::ci_defaults(42) } else { AssessmentConfig::paper_defaults(42) };
    let start = std::time::Instant::now();
    let rows = run_assessment(&cfg)?;
    println!("M = {}, {:.2?}", cfg.replications, start.elapsed());
    print!("{:<26} {:>4} {:>7} {:>7} {:>6} {:>6}", "dgp", "T", "rmse_m", "rmse_s", "L2", "sup");
    for l in &cfg.levels {
        print!(" {:>6}", format!("u{l}"));
    }
    for l in &cfg.levels {
        print!(" {:>6}", format!("a{l}"));
    }
    println!();
    for r in &rows {
        print!(
            "{:<26} {:>4} {:>7.4} {:>7.4} {:>6.3} {:>6.3}",
            r.dgp,
            r.t,
            r.rmse_mean,
            r.rmse_se,
            r.l2_mean.unwrap_or(f64::NAN),
            r.sup_mean.unwrap_or(f64::NAN)
        );
        for c in &r.coverage {
            print!(" {:>6.3}", c.unadjusted);
        }
        for c in &r.coverage {
            print!(" {:>6.3}", c.adjusted);
        }
        println!("{}", if r.degenerate > 0 { format!("  ({} degenerate)", r.degenerate) } else { String::new() });
    }
    print!("{:<26} {:>4} {:>31}", "asymptotic", "inf", "");
    for l in &cfg.levels {
        print!(" {:>6.3}", asymptotic_unadjusted_coverage(1.0 - l)?);
    }
    for l in &cfg.levels {
        print!(" {:>6.3}", l);
    }
    println!();
    Ok(())
}
