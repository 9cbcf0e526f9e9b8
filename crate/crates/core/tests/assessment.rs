use neoclassical::adjustment::{
    adjusted_to_nominal, asymptotic_unadjusted_coverage, nominal_to_adjusted, unadjusted_interval,
};
use neoclassical::approx::SdConvention;
use neoclassical::dist::RngStream;
use neoclassical::montecarlo::{
    cell_records, replicate, run_assessment, run_assessment_with_threads, AssessmentConfig, AssessmentRow, Dgp,
};
use proptest::prelude::*;

proptest! {
    #[test]
    fn level_conversions_round_trip(alpha in 1e-6f64..1.0) {
        let adj = nominal_to_adjusted(alpha).unwrap();
        prop_assert!(adj >= alpha);
        prop_assert!((adjusted_to_nominal(adj).unwrap() - alpha).abs() < 1e-9 * alpha.max(1e-3));
        prop_assert!((nominal_to_adjusted(adjusted_to_nominal(alpha).unwrap()).unwrap() - alpha).abs() < 1e-10);
    }
}

fn small(dgps: Vec<Dgp>, sizes: Vec<u32>, m: usize) -> AssessmentConfig {
    AssessmentConfig { dgps, sample_sizes: sizes, replications: m, ..AssessmentConfig::paper_defaults(1234) }
}

#[test]
fn deterministic_across_runs_and_threads() {
    let cfg = small(vec![Dgp::Gaussian { theta0: 0.5, s: 1.0 }, Dgp::Bernoulli { p: 0.2 }], vec![20, 50], 300);
    let a = run_assessment(&cfg).unwrap();
    let b = run_assessment_with_threads(&cfg, 1).unwrap();
    let c = run_assessment_with_threads(&cfg, 3).unwrap();
    assert_eq!(a, b);
    assert_eq!(b, c);
}

/// Binomial pmf by convolution, independent of the library's lgamma construction.
fn pmf(t: u32, p: f64) -> Vec<f64> {
    let mut v = vec![1.0];
    for _ in 0..t {
        let mut n = vec![0.0; v.len() + 1];
        for (k, m) in v.iter().enumerate() {
            n[k] += m * (1.0 - p);
            n[k + 1] += m * p;
        }
        v = n;
    }
    v
}

#[test]
fn bernoulli_coverage_matches_enumeration() {
    let levels = [0.68, 0.9, 0.95, 0.99];
    for t in [2u32, 3, 7, 12, 20] {
        for p in [0.5, 0.066_987_298_107_780_67, 0.8] {
            let probs = pmf(t, p);
            for m in 0..25 {
                let r =
                    replicate(&Dgp::Bernoulli { p }, t, RngStream::new(77, m), &levels, SdConvention::DivT).unwrap();
                for (i, &level) in levels.iter().enumerate() {
                    for (adjusted, got) in [(false, r.coverage_unadjusted[i]), (true, r.coverage_adjusted[i])] {
                        let scale = if adjusted { std::f64::consts::SQRT_2 } else { 1.0 };
                        let (a, b) = unadjusted_interval(r.mean, scale * r.se, 1.0 - level).unwrap();
                        let brute: f64 = (0..=t as usize)
                            .filter(|&k| {
                                let x = k as f64 / t as f64;
                                a <= x && x <= b
                            })
                            .map(|k| probs[k])
                            .sum();
                        assert!((got - brute).abs() < 1e-12, "T={t} p={p} m={m} level={level}: {got} vs {brute}");
                    }
                }
            }
        }
    }
}

#[test]
fn adjusted_never_below_unadjusted() {
    let cfg = small(
        vec![Dgp::Gaussian { theta0: 0.0, s: 0.2 }, Dgp::Bernoulli { p: 0.5 }, Dgp::Bernoulli { p: 0.07 }],
        vec![20, 50],
        500,
    );
    for dgp in &cfg.dgps {
        for &t in &cfg.sample_sizes {
            for r in cell_records(&cfg, dgp, t).unwrap() {
                for (u, a) in r.coverage_unadjusted.iter().zip(&r.coverage_adjusted) {
                    assert!(a >= u);
                }
            }
        }
    }
    for row in run_assessment(&cfg).unwrap() {
        for c in &row.coverage {
            assert!(c.adjusted >= c.unadjusted);
            assert!((0.0..=1.0).contains(&c.unadjusted) && (0.0..=1.0).contains(&c.adjusted));
        }
    }
}

#[test]
fn gaussian_rows_identical_across_scales() {
    let cfg = small(vec![Dgp::Gaussian { theta0: 0.0, s: 0.2 }, Dgp::Gaussian { theta0: 0.0, s: 0.4 }], vec![20], 500);
    let rows = run_assessment(&cfg).unwrap();
    assert_eq!(rows[0].coverage, rows[1].coverage);
    assert_eq!(rows[0].sup_mean, rows[1].sup_mean);
    assert!((rows[1].rmse_mean / rows[0].rmse_mean - 2.0).abs() < 1e-12);
}

/// Distance to the large-T coverage shrinks across T, up to Monte-Carlo error.
#[test]
fn coverage_approaches_asymptotic_values() {
    let cfg = small(vec![Dgp::Gaussian { theta0: 1.0, s: 0.5 }], vec![20, 50, 100], 4000);
    let rows = run_assessment(&cfg).unwrap();
    for (i, &level) in cfg.levels.iter().enumerate() {
        let alpha = 1.0 - level;
        let anchor_u = asymptotic_unadjusted_coverage(alpha).unwrap();
        let gaps: Vec<(f64, f64, f64, f64)> = rows
            .iter()
            .map(|r| {
                let c = &r.coverage[i];
                ((c.unadjusted - anchor_u).abs(), c.unadjusted_mcse, (c.adjusted - level).abs(), c.adjusted_mcse)
            })
            .collect();
        for w in gaps.windows(2) {
            let (gu0, su0, ga0, sa0) = w[0];
            let (gu1, su1, ga1, sa1) = w[1];
            assert!(gu1 <= gu0 + 3.0 * (su0 * su0 + su1 * su1).sqrt(), "level {level}: {gaps:?}");
            assert!(ga1 <= ga0 + 3.0 * (sa0 * sa0 + sa1 * sa1).sqrt(), "level {level}: {gaps:?}");
        }
    }
}

#[test]
fn degenerate_samples_are_counted_and_excluded() {
    let cfg = small(vec![Dgp::Bernoulli { p: 0.02 }], vec![5], 400);
    let row = &run_assessment(&cfg).unwrap()[0];
    // About 0.98^5 of the samples are all zero.
    assert!(row.degenerate > 300 && row.degenerate < row.replications);
    let records = cell_records(&cfg, &cfg.dgps[0], 5).unwrap();
    let l2: Vec<f64> = records.iter().filter_map(|r| r.l2).collect();
    assert_eq!(l2.len(), row.replications - row.degenerate);
    assert!((row.l2_mean.unwrap() - l2.iter().sum::<f64>() / l2.len() as f64).abs() < 1e-12);
}

#[test]
fn rows_round_trip_through_json() {
    let cfg = small(vec![Dgp::Bernoulli { p: 0.3 }], vec![20], 50);
    let rows = run_assessment(&cfg).unwrap();
    let back: Vec<AssessmentRow> = serde_json::from_str(&serde_json::to_string(&rows).unwrap()).unwrap();
    assert_eq!(back, rows);
    let cfg_back: AssessmentConfig = serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
    assert_eq!(cfg_back, cfg);
}
