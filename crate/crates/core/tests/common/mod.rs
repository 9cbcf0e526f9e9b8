//! Independent numeric oracles shared by the integration tests.
#![allow(dead_code)]

pub fn phi(z: f64) -> f64 {
    0.5 * libm::erfc(-z / std::f64::consts::SQRT_2)
}

pub fn normal_pdf(x: f64, m: f64, s: f64) -> f64 {
    let z = (x - m) / s;
    (-0.5 * z * z).exp() / (s * (2.0 * std::f64::consts::PI).sqrt())
}

pub fn normal_cdf(x: f64, m: f64, s: f64) -> f64 {
    phi((x - m) / s)
}

/// Smallest `x` in `[lo, hi]` with `f(x) >= target`, for increasing `f`.
pub fn bisect(f: impl Fn(f64) -> f64, target: f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Composite Simpson rule with `n` (even) intervals.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    assert!(n.is_multiple_of(2));
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

/// Kolmogorov-Smirnov statistic of a sample against a continuous or step CDF.
/// `cdf_left` gives left limits so that atoms are handled exactly.
pub fn ks_statistic(sample: &[f64], cdf: impl Fn(f64) -> f64, cdf_left: impl Fn(f64) -> f64) -> f64 {
    let mut x = sample.to_vec();
    x.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = x.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < x.len() {
        let mut j = i;
        while j + 1 < x.len() && x[j + 1] == x[i] {
            j += 1;
        }
        let below = i as f64 / n;
        let upto = (j + 1) as f64 / n;
        d = d.max((cdf(x[i]) - upto).abs()).max((cdf_left(x[i]) - below).abs());
        i = j + 1;
    }
    d
}

/// 5% critical value of the one-sample KS test, large-sample form.
pub fn ks_critical_5pct(n: usize) -> f64 {
    1.358 / (n as f64).sqrt()
}

pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    sxy / (sxx * syy).sqrt()
}

/// Minimal-cardinality subsets of `weights` whose sum reaches `target`, by Gray-code
/// enumeration of all subsets. Returns the size and the largest achievable sum at that size.
pub fn brute_force_minimal(weights: &[u64], target: u64) -> (u32, u64) {
    let n = weights.len();
    assert!(n <= 26);
    let mut best_count = u32::MAX;
    let mut best_sum = 0u64;
    let mut sum = 0u64;
    let mut mask = 0u32;
    for k in 1u32..(1u32 << n) {
        let bit = k.trailing_zeros() as usize;
        mask ^= 1 << bit;
        if mask & (1 << bit) != 0 {
            sum += weights[bit];
        } else {
            sum -= weights[bit];
        }
        if sum >= target {
            let c = mask.count_ones();
            if c < best_count || (c == best_count && sum > best_sum) {
                best_count = c;
                best_sum = sum;
            }
        }
    }
    (best_count, best_sum)
}
