use super::sample::{sample_mean, sample_sd, Sample, SdConvention};
use crate::dist::GaussianLaw;
use crate::error::{Error, Result};

/// `N(mean, sd / sqrt(T))` centered at the sample mean.
pub fn gaussian_approx(s: &Sample) -> Result<GaussianLaw> {
    gaussian_approx_with(s, SdConvention::DivT)
}

pub fn gaussian_approx_with(s: &Sample, convention: SdConvention) -> Result<GaussianLaw> {
    let sd = sample_sd(s, convention);
    if !(sd > 0.0) {
        return Err(Error::DegenerateSample);
    }
    GaussianLaw::new(sample_mean(s), sd / (s.len() as f64).sqrt())
}

/// Gaussian approximation with the data standard deviation treated as known.
pub fn gaussian_approx_known_sd(s: &Sample, sd: f64) -> Result<GaussianLaw> {
    GaussianLaw::new(sample_mean(s), sd / (s.len() as f64).sqrt())
}

/// Per-coordinate marginals of `N(theta_star, diag(sigma_hat) / T)`.
///
/// Off-diagonal entries of `sigma_hat` are ignored.
pub fn gaussian_approx_mv(theta_star: &[f64], sigma_hat: &[Vec<f64>], t: usize) -> Result<Vec<GaussianLaw>> {
    if t == 0 {
        return Err(Error::InvalidParameter("T must be >= 1".into()));
    }
    if sigma_hat.len() != theta_star.len() || sigma_hat.iter().any(|r| r.len() != theta_star.len()) {
        return Err(Error::Covariance(format!("covariance must be {0}x{0} to match theta", theta_star.len())));
    }
    theta_star
        .iter()
        .enumerate()
        .map(|(k, &m)| {
            let v = sigma_hat[k][k];
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Covariance(format!("diagonal entry {k} is {v}, need > 0")));
            }
            GaussianLaw::new(m, (v / t as f64).sqrt())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_points() {
        let law = gaussian_approx(&Sample::new(vec![1.0, 2.0, 3.0]).unwrap()).unwrap();
        assert_eq!(law.mean(), 2.0);
        assert!((law.sd() - (2.0_f64 / 3.0).sqrt() / 3.0_f64.sqrt()).abs() < 1e-15);
        assert!((law.sd() - 0.4714).abs() < 1e-4);
    }

    #[test]
    fn constant_sample_is_degenerate() {
        let err = gaussian_approx(&Sample::new(vec![5.0; 3]).unwrap()).unwrap_err();
        assert_eq!(err, Error::DegenerateSample);
    }

    #[test]
    fn multivariate_diagonal() {
        let laws = gaussian_approx_mv(&[0.0], &[vec![1.0]], 100).unwrap();
        assert!((laws[0].sd() - 0.1).abs() < 1e-15);
        let laws = gaussian_approx_mv(&[1.0, 2.0], &[vec![4.0, 0.3], vec![0.3, 9.0]], 25).unwrap();
        assert_eq!(laws[0].mean(), 1.0);
        assert!((laws[0].sd() - 0.4).abs() < 1e-15);
        assert!((laws[1].sd() - 0.6).abs() < 1e-15);
        let err = gaussian_approx_mv(&[1.0, 2.0], &[vec![0.0, 0.0], vec![0.0, 1.0]], 5);
        assert!(matches!(err, Err(Error::Covariance(_))));
        assert!(gaussian_approx_mv(&[1.0], &[vec![1.0, 0.0]], 5).is_err());
    }
}
