use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Least-squares fit of `ln value` against `ln T`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    /// Largest absolute residual in log space.
    pub residual: f64,
    pub samples: usize,
}

/// Fits `value ≈ C T^slope` to `(T, value)` samples.
///
/// Needs at least three samples with increasing `T > 1`, positive values and
/// a span of at least two decades in `T`.
pub fn fit_rate(samples: &[(f64, f64)]) -> Result<RateFit> {
    fit_rate_corrected(samples, 0.0)
}

/// Fits `value ≈ C T^slope (ln T)^log_power`, dividing out the logarithmic
/// factor before the regression.
pub fn fit_rate_corrected(samples: &[(f64, f64)], log_power: f64) -> Result<RateFit> {
    if samples.len() < 3 {
        return Err(Error::domain(format!(
            "rate fit needs at least 3 samples, got {}",
            samples.len()
        )));
    }
    for w in samples.windows(2) {
        if !(w[1].0 > w[0].0) {
            return Err(Error::domain("sample scales must be strictly increasing"));
        }
    }
    let (first, last) = (samples[0].0, samples[samples.len() - 1].0);
    if !(first > 1.0) {
        return Err(Error::domain(format!("sample scales must exceed 1, got {first}")));
    }
    if !(last / first >= 100.0) {
        return Err(Error::domain(format!(
            "sample scales must span two decades, got [{first}, {last}]"
        )));
    }
    let mut pts = Vec::with_capacity(samples.len());
    for &(t, v) in samples {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::domain(format!("sample value at T = {t} must be positive, got {v}")));
        }
        let lt = t.ln();
        pts.push((lt, v.ln() - log_power * lt.ln()));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = pts
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).abs())
        .fold(0.0, f64::max);
    Ok(RateFit {
        slope,
        intercept,
        residual,
        samples: pts.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn ladder() -> Vec<f64> {
        (0..6).map(|i| 10f64 * 4f64.powi(i)).collect()
    }

    #[test]
    fn exact_power_law() {
        let s: Vec<_> = ladder().into_iter().map(|t| (t, 3.0 * t.powf(-1.7))).collect();
        let f = fit_rate(&s).unwrap();
        assert_relative_eq!(f.slope, -1.7, epsilon = 1e-12);
        assert_relative_eq!(f.intercept, 3f64.ln(), epsilon = 1e-10);
        assert!(f.residual < 1e-12);
    }

    #[test]
    fn log_factor_is_removed() {
        let s: Vec<_> = ladder().into_iter().map(|t| (t, t.powf(0.5) * t.ln().powi(2))).collect();
        assert!((fit_rate(&s).unwrap().slope - 0.5).abs() > 0.1);
        let f = fit_rate_corrected(&s, 2.0).unwrap();
        assert_relative_eq!(f.slope, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn bad_samples_are_rejected() {
        assert!(fit_rate(&[(10.0, 1.0), (1000.0, 2.0)]).is_err());
        assert!(fit_rate(&[(10.0, 1.0), (20.0, 2.0), (40.0, 3.0)]).is_err());
        assert!(fit_rate(&[(10.0, 1.0), (100.0, 0.0), (1000.0, 3.0)]).is_err());
        assert!(fit_rate(&[(10.0, 1.0), (1000.0, 2.0), (100.0, 3.0)]).is_err());
        assert!(fit_rate(&[(0.5, 1.0), (10.0, 2.0), (100.0, 3.0)]).is_err());
    }
}
