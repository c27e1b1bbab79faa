//! Chain diagnostics and interval summaries.

use alloc::vec::Vec;

use crate::{Error, Result};

pub const DEFAULT_FRAC_FIRST: f64 = 0.1;
pub const DEFAULT_FRAC_LAST: f64 = 0.5;
pub const GEWEKE_MIN_LEN: usize = 100;
pub const ESS_MIN_LEN: usize = 100;

/// Geweke's comparison of the early and late segments of a chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GewekeResult {
    pub z: f64,
    pub frac_first: f64,
    pub frac_last: f64,
    /// `|z| < 1.96`.
    pub pass: bool,
}

fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Variance of the segment mean, from non-overlapping batch means with about
/// `√len` batches.
fn batch_means_var_of_mean(x: &[f64]) -> f64 {
    let len = x.len();
    let batches = (libm::sqrt(len as f64) as usize).max(2);
    let size = len / batches;
    let used = size * batches;
    let batch_means: Vec<f64> = x[..used].chunks_exact(size).map(mean).collect();
    let grand = mean(&batch_means);
    let var_batch = batch_means.iter().map(|b| (b - grand) * (b - grand)).sum::<f64>()
        / (batches - 1) as f64;
    // long-run variance ≈ size · var(batch means); divide by segment length
    size as f64 * var_batch / len as f64
}

pub fn geweke_z(draws: &[f64], frac_first: f64, frac_last: f64) -> Result<GewekeResult> {
    if !(frac_first > 0.0 && frac_last > 0.0 && frac_first + frac_last <= 1.0) {
        return Err(Error::InvalidConfig("Geweke fractions must be positive and sum to at most 1"));
    }
    if draws.len() < GEWEKE_MIN_LEN {
        return Err(Error::InsufficientLength { len: draws.len(), min: GEWEKE_MIN_LEN });
    }
    let len = draws.len();
    let n_a = ((frac_first * len as f64) as usize).max(4);
    let n_b = ((frac_last * len as f64) as usize).max(4);
    let a = &draws[..n_a];
    let b = &draws[len - n_b..];
    let var = batch_means_var_of_mean(a) + batch_means_var_of_mean(b);
    if !(var > 0.0) {
        return Err(Error::ZeroVariance);
    }
    let z = (mean(a) - mean(b)) / libm::sqrt(var);
    Ok(GewekeResult { z, frac_first, frac_last, pass: z.abs() < 1.96 })
}

/// Type-7 sample quantile: linear interpolation at position `(n − 1)p + 1`.
pub fn quantile_type7(draws: &[f64], p: f64) -> Result<f64> {
    if draws.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut sorted = draws.to_vec();
    sorted.sort_by(f64::total_cmp);
    quantile_sorted(&sorted, p)
}

fn quantile_sorted(sorted: &[f64], p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain { what: "probability must lie in [0, 1]", value: p });
    }
    let h = (sorted.len() - 1) as f64 * p;
    let lo = libm::floor(h) as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    let frac = h - lo as f64;
    Ok(sorted[lo] + frac * (sorted[hi] - sorted[lo]))
}

/// Equal-tailed interval from two type-7 quantiles.
pub fn credible_interval(draws: &[f64], probs: (f64, f64)) -> Result<(f64, f64)> {
    if draws.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut sorted = draws.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok((quantile_sorted(&sorted, probs.0)?, quantile_sorted(&sorted, probs.1)?))
}

/// Biased sample autocorrelation for lags `0..=max_lag`.
pub fn autocorrelation(draws: &[f64], max_lag: usize) -> Result<Vec<f64>> {
    if draws.len() <= max_lag {
        return Err(Error::InsufficientLength { len: draws.len(), min: max_lag + 1 });
    }
    let m = mean(draws);
    let centered: Vec<f64> = draws.iter().map(|x| x - m).collect();
    let c0 = centered.iter().map(|x| x * x).sum::<f64>();
    if !(c0 > 0.0) {
        return Err(Error::ZeroVariance);
    }
    Ok((0..=max_lag)
        .map(|k| {
            if k == 0 {
                1.0
            } else {
                centered[..centered.len() - k]
                    .iter()
                    .zip(&centered[k..])
                    .map(|(a, b)| a * b)
                    .sum::<f64>()
                    / c0
            }
        })
        .collect())
}

/// `n / (1 + 2 Σ ρ(k))`, summing autocorrelations in consecutive pairs
/// `ρ(2m) + ρ(2m+1)` until the first negative pair.
pub fn effective_sample_size(draws: &[f64]) -> Result<f64> {
    let n = draws.len();
    if n < ESS_MIN_LEN {
        return Err(Error::InsufficientLength { len: n, min: ESS_MIN_LEN });
    }
    let m = mean(draws);
    let centered: Vec<f64> = draws.iter().map(|x| x - m).collect();
    let c0 = centered.iter().map(|x| x * x).sum::<f64>();
    if !(c0 > 0.0) {
        return Err(Error::ZeroVariance);
    }
    let acf = |k: usize| {
        centered[..n - k].iter().zip(&centered[k..]).map(|(a, b)| a * b).sum::<f64>() / c0
    };
    // Γ_0 = ρ(0) + ρ(1), τ = −1 + 2 Σ Γ_m
    let mut tau = -1.0;
    let mut m = 0;
    while 2 * m + 1 < n {
        let pair = acf(2 * m) + acf(2 * m + 1);
        if pair < 0.0 {
            break;
        }
        tau += 2.0 * pair;
        m += 1;
    }
    Ok(n as f64 / tau.max(1.0 / n as f64))
}

/// Monte Carlo standard error of the chain mean, `sd / √ESS`.
pub fn mc_standard_error(draws: &[f64]) -> Result<f64> {
    let ess = effective_sample_size(draws)?;
    let m = mean(draws);
    let var = draws.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (draws.len() - 1) as f64;
    Ok(libm::sqrt(var / ess))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn quantile_hand_examples() {
        assert_eq!(quantile_type7(&[1.0, 2.0, 3.0, 4.0, 5.0], 0.5).unwrap(), 3.0);
        let q = quantile_type7(&[4.0, 2.0, 3.0, 1.0], 0.025).unwrap();
        assert!((q - 1.075).abs() < 1e-15);
        assert_eq!(quantile_type7(&[3.0, 1.0, 2.0], 0.0).unwrap(), 1.0);
        assert_eq!(quantile_type7(&[3.0, 1.0, 2.0], 1.0).unwrap(), 3.0);
        assert!(quantile_type7(&[], 0.5).is_err());
        assert!(credible_interval(&[], (0.025, 0.975)).is_err());
    }

    #[test]
    fn acf_lag_zero_and_errors() {
        let x: Vec<f64> = (0..50).map(|i| libm::sin(i as f64)).collect();
        let acf = autocorrelation(&x, 10).unwrap();
        assert_eq!(acf[0], 1.0);
        assert!(autocorrelation(&x, 50).is_err());
        assert!(matches!(autocorrelation(&[2.0; 20], 3), Err(Error::ZeroVariance)));
    }

    #[test]
    fn constant_chains_are_rejected() {
        let x = vec![1.5; 500];
        assert!(matches!(geweke_z(&x, 0.1, 0.5), Err(Error::ZeroVariance)));
        assert!(effective_sample_size(&x).is_err());
        assert!(matches!(geweke_z(&x[..50], 0.1, 0.5), Err(Error::InsufficientLength { .. })));
        assert!(geweke_z(&x, 0.6, 0.5).is_err());
    }
}
