//! Maximum likelihood in the `(W, H)` parametrization.

use alloc::vec::Vec;

use crate::gamma_model::{
    asymptotic_var_h_unchecked, fisher_info, log_delta1, sigma_unchecked,
    to_entropy_params, EntropyParams, GammaParams,
};
use crate::specfun::{
    digamma_unchecked, ln_gamma_unchecked, std_normal_quantile, tetragamma_unchecked,
    trigamma_unchecked,
};
use crate::{Error, Result};

pub const MAX_NEWTON_ITERATIONS: usize = 200;
pub const SCORE_TOLERANCE: f64 = 1e-8;

/// Sufficient statistics of a positive sample, with the data retained.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleStats {
    n: usize,
    sum_x: f64,
    sum_log_x: f64,
    data: Vec<f64>,
}

impl SampleStats {
    /// Validates the sample: at least two observations, all positive and
    /// finite, and not all equal.
    pub fn new(data: Vec<f64>) -> Result<Self> {
        if data.len() < 2 {
            return Err(Error::SampleTooSmall { n: data.len(), min: 2 });
        }
        for (index, &value) in data.iter().enumerate() {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::InvalidObservation { index, value });
            }
        }
        if data.iter().all(|&x| x == data[0]) {
            return Err(Error::DegenerateSample);
        }
        let sum_x = data.iter().sum();
        let sum_log_x = data.iter().map(|&x| libm::log(x)).sum();
        Ok(SampleStats { n: data.len(), sum_x, sum_log_x, data })
    }

    pub fn from_slice(data: &[f64]) -> Result<Self> {
        Self::new(data.to_vec())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn sum_x(&self) -> f64 {
        self.sum_x
    }

    #[inline]
    pub fn sum_log_x(&self) -> f64 {
        self.sum_log_x
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn mean(&self) -> f64 {
        self.sum_x / self.n as f64
    }

    pub fn min(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.data.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// `q = log(arithmetic mean / geometric mean)`, positive for any
    /// non-degenerate sample.
    pub fn log_mean_ratio(&self) -> f64 {
        let n = self.n as f64;
        let mean_log = self.sum_log_x / n;
        // Σ(x/m)/n with x/m = exp(log x − mean log) keeps both means on one scale.
        let rel = self.data.iter().map(|&x| libm::exp(libm::log(x) - mean_log)).sum::<f64>() / n;
        libm::log(rel)
    }

    /// The same sample multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.data.iter().map(|&x| c * x).collect())
    }
}

/// Closed-form starting values for shape and rate.
///
/// The shape is `((n − 2.9)/n) · nΣx / D` with `D = nΣx log x − Σx Σlog x`;
/// the rate is `n² / D`, the reciprocal of the matching closed-form scale.
pub fn init_estimates(s: &SampleStats) -> Result<GammaParams> {
    let n = s.n as f64;
    let mean_log = s.sum_log_x / n;
    let d = n * s.data.iter().map(|&x| x * (libm::log(x) - mean_log)).sum::<f64>();
    if !(d > 0.0) || !d.is_finite() {
        return Err(Error::DegenerateSample);
    }
    let alpha = (n - 2.9) * s.sum_x / d;
    if alpha <= 0.0 {
        return Err(Error::SampleTooSmall { n: s.n, min: 3 });
    }
    GammaParams::new(alpha, n * n / d)
}

/// Starting point in `(W, H)`: the closed-form estimate, or the exponential
/// fit `(1, 1 − log(n/Σx))` when the closed form is unavailable.
pub fn initial_point(s: &SampleStats) -> EntropyParams {
    init_estimates(s)
        .and_then(to_entropy_params)
        .unwrap_or(EntropyParams { w: 1.0, h: 1.0 - libm::log(s.n as f64 / s.sum_x) })
}

/// Log-likelihood of `(W, H)`, including the `−Σ log x` term so that it equals
/// the sum of log densities.
pub fn log_likelihood(e: EntropyParams, s: &SampleStats) -> Result<f64> {
    let EntropyParams { w, h } = EntropyParams::new(e.w, e.h)?;
    Ok(log_likelihood_unchecked(w, h, s))
}

pub(crate) fn log_likelihood_unchecked(w: f64, h: f64, s: &SampleStats) -> f64 {
    let n = s.n as f64;
    let log_delta = log_delta1(w) - h;
    n * w * log_delta - n * ln_gamma_unchecked(w) + (w - 1.0) * s.sum_log_x
        - libm::exp(log_delta) * s.sum_x
}

/// Gradient `(∂ℓ/∂W, ∂ℓ/∂H)`.
pub fn score(e: EntropyParams, s: &SampleStats) -> Result<(f64, f64)> {
    let EntropyParams { w, h } = EntropyParams::new(e.w, e.h)?;
    Ok(score_unchecked(w, h, s))
}

fn score_unchecked(w: f64, h: f64, s: &SampleStats) -> (f64, f64) {
    let n = s.n as f64;
    let log_delta = log_delta1(w) - h;
    let delta_sum = libm::exp(log_delta) * s.sum_x;
    let d_h = delta_sum - n * w;
    let d_w = n * (log_delta - digamma_unchecked(w)) + s.sum_log_x
        + sigma_unchecked(w) * (n * w - delta_sum);
    (d_w, d_h)
}

/// Observed Hessian `[[ℓ_WW, ℓ_WH], [ℓ_WH, ℓ_HH]]`.
pub fn hessian(e: EntropyParams, s: &SampleStats) -> Result<[[f64; 2]; 2]> {
    let EntropyParams { w, h } = EntropyParams::new(e.w, e.h)?;
    Ok(hessian_unchecked(w, h, s))
}

fn hessian_unchecked(w: f64, h: f64, s: &SampleStats) -> [[f64; 2]; 2] {
    let n = s.n as f64;
    let delta_sum = libm::exp(log_delta1(w) - h) * s.sum_x;
    let tg = trigamma_unchecked(w);
    let sg = sigma_unchecked(w);
    let dsigma = -tg + (1.0 - w) * tetragamma_unchecked(w);
    let ww = 2.0 * n * sg - n * tg + dsigma * (n * w - delta_sum) - sg * sg * delta_sum;
    let wh = sg * delta_sum - n;
    let hh = -delta_sum;
    [[ww, wh], [wh, hh]]
}

/// Result of [`fit_mle`].
#[derive(Debug, Clone, PartialEq)]
pub struct MleFit {
    pub estimate: EntropyParams,
    /// `sqrt(asymptotic_var_h(Ŵ) / n)`.
    pub se_h: f64,
    pub ci_h: (f64, f64),
    pub level: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl MleFit {
    pub fn gamma_params(&self) -> Result<GammaParams> {
        crate::gamma_model::from_entropy_params(self.estimate)
    }
}

/// Newton fit started at [`initial_point`].
pub fn fit_mle(s: &SampleStats, level: f64) -> Result<MleFit> {
    fit_mle_from(s, level, initial_point(s))
}

/// Damped Newton–Raphson from `start`.
///
/// Each iteration takes the Newton step when the observed Hessian is negative
/// definite and a Fisher-scoring step otherwise, halving it until the
/// log-likelihood does not decrease. Converged when `‖score‖∞ < 1e−8`.
pub fn fit_mle_from(s: &SampleStats, level: f64, start: EntropyParams) -> Result<MleFit> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::Domain { what: "confidence level must lie in (0, 1)", value: level });
    }
    let start = EntropyParams::new(start.w, start.h)?;
    let n = s.n as f64;
    let (mut w, mut h) = (start.w, start.h);
    let mut ll = log_likelihood_unchecked(w, h, s);
    if !ll.is_finite() {
        let fallback = initial_point(s);
        w = fallback.w;
        h = fallback.h;
        ll = log_likelihood_unchecked(w, h, s);
    }
    let mut iterations = 0;
    loop {
        let (gw, gh) = score_unchecked(w, h, s);
        if gw.abs().max(gh.abs()) < SCORE_TOLERANCE {
            break;
        }
        if iterations == MAX_NEWTON_ITERATIONS || !(gw.is_finite() && gh.is_finite()) {
            return Err(Error::NonConvergence { iterations });
        }
        iterations += 1;

        let [[a, b], [_, c]] = hessian_unchecked(w, h, s);
        let det = a * c - b * b;
        let (step_w, step_h) = if a < 0.0 && det > 0.0 {
            // −H⁻¹ g
            ((-c * gw + b * gh) / det, (b * gw - a * gh) / det)
        } else {
            let fi = fisher_info(w)?;
            let det = n * fi.det();
            ((fi.hh * gw - fi.wh * gh) / det, (fi.ww * gh - fi.wh * gw) / det)
        };

        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let nw = w + t * step_w;
            let nh = h + t * step_h;
            if nw > 0.0 && nh.is_finite() {
                let nll = log_likelihood_unchecked(nw, nh, s);
                if nll.is_finite() && nll >= ll - 1e-12 * ll.abs().max(1.0) {
                    w = nw;
                    h = nh;
                    ll = nll;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !accepted {
            // No ascent direction at working precision.
            let (gw, gh) = score_unchecked(w, h, s);
            if gw.abs().max(gh.abs()) < SCORE_TOLERANCE {
                break;
            }
            return Err(Error::NonConvergence { iterations });
        }
    }
    let estimate = EntropyParams { w, h };
    let se_h = libm::sqrt(asymptotic_var_h_unchecked(w) / n);
    let z = std_normal_quantile(0.5 + 0.5 * level)?;
    Ok(MleFit {
        estimate,
        se_h,
        ci_h: (h - z * se_h, h + z * se_h),
        level,
        iterations,
        converged: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn sample_validation() {
        assert!(matches!(SampleStats::new(vec![1.0]), Err(Error::SampleTooSmall { .. })));
        assert!(matches!(
            SampleStats::new(vec![1.0, -2.0, 3.0]),
            Err(Error::InvalidObservation { index: 1, .. })
        ));
        assert!(matches!(SampleStats::new(vec![5.0, 5.0, 5.0]), Err(Error::DegenerateSample)));
        let s = SampleStats::new(vec![1.0, core::f64::consts::E]).unwrap();
        assert_eq!(s.n(), 2);
        assert!((s.sum_log_x() - 1.0).abs() < 1e-15);
        assert!(s.log_mean_ratio() > 0.0);
    }

    #[test]
    fn init_needs_three_points() {
        let s = SampleStats::new(vec![1.0, core::f64::consts::E]).unwrap();
        assert!(matches!(init_estimates(&s), Err(Error::SampleTooSmall { n: 2, .. })));
        // falls back to the exponential fit
        let p = initial_point(&s);
        assert_eq!(p.w, 1.0);
        assert!((p.h - (1.0 - libm::log(2.0 / (1.0 + core::f64::consts::E)))).abs() < 1e-15);
    }

    #[test]
    fn single_unit_observation() {
        // Exponential density at x = 1 with rate 1.
        let s = SampleStats { n: 1, sum_x: 1.0, sum_log_x: 0.0, data: vec![1.0] };
        let ll = log_likelihood(EntropyParams { w: 1.0, h: 1.0 }, &s).unwrap();
        assert!((ll + 1.0).abs() < 1e-15);
    }

    #[test]
    fn score_h_vanishes_on_profile() {
        let s = SampleStats::new(vec![0.5, 1.5, 2.0, 4.0]).unwrap();
        let w = 1.7;
        // δ(W, H) = nW / Σx
        let h = log_delta1(w) - libm::log(4.0 * w / s.sum_x());
        let (_, dh) = score(EntropyParams { w, h }, &s).unwrap();
        assert!(dh.abs() < 1e-12);
    }

    #[test]
    fn fit_rejects_bad_level() {
        let s = SampleStats::new(vec![0.5, 1.5, 2.0, 4.0]).unwrap();
        assert!(fit_mle(&s, 1.0).is_err());
        assert!(fit_mle(&s, 0.0).is_err());
    }
}
