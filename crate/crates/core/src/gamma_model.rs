//! The gamma model and its entropy parametrization.
//!
//! The density is `f(x | α, β) = β^α / Γ(α) · x^(α−1) · exp(−βx)`, so `β` is a
//! **rate** (mean `α/β`), not a scale. The entropy parametrization replaces
//! `(α, β)` with `(W, H)` where `W = α` and `H` is the differential entropy in
//! nats; the rate is recovered through [`delta`].

use crate::specfun::{
    digamma_remainder, digamma_unchecked, ln_gamma_remainder, ln_gamma_unchecked,
    trigamma_unchecked, x_trigamma_minus_one_unchecked, ASYMPTOTIC_THRESHOLD, HALF_LN_2PI,
};
use crate::{Error, Result};

/// Shape `alpha` and rate `beta` of a gamma distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaParams {
    pub alpha: f64,
    pub beta: f64,
}

impl GammaParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        let p = GammaParams { alpha, beta };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::Domain { what: "shape must be positive and finite", value: self.alpha });
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(Error::Domain { what: "rate must be positive and finite", value: self.beta });
        }
        Ok(())
    }

    pub fn mean(&self) -> f64 {
        self.alpha / self.beta
    }

    /// Log density at `x`; `-inf` outside the support.
    pub fn ln_pdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return f64::NEG_INFINITY;
        }
        self.alpha * libm::log(self.beta) - ln_gamma_unchecked(self.alpha)
            + (self.alpha - 1.0) * libm::log(x)
            - self.beta * x
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        if x <= 0.0 {
            return Ok(0.0);
        }
        crate::specfun::reg_lower_inc_gamma(self.alpha, self.beta * x)
    }
}

/// The reparametrized pair: `w` equals the shape, `h` is the entropy in nats.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyParams {
    pub w: f64,
    pub h: f64,
}

impl EntropyParams {
    pub fn new(w: f64, h: f64) -> Result<Self> {
        if !(w > 0.0 && w.is_finite()) {
            return Err(Error::Domain { what: "W must be positive and finite", value: w });
        }
        if !h.is_finite() {
            return Err(Error::Domain { what: "H must be finite", value: h });
        }
        Ok(EntropyParams { w, h })
    }
}

fn check_w(w: f64) -> Result<()> {
    if w > 0.0 && w.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain { what: "W must be positive and finite", value: w })
    }
}

/// `log δ₁(W) = W + log Γ(W) + (1 − W) ψ(W)`, the entropy of a unit-rate
/// gamma with shape `W`.
pub(crate) fn log_delta1(w: f64) -> f64 {
    if w >= ASYMPTOTIC_THRESHOLD {
        // the W log W terms cancel; expand lnΓ and ψ and drop them analytically
        return 0.5 * libm::log(w) + HALF_LN_2PI + 0.5 + ln_gamma_remainder(w) - 0.5 / w
            - (1.0 - w) * digamma_remainder(w);
    }
    w + ln_gamma_unchecked(w) + (1.0 - w) * digamma_unchecked(w)
}

/// Differential entropy `α − log β + log Γ(α) + (1 − α) ψ(α)`.
pub fn entropy(p: GammaParams) -> Result<f64> {
    p.validate()?;
    Ok(log_delta1(p.alpha) - libm::log(p.beta))
}

/// `σ(W) = 1 + (1 − W) ψ′(W)`, the derivative of `log δ₁(W)`.
pub fn sigma(w: f64) -> Result<f64> {
    check_w(w)?;
    Ok(sigma_unchecked(w))
}

pub(crate) fn sigma_unchecked(w: f64) -> f64 {
    // 1 + (1 − W)ψ′ = ψ′ − (Wψ′ − 1), which avoids cancellation for large W.
    trigamma_unchecked(w) - x_trigamma_minus_one_unchecked(w)
}

/// The rate implied by `(W, H)`: `exp(log δ₁(W) − H)`.
pub fn delta(w: f64, h: f64) -> Result<f64> {
    check_w(w)?;
    if !h.is_finite() {
        return Err(Error::Domain { what: "H must be finite", value: h });
    }
    let d = libm::exp(log_delta1(w) - h);
    if d.is_finite() && d > 0.0 {
        Ok(d)
    } else {
        Err(Error::Overflow("rate exp(log δ₁(W) − H)"))
    }
}

pub fn to_entropy_params(p: GammaParams) -> Result<EntropyParams> {
    Ok(EntropyParams { w: p.alpha, h: entropy(p)? })
}

pub fn from_entropy_params(e: EntropyParams) -> Result<GammaParams> {
    let beta = delta(e.w, e.h)?;
    Ok(GammaParams { alpha: e.w, beta })
}

/// Per-observation Fisher information in `(W, H)` order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FisherInfo {
    pub ww: f64,
    pub wh: f64,
    pub hh: f64,
}

impl FisherInfo {
    pub fn as_matrix(&self) -> [[f64; 2]; 2] {
        [[self.ww, self.wh], [self.wh, self.hh]]
    }

    pub fn det(&self) -> f64 {
        self.ww * self.hh - self.wh * self.wh
    }
}

pub fn fisher_info(w: f64) -> Result<FisherInfo> {
    check_w(w)?;
    let tg = trigamma_unchecked(w);
    let s = sigma_unchecked(w);
    Ok(FisherInfo { ww: tg - 2.0 * s + w * s * s, wh: 1.0 - s * w, hh: w })
}

/// `det I(W) = W ψ′(W) − 1`, evaluated without cancellation.
pub fn fisher_det(w: f64) -> Result<f64> {
    check_w(w)?;
    Ok(x_trigamma_minus_one_unchecked(w))
}

/// `(I(W)⁻¹)₂₂ = (1 − W)² ψ′(W) + 2 − W`, the per-observation asymptotic
/// variance of the entropy estimate.
pub fn asymptotic_var_h(w: f64) -> Result<f64> {
    check_w(w)?;
    Ok(asymptotic_var_h_unchecked(w))
}

pub(crate) fn asymptotic_var_h_unchecked(w: f64) -> f64 {
    // Same polynomial rewritten as (W − 2)(Wψ′ − 1) + ψ′.
    (w - 2.0) * x_trigamma_minus_one_unchecked(w) + trigamma_unchecked(w)
}
