//! Objective Bayesian inference for the entropy `H`.
//!
//! Every prior is flat in `H` after the change of variables and carries a
//! weight in `W` only. Integrating `H` out analytically gives the marginal
//! posterior of `W`
//!
//! ```text
//! π(W | x) ∝ π(W) · Γ(nW) / Γ(W)ⁿ · (∏xᵢ)^W / (Σxᵢ)^{nW}
//! ```
//!
//! and, given `W`, `u = exp(−H)` is `Gamma(nW, rate δ₁(W)·Σxᵢ)`. The sampler
//! updates `W` against its marginal with a gamma random-walk proposal and `H`
//! against its conditional with a normal proposal. The same two facts give a
//! deterministic posterior mean by one-dimensional quadrature.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand_core::RngCore;

use crate::diagnostics::{
    credible_interval, effective_sample_size, geweke_z, GewekeResult, DEFAULT_FRAC_FIRST,
    DEFAULT_FRAC_LAST,
};
use crate::gamma_model::{log_delta1, EntropyParams};
use crate::mle::{initial_point, SampleStats};
use crate::quadrature::integrate;
use crate::specfun::{
    digamma_unchecked, ln_gamma_remainder, ln_gamma_unchecked,
    trigamma_unchecked, x_trigamma_minus_one_unchecked, ASYMPTOTIC_THRESHOLD, HALF_LN_2PI,
};
use crate::variates::{self, seeded_rng};
use crate::{Error, Result};

/// The four objective priors, expressed as weights on `W`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum PriorKind {
    /// `√(Wψ′(W) − 1)`
    Jeffreys,
    /// `√ψ′(W)`, reference prior with the rate as parameter of interest.
    ReferenceBeta,
    /// `√((Wψ′(W) − 1)/W)`, reference prior with the shape as parameter of interest.
    ReferenceAlpha,
    /// `(Wψ′(W) − 1)/√W`
    #[default]
    Matching,
}

impl PriorKind {
    pub const ALL: [PriorKind; 4] = [
        PriorKind::Jeffreys,
        PriorKind::ReferenceBeta,
        PriorKind::ReferenceAlpha,
        PriorKind::Matching,
    ];

    /// Command-line spelling.
    pub fn name(self) -> &'static str {
        match self {
            PriorKind::Jeffreys => "jeffreys",
            PriorKind::ReferenceBeta => "ref-beta",
            PriorKind::ReferenceAlpha => "ref-alpha",
            PriorKind::Matching => "matching",
        }
    }
}

impl fmt::Display for PriorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PriorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "jeffreys" => Ok(PriorKind::Jeffreys),
            "ref-beta" | "reference-beta" => Ok(PriorKind::ReferenceBeta),
            "ref-alpha" | "reference-alpha" => Ok(PriorKind::ReferenceAlpha),
            "matching" | "tibshirani" => Ok(PriorKind::Matching),
            _ => Err(Error::InvalidConfig("unknown prior (expected jeffreys, ref-beta, ref-alpha or matching)")),
        }
    }
}

fn check_w(w: f64) -> Result<()> {
    if w > 0.0 && w.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain { what: "W must be positive and finite", value: w })
    }
}

/// Unnormalized log prior weight on `W`.
pub fn log_prior(kind: PriorKind, w: f64) -> Result<f64> {
    check_w(w)?;
    Ok(log_prior_unchecked(kind, w))
}

fn log_prior_unchecked(kind: PriorKind, w: f64) -> f64 {
    match kind {
        PriorKind::Jeffreys => 0.5 * libm::log(x_trigamma_minus_one_unchecked(w)),
        PriorKind::ReferenceBeta => 0.5 * libm::log(trigamma_unchecked(w)),
        PriorKind::ReferenceAlpha => {
            0.5 * libm::log(x_trigamma_minus_one_unchecked(w)) - 0.5 * libm::log(w)
        }
        PriorKind::Matching => libm::log(x_trigamma_minus_one_unchecked(w)) - 0.5 * libm::log(w),
    }
}

/// The sufficient statistics that enter the marginal posterior of `W`.
///
/// Usually built from a [`SampleStats`]; constructing it directly allows
/// evaluating the kernel for samples that `SampleStats` rejects, such as
/// all-equal data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarginalKernel {
    pub kind: PriorKind,
    pub n: usize,
    pub sum_x: f64,
    pub sum_log_x: f64,
}

impl MarginalKernel {
    pub fn new(kind: PriorKind, s: &SampleStats) -> Self {
        MarginalKernel { kind, n: s.n(), sum_x: s.sum_x(), sum_log_x: s.sum_log_x() }
    }

    /// Log of the unnormalized marginal posterior density of `W`.
    pub fn log_density(&self, w: f64) -> f64 {
        let n = self.n as f64;
        if w >= ASYMPTOTIC_THRESHOLD {
            // Stirling form with the W log W terms cancelled:
            // −nWr − ½ log n + ((n − 1)/2)(log W − log 2π) + c(nW) − n c(W)
            let r = libm::log(self.sum_x / n) - self.sum_log_x / n;
            return log_prior_unchecked(self.kind, w) - n * w * r - 0.5 * libm::log(n)
                + 0.5 * (n - 1.0) * (libm::log(w) - 2.0 * HALF_LN_2PI)
                + ln_gamma_remainder(n * w)
                - n * ln_gamma_remainder(w);
        }
        log_prior_unchecked(self.kind, w) + ln_gamma_unchecked(n * w)
            - n * ln_gamma_unchecked(w)
            + w * self.sum_log_x
            - n * w * libm::log(self.sum_x)
    }

    /// `E[H | W, x] = log(δ₁(W) Σx) − ψ(nW)`.
    pub fn conditional_mean_h(&self, w: f64) -> f64 {
        log_delta1(w) + libm::log(self.sum_x) - digamma_unchecked(self.n as f64 * w)
    }
}

pub fn log_marginal_posterior_w(kind: PriorKind, w: f64, s: &SampleStats) -> Result<f64> {
    check_w(w)?;
    let v = MarginalKernel::new(kind, s).log_density(w);
    if v.is_nan() || v == f64::INFINITY {
        return Err(Error::Overflow("marginal posterior of W"));
    }
    Ok(v)
}

/// Log conditional posterior of `H` given `W`, up to a constant in `H`:
/// `−nWH − δ(W, H)·Σx`. The same for every prior.
pub fn log_conditional_posterior_h(h: f64, w: f64, s: &SampleStats) -> Result<f64> {
    check_w(w)?;
    if !h.is_finite() {
        return Err(Error::Domain { what: "H must be finite", value: h });
    }
    let v = log_conditional_h_unchecked(h, w, s.n() as f64, s.sum_x());
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow("conditional posterior of H"))
    }
}

#[inline]
fn log_conditional_h_unchecked(h: f64, w: f64, n: f64, sum_x: f64) -> f64 {
    -n * w * h - libm::exp(log_delta1(w) - h) * sum_x
}

/// Mode of the conditional posterior of `H`: `log(δ₁(W) Σx / (nW))`.
pub fn conditional_mode_h(w: f64, s: &SampleStats) -> Result<f64> {
    check_w(w)?;
    Ok(log_delta1(w) + libm::log(s.sum_x()) - libm::log(s.n() as f64 * w))
}

pub fn conditional_mean_h(w: f64, s: &SampleStats) -> Result<f64> {
    check_w(w)?;
    Ok(MarginalKernel::new(PriorKind::default(), s).conditional_mean_h(w))
}

/// Exact draw from the conditional posterior of `H`: `H = −log u` with
/// `u ~ Gamma(nW, rate δ₁(W)·Σx)`.
pub fn exact_conditional_draw_h<R: RngCore + ?Sized>(
    w: f64,
    s: &SampleStats,
    rng: &mut R,
) -> Result<f64> {
    check_w(w)?;
    Ok(exact_draw_unchecked(w, s.n() as f64, s.sum_x(), rng))
}

fn exact_draw_unchecked<R: RngCore + ?Sized>(w: f64, n: f64, sum_x: f64, rng: &mut R) -> f64 {
    log_delta1(w) + libm::log(sum_x) - variates::ln_standard_gamma(rng, n * w)
}

// Below these log-density drops the tails contribute less than e^-40 relative.
const TAIL_DROP: f64 = 40.0;
const W_FLOOR: f64 = 1e-30;
const W_CEILING: f64 = 1e12;
// Integrable power laws near W = 0 have slope >= 0.5 in log W for every prior;
// slopes at or below this are treated as non-integrable.
const MIN_LOWER_SLOPE: f64 = 0.25;

/// Integrals of the marginal posterior of `W`, computed in `t = log W`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarginalIntegral {
    /// `log ∫ exp(log_density(W)) dW`.
    pub log_normalizer: f64,
    /// Integration range actually used, in `W`.
    pub range: (f64, f64),
    /// Power-law exponent of the integrand near `W = 0` in `t` (positive when integrable).
    pub lower_slope: f64,
}

/// Log-scale integrand in `t` with its lower-tail slope and bracket.
struct Bracket {
    peak: f64,
    t_lo: f64,
    t_hi: f64,
}

fn bracket<F: Fn(f64) -> f64>(phi: &F) -> Result<Bracket> {
    // Coarse scan for the peak.
    let (lo, hi) = (libm::log(1e-8), libm::log(1e6));
    let steps = 400;
    let mut peak = f64::NEG_INFINITY;
    let mut t_peak = 0.0;
    for i in 0..=steps {
        let t = lo + (hi - lo) * i as f64 / steps as f64;
        let v = phi(t);
        if v > peak {
            peak = v;
            t_peak = t;
        }
    }
    if !peak.is_finite() {
        return Err(Error::Divergent("integrand is not finite near its mode"));
    }
    let mut t_lo = t_peak;
    let t_floor = libm::log(W_FLOOR);
    while t_lo > t_floor {
        t_lo = (t_lo - 0.5).max(t_floor);
        let v = phi(t_lo);
        if v > peak {
            peak = v;
        } else if v < peak - TAIL_DROP {
            break;
        }
    }
    let mut t_hi = t_peak;
    let t_ceiling = libm::log(W_CEILING);
    loop {
        t_hi += 0.5;
        if t_hi > t_ceiling {
            return Err(Error::Divergent("integrand does not decay as W grows"));
        }
        let v = phi(t_hi);
        if v > peak {
            peak = v;
        } else if v < peak - TAIL_DROP {
            break;
        }
    }
    Ok(Bracket { peak, t_lo, t_hi })
}

fn lower_slope<F: Fn(f64) -> f64>(phi: &F) -> Result<f64> {
    let t1 = libm::log(1e-14);
    let t2 = libm::log(1e-16);
    let slope = (phi(t1) - phi(t2)) / (t1 - t2);
    if slope > MIN_LOWER_SLOPE {
        Ok(slope)
    } else {
        Err(Error::Divergent("non-integrable singularity at W = 0"))
    }
}

/// Integrates `exp(phi(t) - shift)` over the real line: adaptive quadrature on
/// the bracket plus the analytic power-law tail below it.
fn integrate_log_integrand<F: Fn(f64) -> f64>(phi: &F, shift: f64, b: &Bracket) -> Result<(f64, f64)> {
    let slope = lower_slope(phi)?;
    let body = integrate(|t| libm::exp(phi(t) - shift), b.t_lo, b.t_hi, 1e-13, 1e-12, 4000)?;
    let tail = libm::exp(phi(b.t_lo) - shift) / slope;
    Ok((body.value + tail, slope))
}

impl MarginalKernel {
    /// Normalizing constant of the marginal posterior of `W` (propriety).
    pub fn integrate(&self) -> Result<MarginalIntegral> {
        let phi = |t: f64| {
            let w = libm::exp(t);
            self.log_density(w) + t
        };
        let b = bracket(&phi)?;
        let (z, slope) = integrate_log_integrand(&phi, b.peak, &b)?;
        if !(z > 0.0 && z.is_finite()) {
            return Err(Error::Divergent("normalizing constant"));
        }
        Ok(MarginalIntegral {
            log_normalizer: b.peak + libm::log(z),
            range: (libm::exp(b.t_lo), libm::exp(b.t_hi)),
            lower_slope: slope,
        })
    }

    fn log_abs_mean_integrand(&self, t: f64) -> f64 {
        let w = libm::exp(t);
        self.log_density(w) + t + libm::log(self.conditional_mean_h(w).abs())
    }

    /// `∫ |E[H | W, x]| π(W | x) dW` over the normalized posterior; finite
    /// exactly when the posterior mean of `H` is.
    pub fn abs_mean_bound(&self) -> Result<f64> {
        let norm = self.integrate()?;
        let phi = |t: f64| self.log_abs_mean_integrand(t);
        let b = bracket(&phi)?;
        let (v, _) = integrate_log_integrand(&phi, b.peak, &b)?;
        Ok(libm::exp(b.peak + libm::log(v) - norm.log_normalizer))
    }

    /// Posterior mean of `H`, `∫ E[H | W, x] π(W | x) dW`.
    pub fn posterior_mean_h(&self) -> Result<f64> {
        let shift = self.integrate()?.log_normalizer;
        let phi = |t: f64| self.log_abs_mean_integrand(t);
        let slope = lower_slope(&phi)?;
        let b = bracket(&phi)?;
        let signed = |t: f64| {
            let w = libm::exp(t);
            self.conditional_mean_h(w) * libm::exp(self.log_density(w) + t - shift)
        };
        let body = integrate(signed, b.t_lo, b.t_hi, 1e-11, 1e-12, 4000)?;
        // Below the bracket the integrand follows the power law measured above.
        let tail = signed(b.t_lo) / slope;
        Ok(body.value + tail)
    }
}

/// Deterministic posterior mean of `H` by quadrature over `W`.
pub fn posterior_mean_quadrature(kind: PriorKind, s: &SampleStats) -> Result<f64> {
    MarginalKernel::new(kind, s).posterior_mean_h()
}

/// How the sampler updates `H` given `W`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HUpdate {
    /// Normal random-walk Metropolis step with standard deviation `se_h`.
    #[default]
    Metropolis,
    /// Exact draw from the conditional posterior.
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McmcConfig {
    /// Total iterations `R`.
    pub iterations: usize,
    pub burn: usize,
    /// Thinning stride.
    pub jump: usize,
    /// Concentration of the gamma proposal for `W`: `W′ ~ Gamma(c_w·W, rate c_w)`.
    pub c_w: f64,
    /// Standard deviation of the normal proposal for `H`.
    pub se_h: f64,
    pub seed: u64,
    /// Starting point; the closed-form estimate when `None`.
    pub init: Option<EntropyParams>,
    pub h_update: HUpdate,
}

impl Default for McmcConfig {
    fn default() -> Self {
        McmcConfig {
            iterations: 2000,
            burn: 500,
            jump: 5,
            c_w: 1.0,
            se_h: 0.2,
            seed: 0,
            init: None,
            h_update: HUpdate::Metropolis,
        }
    }
}

impl McmcConfig {
    pub fn validate(&self) -> Result<()> {
        if self.iterations <= self.burn {
            return Err(Error::InvalidConfig("iterations must exceed burn-in"));
        }
        if self.jump == 0 {
            return Err(Error::InvalidConfig("jump must be at least 1"));
        }
        if !(self.c_w > 0.0 && self.c_w.is_finite()) {
            return Err(Error::InvalidConfig("cW must be positive"));
        }
        if !(self.se_h > 0.0 && self.se_h.is_finite()) {
            return Err(Error::InvalidConfig("seH must be positive"));
        }
        if let Some(e) = self.init {
            EntropyParams::new(e.w, e.h)?;
        }
        Ok(())
    }

    /// Number of retained draws, `⌊(R − burn)/jump⌋ + 1`.
    pub fn retained_len(&self) -> usize {
        (self.iterations - self.burn) / self.jump + 1
    }
}

/// Retained, thinned draws of one chain.
#[derive(Debug, Clone, PartialEq)]
pub struct Chain {
    pub draws_h: Vec<f64>,
    pub draws_w: Vec<f64>,
    /// Fraction of the `R` iterations whose `H` proposal was accepted.
    pub acceptance_h: f64,
    pub acceptance_w: f64,
}

impl Chain {
    pub fn len(&self) -> usize {
        self.draws_h.len()
    }

    pub fn is_empty(&self) -> bool {
        self.draws_h.is_empty()
    }
}

/// Metropolis–Hastings within Gibbs, seeded from `cfg.seed`.
pub fn mh_within_gibbs(kind: PriorKind, s: &SampleStats, cfg: &McmcConfig) -> Result<Chain> {
    let mut rng = seeded_rng(cfg.seed);
    mh_within_gibbs_with_rng(kind, s, cfg, &mut rng)
}

#[inline]
fn ln_gamma_density(x: f64, shape: f64, rate: f64) -> f64 {
    shape * libm::log(rate) - ln_gamma_unchecked(shape) + (shape - 1.0) * libm::log(x) - rate * x
}

#[inline]
fn ln_normal_density(x: f64, mean: f64, sd: f64) -> f64 {
    let z = (x - mean) / sd;
    -0.5 * z * z - libm::log(sd) - 0.918_938_533_204_672_8
}

/// Same sampler with a caller-supplied generator.
///
/// Iteration `i = 1..=R` first proposes `W′ ~ Gamma(c_w·W, rate c_w)` and
/// accepts with the Hastings ratio against the marginal posterior of `W`, then
/// updates `H` given the new `W`. State `i` (state 0 is the start) is kept when
/// `i ≥ burn` and `(i − burn)` is a multiple of `jump`. Proposals whose
/// acceptance ratio is not a number are rejected.
pub fn mh_within_gibbs_with_rng<R: RngCore + ?Sized>(
    kind: PriorKind,
    s: &SampleStats,
    cfg: &McmcConfig,
    rng: &mut R,
) -> Result<Chain> {
    cfg.validate()?;
    let kernel = MarginalKernel::new(kind, s);
    let n = s.n() as f64;
    let sum_x = s.sum_x();
    let start = cfg.init.unwrap_or_else(|| initial_point(s));
    let (mut w, mut h) = (start.w, start.h);
    let mut lm_w = kernel.log_density(w);

    let mut draws_h = Vec::with_capacity(cfg.retained_len());
    let mut draws_w = Vec::with_capacity(cfg.retained_len());
    if cfg.burn == 0 {
        draws_h.push(h);
        draws_w.push(w);
    }
    let (mut accepted_w, mut accepted_h) = (0usize, 0usize);

    for i in 1..=cfg.iterations {
        // W | x
        let proposal = variates::gamma(rng, cfg.c_w * w, cfg.c_w);
        let u1 = variates::uniform_open(rng);
        if proposal > 0.0 && proposal.is_finite() {
            let lm_prop = kernel.log_density(proposal);
            let hastings = ln_gamma_density(w, cfg.c_w * proposal, cfg.c_w)
                - ln_gamma_density(proposal, cfg.c_w * w, cfg.c_w);
            let ratio = lm_prop - lm_w + hastings;
            let accept = libm::exp(ratio).min(1.0);
            if accept.is_finite() && u1 < accept {
                w = proposal;
                lm_w = lm_prop;
                accepted_w += 1;
            }
        }

        // H | W, x
        match cfg.h_update {
            HUpdate::Metropolis => {
                let proposal = variates::normal(rng, h, cfg.se_h);
                let correction = ln_normal_density(h, proposal, cfg.se_h)
                    - ln_normal_density(proposal, h, cfg.se_h);
                let ratio = log_conditional_h_unchecked(proposal, w, n, sum_x)
                    - log_conditional_h_unchecked(h, w, n, sum_x)
                    + correction;
                let accept = libm::exp(ratio).min(1.0);
                let u2 = variates::uniform_open(rng);
                if u2 < accept {
                    h = proposal;
                    accepted_h += 1;
                }
            }
            HUpdate::Exact => {
                h = exact_draw_unchecked(w, n, sum_x, rng);
                accepted_h += 1;
            }
        }

        if i >= cfg.burn && (i - cfg.burn) % cfg.jump == 0 {
            draws_h.push(h);
            draws_w.push(w);
        }
    }
    let r = cfg.iterations as f64;
    Ok(Chain {
        draws_h,
        draws_w,
        acceptance_h: accepted_h as f64 / r,
        acceptance_w: accepted_w as f64 / r,
    })
}

/// Point and interval summary of a chain.
#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorSummary {
    pub mean_h: f64,
    pub ci_h: (f64, f64),
    pub mean_w: f64,
    pub ci_w: (f64, f64),
    /// `None` when the chain is too short or constant.
    pub geweke: Option<GewekeResult>,
    pub ess_h: Option<f64>,
    pub acceptance_h: f64,
    pub acceptance_w: f64,
}

/// Posterior mean and type-7 equal-tailed interval at `level`.
pub fn summarize(chain: &Chain, level: f64) -> Result<PosteriorSummary> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::Domain { what: "credible level must lie in (0, 1)", value: level });
    }
    if chain.is_empty() {
        return Err(Error::EmptyInput);
    }
    let tail = 0.5 * (1.0 - level);
    let probs = (tail, 1.0 - tail);
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    Ok(PosteriorSummary {
        mean_h: mean(&chain.draws_h),
        ci_h: credible_interval(&chain.draws_h, probs)?,
        mean_w: mean(&chain.draws_w),
        ci_w: credible_interval(&chain.draws_w, probs)?,
        geweke: geweke_z(&chain.draws_h, DEFAULT_FRAC_FIRST, DEFAULT_FRAC_LAST).ok(),
        ess_h: effective_sample_size(&chain.draws_h).ok(),
        acceptance_h: chain.acceptance_h,
        acceptance_w: chain.acceptance_w,
    })
}
