//! Monte Carlo study of entropy estimators: bias, mean squared error and
//! interval coverage over replicated gamma samples.
//!
//! Every replicate draws its data from its own ChaCha stream derived from the
//! master seed, so any replicate can be recomputed in isolation and the
//! report does not depend on the order in which replicates are evaluated.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand_core::RngCore;

use crate::bayes::{mh_within_gibbs, summarize, McmcConfig, PriorKind};
use crate::gamma_model::{entropy, to_entropy_params, GammaParams};
use crate::mle::{fit_mle_from, initial_point, SampleStats};
use crate::variates::{self, mix_seed, stream_rng};
use crate::{Error, Result};

/// I.i.d. gamma draws with shape `p.alpha` and rate `p.beta`.
pub fn sample_gamma<R: RngCore + ?Sized>(p: GammaParams, n: usize, rng: &mut R) -> Vec<f64> {
    (0..n).map(|_| variates::gamma(rng, p.alpha, p.beta)).collect()
}

/// One-sample Kolmogorov–Smirnov distance between `data` and the gamma CDF.
pub fn ks_statistic(data: &[f64], p: GammaParams) -> Result<f64> {
    p.validate()?;
    if data.is_empty() {
        return Err(Error::SampleTooSmall { n: 0, min: 1 });
    }
    let mut sorted = data.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let f = p.cdf(x)?;
        let above = (i + 1) as f64 / n - f;
        let below = f - i as f64 / n;
        d = d.max(above).max(below);
    }
    Ok(d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Estimator {
    Mle,
    Bayes(PriorKind),
}

impl Estimator {
    pub const ALL: [Estimator; 5] = [
        Estimator::Mle,
        Estimator::Bayes(PriorKind::Jeffreys),
        Estimator::Bayes(PriorKind::ReferenceBeta),
        Estimator::Bayes(PriorKind::ReferenceAlpha),
        Estimator::Bayes(PriorKind::Matching),
    ];

    pub fn name(self) -> &'static str {
        match self {
            Estimator::Mle => "mle",
            Estimator::Bayes(kind) => kind.name(),
        }
    }

    fn salt(self) -> u64 {
        match self {
            Estimator::Mle => 0,
            Estimator::Bayes(PriorKind::Jeffreys) => 1,
            Estimator::Bayes(PriorKind::ReferenceBeta) => 2,
            Estimator::Bayes(PriorKind::ReferenceAlpha) => 3,
            Estimator::Bayes(PriorKind::Matching) => 4,
        }
    }
}

impl fmt::Display for Estimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Estimator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "mle" {
            Ok(Estimator::Mle)
        } else {
            s.parse().map(Estimator::Bayes)
        }
    }
}

/// Where the optimizer and the chains start.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StartPolicy {
    /// At the generating parameters.
    #[default]
    TrueValues,
    /// At the closed-form estimates computed from each sample.
    ClosedForm,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyConfig {
    pub true_params: GammaParams,
    pub sample_sizes: Vec<usize>,
    /// Replicates `N` per sample size.
    pub replicates: usize,
    pub estimators: Vec<Estimator>,
    /// Chain settings; `seed` and `init` are overridden per replicate.
    pub mcmc: McmcConfig,
    pub level: f64,
    pub master_seed: u64,
    pub start: StartPolicy,
}

impl StudyConfig {
    pub fn validate(&self) -> Result<()> {
        self.true_params.validate()?;
        if self.replicates == 0 {
            return Err(Error::InvalidConfig("replicates must be at least 1"));
        }
        if self.sample_sizes.is_empty() {
            return Err(Error::InvalidConfig("at least one sample size is required"));
        }
        if self.sample_sizes.iter().any(|&n| n < 5) {
            return Err(Error::InvalidConfig("sample sizes must be at least 5"));
        }
        if self.estimators.is_empty() {
            return Err(Error::InvalidConfig("at least one estimator is required"));
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(Error::InvalidConfig("level must lie in (0, 1)"));
        }
        self.mcmc.validate()
    }

    pub fn true_entropy(&self) -> Result<f64> {
        entropy(self.true_params)
    }

    /// Every `(sample size, replicate)` pair, in report order.
    pub fn jobs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.sample_sizes.iter().flat_map(move |&n| (0..self.replicates).map(move |r| (n, r)))
    }
}

/// An estimator's point estimate and interval on one replicate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub h: f64,
    pub interval: (f64, f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReplicateOutcome {
    pub n: usize,
    pub replicate: usize,
    /// One entry per configured estimator, in configuration order.
    pub estimates: Vec<(Estimator, Result<Estimate>)>,
}

/// The sample of replicate `replicate` at size `n`.
pub fn replicate_sample(cfg: &StudyConfig, n: usize, replicate: usize) -> Vec<f64> {
    let mut rng = stream_rng(mix_seed(cfg.master_seed, n as u64), replicate as u64);
    sample_gamma(cfg.true_params, n, &mut rng)
}

fn chain_seed(cfg: &StudyConfig, n: usize, replicate: usize, estimator: Estimator) -> u64 {
    let per_cell = mix_seed(cfg.master_seed ^ 0x5EED_C4A1, n as u64);
    mix_seed(per_cell, (replicate as u64) * 8 + estimator.salt())
}

fn estimate(
    cfg: &StudyConfig,
    s: &SampleStats,
    n: usize,
    replicate: usize,
    estimator: Estimator,
) -> Result<Estimate> {
    let start = match cfg.start {
        StartPolicy::TrueValues => to_entropy_params(cfg.true_params)?,
        StartPolicy::ClosedForm => initial_point(s),
    };
    match estimator {
        Estimator::Mle => {
            let fit = fit_mle_from(s, cfg.level, start)?;
            Ok(Estimate { h: fit.estimate.h, interval: fit.ci_h })
        }
        Estimator::Bayes(kind) => {
            let mcmc = McmcConfig {
                seed: chain_seed(cfg, n, replicate, estimator),
                init: Some(start),
                ..cfg.mcmc
            };
            let chain = mh_within_gibbs(kind, s, &mcmc)?;
            let summary = summarize(&chain, cfg.level)?;
            Ok(Estimate { h: summary.mean_h, interval: summary.ci_h })
        }
    }
}

/// Draws one sample and evaluates every configured estimator on it.
pub fn run_replicate(cfg: &StudyConfig, n: usize, replicate: usize) -> ReplicateOutcome {
    let data = replicate_sample(cfg, n, replicate);
    let stats = SampleStats::new(data);
    let estimates = cfg
        .estimators
        .iter()
        .map(|&e| {
            let result = match &stats {
                Ok(s) => estimate(cfg, s, n, replicate, e),
                Err(err) => Err(err.clone()),
            };
            (e, result)
        })
        .collect();
    ReplicateOutcome { n, replicate, estimates }
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Summary of one estimator at one sample size.
#[derive(Debug, Clone, PartialEq)]
pub struct CellReport {
    pub estimator: Estimator,
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
    pub true_h: f64,
    /// `(1/N) Σ (Ĥᵢ − H)`
    pub bias: f64,
    /// `(1/N) Σ (Ĥᵢ − H)²`
    pub mse: f64,
    /// Fraction of intervals containing the true `H`.
    pub cp: f64,
    pub mean_width: f64,
    pub successes: usize,
    /// Replicates where the estimator failed; excluded from the averages.
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyReport {
    pub cells: Vec<CellReport>,
}

impl StudyReport {
    pub fn cell(&self, estimator: Estimator, n: usize) -> Option<&CellReport> {
        self.cells.iter().find(|c| c.estimator == estimator && c.n == n)
    }
}

/// Aggregates replicate outcomes into one cell per (estimator, sample size).
///
/// Outcomes may arrive in any order; they are accumulated in replicate order.
pub fn assemble_report(cfg: &StudyConfig, outcomes: &[ReplicateOutcome]) -> Result<StudyReport> {
    let true_h = cfg.true_entropy()?;
    let mut ordered: Vec<&ReplicateOutcome> = outcomes.iter().collect();
    ordered.sort_by_key(|o| (o.n, o.replicate));
    let mut cells = Vec::new();
    for &n in &cfg.sample_sizes {
        for &estimator in &cfg.estimators {
            let (mut err_sum, mut sq_sum, mut width_sum) =
                (CompensatedSum::default(), CompensatedSum::default(), CompensatedSum::default());
            let (mut covered, mut ok, mut failed) = (0usize, 0usize, 0usize);
            for outcome in ordered.iter().filter(|o| o.n == n) {
                for (e, result) in &outcome.estimates {
                    if *e != estimator {
                        continue;
                    }
                    match result {
                        Ok(est) => {
                            let err = est.h - true_h;
                            err_sum.add(err);
                            sq_sum.add(err * err);
                            width_sum.add(est.interval.1 - est.interval.0);
                            if est.interval.0 <= true_h && true_h <= est.interval.1 {
                                covered += 1;
                            }
                            ok += 1;
                        }
                        Err(_) => failed += 1,
                    }
                }
            }
            let denom = ok.max(1) as f64;
            let nan_if_empty = |v: f64| if ok == 0 { f64::NAN } else { v };
            cells.push(CellReport {
                estimator,
                n,
                alpha: cfg.true_params.alpha,
                beta: cfg.true_params.beta,
                true_h,
                bias: nan_if_empty(err_sum.value() / denom),
                mse: nan_if_empty(sq_sum.value() / denom),
                cp: nan_if_empty(covered as f64 / denom),
                mean_width: nan_if_empty(width_sum.value() / denom),
                successes: ok,
                failures: failed,
            });
        }
    }
    Ok(StudyReport { cells })
}

/// Runs the whole study sequentially.
pub fn run_study(cfg: &StudyConfig) -> Result<StudyReport> {
    cfg.validate()?;
    let outcomes: Vec<ReplicateOutcome> =
        cfg.jobs().map(|(n, r)| run_replicate(cfg, n, r)).collect();
    assemble_report(cfg, &outcomes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn small_config() -> StudyConfig {
        StudyConfig {
            true_params: GammaParams { alpha: 4.0, beta: 2.0 },
            sample_sizes: vec![20],
            replicates: 1,
            estimators: vec![Estimator::Mle],
            mcmc: McmcConfig::default(),
            level: 0.95,
            master_seed: 11,
            start: StartPolicy::TrueValues,
        }
    }

    #[test]
    fn single_replicate_bias_and_mse() {
        let cfg = small_config();
        let report = run_study(&cfg).unwrap();
        let cell = report.cell(Estimator::Mle, 20).unwrap();
        let outcome = run_replicate(&cfg, 20, 0);
        let h = outcome.estimates[0].1.as_ref().unwrap().h;
        let bias = h - cfg.true_entropy().unwrap();
        assert_eq!(cell.bias, bias);
        assert_eq!(cell.mse, bias * bias);
        assert_eq!(cell.successes, 1);
    }

    #[test]
    fn config_validation() {
        let good = small_config();
        assert!(good.validate().is_ok());
        assert!(StudyConfig { replicates: 0, ..good.clone() }.validate().is_err());
        assert!(StudyConfig { sample_sizes: vec![4], ..good.clone() }.validate().is_err());
        assert!(StudyConfig { level: 1.0, ..good.clone() }.validate().is_err());
        assert!(StudyConfig { estimators: vec![], ..good }.validate().is_err());
    }

    #[test]
    fn ks_on_quantile_points() {
        let p = GammaParams { alpha: 2.0, beta: 1.0 };
        // F(x) = 1 − e^{−x}(1 + x); invert by bisection at (i − 0.5)/n.
        let n = 10;
        let data: Vec<f64> = (1..=n)
            .map(|i| {
                let target = (i as f64 - 0.5) / n as f64;
                let (mut lo, mut hi) = (0.0, 50.0);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if p.cdf(mid).unwrap() < target {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                0.5 * (lo + hi)
            })
            .collect();
        let d = ks_statistic(&data, p).unwrap();
        assert!((d - 0.05).abs() < 1e-12, "{d}");
        assert!(ks_statistic(&[], p).is_err());
    }

    #[test]
    fn estimator_names_round_trip() {
        for e in Estimator::ALL {
            assert_eq!(e.name().parse::<Estimator>().unwrap(), e);
        }
    }
}
