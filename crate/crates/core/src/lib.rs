//! Shannon entropy of gamma-distributed data.
//!
//! The gamma model is reparametrized from shape/rate `(α, β)` to `(W, H)` where
//! `W = α` and `H` is the differential entropy in nats. On top of that
//! parametrization the crate provides maximum likelihood estimation with a Wald
//! interval, four objective Bayesian posteriors sampled by Metropolis-Hastings
//! within Gibbs, deterministic quadrature oracles for the posterior mean, chain
//! diagnostics, and a Monte Carlo study engine for bias, MSE and coverage.
//!
//! Everything here is pure computation and builds without `std`; file formats,
//! the command line and parallel orchestration live in the `gamma-entropy` crate.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod bayes;
pub mod diagnostics;
mod error;
pub mod gamma_model;
pub mod mle;
pub mod quadrature;
pub mod simlab;
pub mod specfun;
pub mod variates;

pub use error::{Error, Result};
pub use gamma_model::{EntropyParams, FisherInfo, GammaParams};
pub use mle::{MleFit, SampleStats};
