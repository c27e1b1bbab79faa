use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gamma_entropy_core::bayes::{
    mh_within_gibbs, posterior_mean_quadrature, summarize, HUpdate, McmcConfig, PriorKind,
};
use gamma_entropy_core::gamma_model::{entropy, from_entropy_params};
use gamma_entropy_core::mle::fit_mle;
use gamma_entropy_core::simlab::{
    assemble_report, ks_statistic, run_replicate, ReplicateOutcome, StudyConfig, StudyReport,
};
use gamma_entropy_core::{GammaParams, SampleStats};
use rayon::prelude::*;
use serde_json::json;

use crate::error::{CliError, CliResult};
use crate::ingest::{ingest, read_input};
use crate::output::*;
use crate::study_config::parse_study_file;

/// Environment variable supplying the default `--seed`.
pub const SEED_ENV: &str = "GAMMA_ENTROPY_SEED";
const FALLBACK_SEED: u64 = 1;

#[derive(Debug, Parser)]
#[command(name = "gamma-entropy", version, about = "Entropy estimation for gamma-distributed data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Entropy of a gamma distribution with shape alpha and rate beta.
    Entropy {
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, allow_hyphen_values = true)]
        beta: f64,
    },
    /// Maximum likelihood fit with a Wald interval for H.
    Fit {
        /// Data file; standard input when omitted or "-".
        input: Option<String>,
        #[arg(long, default_value_t = 0.95)]
        level: f64,
    },
    /// Posterior summary of H from the Metropolis-within-Gibbs sampler.
    Bayes(BayesArgs),
    /// Monte Carlo study of bias, MSE and coverage.
    Simulate {
        #[arg(long)]
        config: String,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Kolmogorov-Smirnov distance to the maximum likelihood gamma fit.
    Gof {
        input: Option<String>,
    },
}

#[derive(Debug, Args)]
pub struct BayesArgs {
    pub input: Option<String>,
    #[arg(long, default_value = "matching")]
    pub prior: PriorKind,
    #[arg(long = "R", default_value_t = 2000)]
    pub iterations: usize,
    #[arg(long, default_value_t = 500)]
    pub burn: usize,
    #[arg(long, default_value_t = 5)]
    pub jump: usize,
    #[arg(long = "cW", default_value_t = 1.0)]
    pub c_w: f64,
    #[arg(long = "seH", default_value_t = 0.2)]
    pub se_h: f64,
    /// Defaults to $GAMMA_ENTROPY_SEED, else 1.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 0.95)]
    pub level: f64,
    /// Also report the posterior mean of H by quadrature.
    #[arg(long)]
    pub oracle: bool,
    /// Write the retained draws as CSV to this path.
    #[arg(long)]
    pub dump_chain: Option<String>,
    #[arg(long, value_enum, default_value_t = HUpdateArg::Metropolis)]
    pub h_update: HUpdateArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HUpdateArg {
    Metropolis,
    Exact,
}

impl From<HUpdateArg> for HUpdate {
    fn from(a: HUpdateArg) -> Self {
        match a {
            HUpdateArg::Metropolis => HUpdate::Metropolis,
            HUpdateArg::Exact => HUpdate::Exact,
        }
    }
}

pub fn run(cli: Cli) -> CliResult<String> {
    match cli.command {
        Command::Entropy { alpha, beta } => cmd_entropy(alpha, beta),
        Command::Fit { input, level } => cmd_fit(&ingest(input.as_deref())?, level),
        Command::Bayes(args) => {
            let s = ingest(args.input.as_deref())?;
            cmd_bayes(&s, &args)
        }
        Command::Simulate { config, format } => cmd_simulate(&config, format),
        Command::Gof { input } => cmd_gof(&ingest(input.as_deref())?),
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("output structs serialize")
}

fn sample_summary(s: &SampleStats) -> SampleSummary {
    SampleSummary { n: s.n(), sum_x: s.sum_x(), min: s.min(), max: s.max() }
}

pub fn cmd_entropy(alpha: f64, beta: f64) -> CliResult<String> {
    let h = entropy(GammaParams::new(alpha, beta)?)?;
    Ok(to_json(&EntropyOutput { alpha, beta, h: sig7(h), extra: EntropyExtra { h } }))
}

pub fn cmd_fit(s: &SampleStats, level: f64) -> CliResult<String> {
    let fit = fit_mle(s, level)?;
    let p = fit.gamma_params()?;
    let numbers = FitNumbers {
        w: fit.estimate.w,
        h: fit.estimate.h,
        alpha: p.alpha,
        beta: p.beta,
        se_h: fit.se_h,
        lci_h: fit.ci_h.0,
        uci_h: fit.ci_h.1,
    };
    Ok(to_json(&FitOutput {
        fit: numbers.rounded(),
        level,
        iterations: fit.iterations,
        converged: fit.converged,
        extra: FitExtra { fit: numbers, sample: sample_summary(s) },
    }))
}

/// The seed from the flag, else the environment, else a fixed fallback.
pub fn resolve_seed(flag: Option<u64>) -> CliResult<u64> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var(SEED_ENV) {
        Ok(raw) => raw
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{SEED_ENV}={raw:?} is not an unsigned integer"))),
        Err(_) => Ok(FALLBACK_SEED),
    }
}

pub fn cmd_bayes(s: &SampleStats, args: &BayesArgs) -> CliResult<String> {
    let seed = resolve_seed(args.seed)?;
    let cfg = McmcConfig {
        iterations: args.iterations,
        burn: args.burn,
        jump: args.jump,
        c_w: args.c_w,
        se_h: args.se_h,
        seed,
        init: None,
        h_update: args.h_update.into(),
    };
    let chain = mh_within_gibbs(args.prior, s, &cfg)?;
    let summary = summarize(&chain, args.level)?;
    if let Some(path) = &args.dump_chain {
        let mut csv = String::from("index,W,H\n");
        for (i, (w, h)) in chain.draws_w.iter().zip(&chain.draws_h).enumerate() {
            writeln!(csv, "{i},{w},{h}").expect("writing to a String");
        }
        std::fs::write(path, csv)
            .map_err(|e| CliError::Io { path: path.clone(), message: e.to_string() })?;
    }
    let oracle_h = if args.oracle { Some(posterior_mean_quadrature(args.prior, s)?) } else { None };

    let mut warnings = Vec::new();
    if !(summary.ci_h.0 < summary.mean_h && summary.mean_h < summary.ci_h.1) {
        warnings.push("posterior mean of H lies outside its credible interval".to_string());
    }
    match summary.geweke {
        Some(g) if !g.pass => warnings.push(format!("Geweke |z| = {:.3} exceeds 1.96", g.z.abs())),
        None => warnings.push("chain too short or constant for the Geweke diagnostic".to_string()),
        _ => {}
    }
    let numbers = RunNumbers {
        acep: summary.acceptance_h,
        h: summary.mean_h,
        lci_h: summary.ci_h.0,
        uci_h: summary.ci_h.1,
        geweke_statistics: summary.geweke.map(|g| g.z),
    };
    let result = RunResult {
        run: numbers.rounded(),
        extra: RunExtra {
            run: numbers,
            prior: args.prior.name(),
            seed,
            config: McmcEcho {
                iterations: cfg.iterations,
                burn: cfg.burn,
                jump: cfg.jump,
                c_w: cfg.c_w,
                se_h: cfg.se_h,
                level: args.level,
                h_update: match cfg.h_update {
                    HUpdate::Metropolis => "metropolis",
                    HUpdate::Exact => "exact",
                },
            },
            sample: sample_summary(s),
            retained: chain.len(),
            acceptance_w: summary.acceptance_w,
            ess_h: summary.ess_h,
            w: WSummary { mean: summary.mean_w, lower: summary.ci_w.0, upper: summary.ci_w.1 },
            oracle_h,
            warnings,
        },
    };
    Ok(to_json(&result))
}

/// Runs one study with replicates spread over the rayon pool; the report is
/// identical to the sequential one.
pub fn run_study_parallel(cfg: &StudyConfig) -> CliResult<StudyReport> {
    cfg.validate()?;
    let jobs: Vec<(usize, usize)> = cfg.jobs().collect();
    let outcomes: Vec<ReplicateOutcome> =
        jobs.par_iter().map(|&(n, r)| run_replicate(cfg, n, r)).collect();
    Ok(assemble_report(cfg, &outcomes)?)
}

pub const CSV_HEADER: &str = "estimator,n,alpha,beta,true_H,bias,mse,cp,mean_width,failures";

pub fn report_csv(reports: &[StudyReport]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for c in reports.iter().flat_map(|r| &r.cells) {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            c.estimator, c.n, c.alpha, c.beta, c.true_h, c.bias, c.mse, c.cp, c.mean_width, c.failures
        )
        .expect("writing to a String");
    }
    out
}

fn report_json(reports: &[StudyReport]) -> String {
    let cell = |c: &gamma_entropy_core::simlab::CellReport, round: bool| {
        let r = |x: f64| if round { sig7(x) } else { x };
        json!({
            "estimator": c.estimator.name(),
            "n": c.n,
            "alpha": c.alpha,
            "beta": c.beta,
            "true_H": r(c.true_h),
            "bias": r(c.bias),
            "mse": r(c.mse),
            "cp": r(c.cp),
            "mean_width": r(c.mean_width),
            "failures": c.failures,
            "successes": c.successes,
        })
    };
    let cells: Vec<_> = reports.iter().flat_map(|r| &r.cells).collect();
    to_json(&json!({
        "cells": cells.iter().map(|c| cell(c, true)).collect::<Vec<_>>(),
        "extra": { "cells": cells.iter().map(|c| cell(c, false)).collect::<Vec<_>>() },
    }))
}

pub fn cmd_simulate(path: &str, format: Format) -> CliResult<String> {
    let file = parse_study_file(&read_input(Some(path))?)?;
    let run_all = || -> CliResult<Vec<StudyReport>> {
        file.studies.iter().map(run_study_parallel).collect()
    };
    let reports = match file.threads {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| CliError::Config { key: "threads".into(), message: e.to_string() })?
            .install(run_all)?,
        None => run_all()?,
    };
    Ok(match format {
        Format::Csv => report_csv(&reports),
        Format::Json => report_json(&reports),
    })
}

pub fn cmd_gof(s: &SampleStats) -> CliResult<String> {
    let fit = fit_mle(s, 0.95)?;
    let p = from_entropy_params(fit.estimate)?;
    let d = ks_statistic(s.data(), p)?;
    Ok(to_json(&GofOutput {
        d: sig7(d),
        n: s.n(),
        alpha: sig7(p.alpha),
        beta: sig7(p.beta),
        h: sig7(fit.estimate.h),
        extra: GofExtra { d, alpha: p.alpha, beta: p.beta, h: fit.estimate.h },
    }))
}
