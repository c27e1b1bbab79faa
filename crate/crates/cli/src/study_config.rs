//! Flat `key = value` study configuration files.
//!
//! ```text
//! # comments start with '#'
//! params       = 4:2, 2:0.5        # alpha:beta pairs, beta is a rate (required)
//! sample_sizes = 20, 60, 120       # required
//! replicates   = 1000              # required
//! estimators   = mle, jeffreys, ref-beta, ref-alpha, matching
//! R = 2000
//! burn = 500
//! jump = 5
//! cW = 1
//! seH = 0.2
//! level = 0.95
//! seed = 1
//! start = true                     # true | closed-form
//! h_update = metropolis            # metropolis | exact
//! ```

use std::collections::BTreeMap;
use std::str::FromStr;

use gamma_entropy_core::bayes::{HUpdate, McmcConfig};
use gamma_entropy_core::simlab::{Estimator, StartPolicy, StudyConfig};
use gamma_entropy_core::GammaParams;

use crate::error::{CliError, CliResult};

const KEYS: [&str; 14] = [
    "params",
    "sample_sizes",
    "replicates",
    "estimators",
    "R",
    "burn",
    "jump",
    "cW",
    "seH",
    "level",
    "seed",
    "start",
    "h_update",
    "threads",
];

/// A parsed study file: one study per parameter setting.
#[derive(Debug, Clone)]
pub struct StudyFile {
    pub studies: Vec<StudyConfig>,
    /// Worker threads; `None` lets the pool decide.
    pub threads: Option<usize>,
}

fn config_err(key: &str, message: impl Into<String>) -> CliError {
    CliError::Config { key: key.to_string(), message: message.into() }
}

fn scalar<T: FromStr>(key: &str, raw: &str) -> CliResult<T> {
    raw.parse().map_err(|_| config_err(key, format!("cannot parse {raw:?}")))
}

fn list<T: FromStr>(key: &str, raw: &str) -> CliResult<Vec<T>> {
    let items: Vec<T> = raw
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| scalar(key, s))
        .collect::<CliResult<_>>()?;
    if items.is_empty() {
        return Err(config_err(key, "empty list"));
    }
    Ok(items)
}

fn pairs(key: &str, raw: &str) -> CliResult<Vec<GammaParams>> {
    raw.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|item| {
            let (a, b) = item
                .split_once(':')
                .ok_or_else(|| config_err(key, format!("expected alpha:beta, got {item:?}")))?;
            let alpha = scalar(key, a.trim())?;
            let beta = scalar(key, b.trim())?;
            GammaParams::new(alpha, beta).map_err(|e| config_err(key, e.to_string()))
        })
        .collect()
}

pub fn parse_study_file(text: &str) -> CliResult<StudyFile> {
    let mut entries: BTreeMap<String, String> = BTreeMap::new();
    for (i, raw_line) in text.lines().enumerate() {
        let line = raw_line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            config_err(line, format!("line {}: expected key = value", i + 1))
        })?;
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(config_err(key, "unknown key"));
        }
        if entries.insert(key.to_string(), value.trim().to_string()).is_some() {
            return Err(config_err(key, "duplicate key"));
        }
    }
    let required = |key: &str| entries.get(key).ok_or_else(|| config_err(key, "missing required key"));
    let params = pairs("params", required("params")?)?;
    if params.is_empty() {
        return Err(config_err("params", "empty list"));
    }
    let sample_sizes: Vec<usize> = list("sample_sizes", required("sample_sizes")?)?;
    let replicates: usize = scalar("replicates", required("replicates")?)?;
    let estimators: Vec<Estimator> = match entries.get("estimators") {
        Some(raw) => list("estimators", raw)?,
        None => Estimator::ALL.to_vec(),
    };
    let defaults = McmcConfig::default();
    let get = |key: &str| entries.get(key).map(String::as_str);
    let mcmc = McmcConfig {
        iterations: get("R").map(|v| scalar("R", v)).transpose()?.unwrap_or(defaults.iterations),
        burn: get("burn").map(|v| scalar("burn", v)).transpose()?.unwrap_or(defaults.burn),
        jump: get("jump").map(|v| scalar("jump", v)).transpose()?.unwrap_or(defaults.jump),
        c_w: get("cW").map(|v| scalar("cW", v)).transpose()?.unwrap_or(defaults.c_w),
        se_h: get("seH").map(|v| scalar("seH", v)).transpose()?.unwrap_or(defaults.se_h),
        h_update: match get("h_update") {
            None | Some("metropolis") => HUpdate::Metropolis,
            Some("exact") => HUpdate::Exact,
            Some(other) => return Err(config_err("h_update", format!("unknown update {other:?}"))),
        },
        ..defaults
    };
    let level = get("level").map(|v| scalar("level", v)).transpose()?.unwrap_or(0.95);
    let master_seed = get("seed").map(|v| scalar("seed", v)).transpose()?.unwrap_or(1);
    let start = match get("start") {
        None | Some("true") => StartPolicy::TrueValues,
        Some("closed-form") => StartPolicy::ClosedForm,
        Some(other) => return Err(config_err("start", format!("unknown start {other:?}"))),
    };
    let checks = [
        (replicates >= 1, "replicates", "must be at least 1"),
        (sample_sizes.iter().all(|&n| n >= 5), "sample_sizes", "every sample size must be at least 5"),
        (level > 0.0 && level < 1.0, "level", "must lie in (0, 1)"),
        (mcmc.iterations > mcmc.burn, "burn", "must be smaller than R"),
        (mcmc.jump >= 1, "jump", "must be at least 1"),
        (mcmc.c_w > 0.0 && mcmc.c_w.is_finite(), "cW", "must be positive"),
        (mcmc.se_h > 0.0 && mcmc.se_h.is_finite(), "seH", "must be positive"),
    ];
    if let Some((_, key, message)) = checks.iter().find(|(ok, _, _)| !ok) {
        return Err(config_err(key, *message));
    }
    let threads = get("threads").map(|v| scalar("threads", v)).transpose()?;

    let studies: Vec<StudyConfig> = params
        .into_iter()
        .map(|true_params| StudyConfig {
            true_params,
            sample_sizes: sample_sizes.clone(),
            replicates,
            estimators: estimators.clone(),
            mcmc,
            level,
            master_seed,
            start,
        })
        .collect();
    for study in &studies {
        study.validate().map_err(|e| config_err("params", e.to_string()))?;
    }
    Ok(StudyFile { studies, threads })
}
