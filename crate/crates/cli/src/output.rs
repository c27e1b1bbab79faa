//! JSON shapes printed by the subcommands.
//!
//! Top-level numbers carry 7 significant digits; the `extra` object repeats
//! them at full precision.

use serde::Serialize;

/// Rounds to 7 significant digits; non-finite values pass through.
pub fn sig7(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.6e}").parse().unwrap_or(x)
}

#[derive(Debug, Serialize)]
pub struct EntropyOutput {
    pub alpha: f64,
    pub beta: f64,
    #[serde(rename = "H")]
    pub h: f64,
    pub extra: EntropyExtra,
}

#[derive(Debug, Serialize)]
pub struct EntropyExtra {
    #[serde(rename = "H")]
    pub h: f64,
}

#[derive(Debug, Serialize)]
pub struct SampleSummary {
    pub n: usize,
    pub sum_x: f64,
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct FitNumbers {
    #[serde(rename = "W")]
    pub w: f64,
    #[serde(rename = "H")]
    pub h: f64,
    pub alpha: f64,
    pub beta: f64,
    #[serde(rename = "se_H")]
    pub se_h: f64,
    #[serde(rename = "LCI_H")]
    pub lci_h: f64,
    #[serde(rename = "UCI_H")]
    pub uci_h: f64,
}

impl FitNumbers {
    pub fn rounded(self) -> Self {
        FitNumbers {
            w: sig7(self.w),
            h: sig7(self.h),
            alpha: sig7(self.alpha),
            beta: sig7(self.beta),
            se_h: sig7(self.se_h),
            lci_h: sig7(self.lci_h),
            uci_h: sig7(self.uci_h),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct FitOutput {
    #[serde(flatten)]
    pub fit: FitNumbers,
    pub level: f64,
    pub iterations: usize,
    pub converged: bool,
    pub extra: FitExtra,
}

#[derive(Debug, Serialize)]
pub struct FitExtra {
    #[serde(flatten)]
    pub fit: FitNumbers,
    pub sample: SampleSummary,
}

/// The sampler's output record; field names follow the reference R output.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RunNumbers {
    pub acep: f64,
    #[serde(rename = "H")]
    pub h: f64,
    #[serde(rename = "LCI_H")]
    pub lci_h: f64,
    #[serde(rename = "UCI_H")]
    pub uci_h: f64,
    #[serde(rename = "Geweke_statistics")]
    pub geweke_statistics: Option<f64>,
}

impl RunNumbers {
    pub fn rounded(self) -> Self {
        RunNumbers {
            acep: sig7(self.acep),
            h: sig7(self.h),
            lci_h: sig7(self.lci_h),
            uci_h: sig7(self.uci_h),
            geweke_statistics: self.geweke_statistics.map(sig7),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct RunResult {
    #[serde(flatten)]
    pub run: RunNumbers,
    pub extra: RunExtra,
}

#[derive(Debug, Serialize)]
pub struct McmcEcho {
    #[serde(rename = "R")]
    pub iterations: usize,
    pub burn: usize,
    pub jump: usize,
    #[serde(rename = "cW")]
    pub c_w: f64,
    #[serde(rename = "seH")]
    pub se_h: f64,
    pub level: f64,
    pub h_update: &'static str,
}

#[derive(Debug, Serialize)]
pub struct WSummary {
    pub mean: f64,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Serialize)]
pub struct RunExtra {
    #[serde(flatten)]
    pub run: RunNumbers,
    pub prior: &'static str,
    pub seed: u64,
    pub config: McmcEcho,
    pub sample: SampleSummary,
    pub retained: usize,
    pub acceptance_w: f64,
    pub ess_h: Option<f64>,
    #[serde(rename = "W")]
    pub w: WSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_h: Option<f64>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct GofOutput {
    #[serde(rename = "D")]
    pub d: f64,
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
    #[serde(rename = "H")]
    pub h: f64,
    pub extra: GofExtra,
}

#[derive(Debug, Serialize)]
pub struct GofExtra {
    #[serde(rename = "D")]
    pub d: f64,
    pub alpha: f64,
    pub beta: f64,
    #[serde(rename = "H")]
    pub h: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seven_significant_digits() {
        assert_eq!(sig7(4.541_355_123), 4.541355);
        assert_eq!(sig7(0.000_123_456_789), 0.0001234568);
        assert_eq!(sig7(-1234.567_89), -1234.568);
        assert_eq!(sig7(0.0), 0.0);
        assert!(sig7(f64::NAN).is_nan());
    }
}
