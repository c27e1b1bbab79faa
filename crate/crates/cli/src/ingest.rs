//! Reading observations from text: numbers separated by whitespace, commas or
//! newlines, with an optional one-token header line.

use std::io::Read;

use gamma_entropy_core::SampleStats;

use crate::error::{CliError, CliResult};

/// Values in input order, each with its 1-based line number.
pub fn parse_values(text: &str) -> CliResult<Vec<(usize, f64)>> {
    let mut values = Vec::new();
    let mut seen_content = false;
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let tokens: Vec<&str> =
            line.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()).collect();
        if tokens.is_empty() {
            continue;
        }
        let first_content = !seen_content;
        seen_content = true;
        if first_content && tokens.len() == 1 && tokens[0].parse::<f64>().is_err() {
            continue;
        }
        for token in tokens {
            let value = token
                .parse::<f64>()
                .map_err(|_| CliError::Parse { line: line_no, token: token.to_string() })?;
            values.push((line_no, value));
        }
    }
    Ok(values)
}

/// Parses and validates a sample.
pub fn ingest_str(text: &str) -> CliResult<SampleStats> {
    let values = parse_values(text)?;
    if let Some(&(line, value)) = values.iter().find(|(_, v)| !(*v > 0.0 && v.is_finite())) {
        return Err(CliError::NonPositive { line, value });
    }
    let data: Vec<f64> = values.into_iter().map(|(_, v)| v).collect();
    Ok(SampleStats::new(data)?)
}

/// Reads `path`, or standard input when `path` is `None` or `-`.
pub fn read_input(path: Option<&str>) -> CliResult<String> {
    match path {
        None | Some("-") => {
            let mut text = String::new();
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| CliError::Io { path: "<stdin>".into(), message: e.to_string() })?;
            Ok(text)
        }
        Some(p) => std::fs::read_to_string(p)
            .map_err(|e| CliError::Io { path: p.to_string(), message: e.to_string() }),
    }
}

pub fn ingest(path: Option<&str>) -> CliResult<SampleStats> {
    ingest_str(&read_input(path)?)
}
