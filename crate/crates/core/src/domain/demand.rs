use std::fmt::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::{round_half_up, DemandSeries, ValidationError};

#[derive(Debug, Error)]
pub enum DemandError {
    #[error("cannot read demand file {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("demand file line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

/// Strength of the pull back toward `level` in the generated walk.
const REVERSION: f64 = 0.25;

/// Generates a synthetic weekly demand series.
///
/// The series is a mean-reverting random walk around `level` with step
/// standard deviation `level * volatility`, kept inside `[0, 2 * level]` and
/// rounded half-up to whole robots. Noise is an Irwin-Hall sum of twelve
/// uniforms so the output depends only on the ChaCha stream and IEEE
/// arithmetic, never on a platform `libm`.
pub fn gen_demand(horizon: usize, seed: u64, level: f64, volatility: f64) -> Result<DemandSeries, ValidationError> {
    if horizon < 1 {
        return Err(ValidationError::new("horizon", "must be at least 1 week"));
    }
    if !level.is_finite() || level < 0.0 {
        return Err(ValidationError::new("level", "must be finite and non-negative"));
    }
    if !volatility.is_finite() || volatility < 0.0 {
        return Err(ValidationError::new("volatility", "must be finite and non-negative"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sigma = level * volatility;
    let upper = 2.0 * level;
    let mut x = level;
    let mut values = Vec::with_capacity(horizon);
    for _ in 0..horizon {
        let eps: f64 = (0..12).map(|_| rng.random::<f64>()).sum::<f64>() - 6.0;
        x += REVERSION * (level - x) + sigma * eps;
        x = x.clamp(0.0, upper);
        values.push(round_half_up(x) as u32);
    }
    Ok(DemandSeries::new(values))
}

pub fn read_demand_csv(path: impl AsRef<Path>) -> Result<DemandSeries, DemandError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|source| DemandError::Io { path: path.display().to_string(), source })?;
    parse_demand_csv(&text)
}

/// Parses `week,demand` CSV. Weeks must run 1, 2, ... without gaps.
pub fn parse_demand_csv(text: &str) -> Result<DemandSeries, DemandError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, h)) if h.trim() == "week,demand" => {}
        Some((i, _)) => return Err(DemandError::Parse { line: i + 1, reason: "expected header `week,demand`".into() }),
        None => return Err(DemandError::Parse { line: 1, reason: "empty file".into() }),
    }
    let mut values = Vec::new();
    for (i, l) in lines {
        let line = i + 1;
        let (w, d) = l
            .trim()
            .split_once(',')
            .ok_or_else(|| DemandError::Parse { line, reason: "expected two columns".into() })?;
        let week: usize =
            w.trim().parse().map_err(|_| DemandError::Parse { line, reason: format!("bad week `{w}`") })?;
        if week != values.len() + 1 {
            return Err(DemandError::Parse {
                line,
                reason: format!("expected week {} but found {week}", values.len() + 1),
            });
        }
        let demand: u32 =
            d.trim().parse().map_err(|_| DemandError::Parse { line, reason: format!("bad demand `{d}`") })?;
        values.push(demand);
    }
    Ok(DemandSeries::new(values))
}

pub fn write_demand_csv(series: &DemandSeries) -> String {
    let mut s = String::from("week,demand\n");
    for (i, v) in series.values().iter().enumerate() {
        let _ = writeln!(s, "{},{}", i + 1, v);
    }
    s
}
