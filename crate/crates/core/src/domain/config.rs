use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use super::{AttritionRate, CostParams, FleetParams, Money, ValidationError};

/// Every key a configuration file must define, in canonical order.
pub const CONFIG_KEYS: [&str; 10] = [
    "vessel_price",
    "operator_price",
    "training_price",
    "operator_maint_price",
    "vessel_maint_price",
    "instruct_capacity",
    "attrition_rate",
    "initial_vessels",
    "initial_operators",
    "horizon",
];

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: duplicate key `{key}`")]
    DuplicateKey { line: usize, key: String },
    #[error("missing key `{key}`")]
    MissingKey { key: &'static str },
    #[error("line {line}: bad value for `{key}`: {reason}")]
    BadValue { line: usize, key: &'static str, reason: String },
    #[error(transparent)]
    Invalid(#[from] ValidationError),
}

impl ConfigError {
    /// The configuration key the error refers to, when there is one.
    pub fn key(&self) -> Option<&str> {
        match self {
            ConfigError::UnknownKey { key, .. } | ConfigError::DuplicateKey { key, .. } => Some(key),
            ConfigError::MissingKey { key } | ConfigError::BadValue { key, .. } => Some(key),
            ConfigError::Invalid(v) => Some(v.field),
            _ => None,
        }
    }
}

pub fn load_config(path: impl AsRef<Path>) -> Result<(CostParams, FleetParams), ConfigError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
    parse_config(&text)
}

/// Parses the flat `key = value` format. Blank lines and `#` comments are
/// ignored; unknown or repeated keys are errors.
pub fn parse_config(text: &str) -> Result<(CostParams, FleetParams), ConfigError> {
    let mut seen: BTreeMap<&'static str, (usize, &str)> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (k, v) = content.split_once('=').ok_or(ConfigError::Syntax { line })?;
        let k = k.trim();
        let key = CONFIG_KEYS
            .iter()
            .copied()
            .find(|&known| known == k)
            .ok_or_else(|| ConfigError::UnknownKey { line, key: k.to_string() })?;
        if seen.insert(key, (line, v.trim())).is_some() {
            return Err(ConfigError::DuplicateKey { line, key: k.to_string() });
        }
    }
    let get = |key: &'static str| seen.get(key).copied().ok_or(ConfigError::MissingKey { key });
    let money = |key: &'static str| -> Result<Money, ConfigError> {
        let (line, v) = get(key)?;
        v.parse::<Money>().map_err(|e| ConfigError::BadValue { line, key, reason: e.reason.to_string() })
    };
    fn count<T: std::str::FromStr>(key: &'static str, entry: (usize, &str)) -> Result<T, ConfigError> {
        let (line, v) = entry;
        v.parse::<T>()
            .map_err(|_| ConfigError::BadValue { line, key, reason: "expected a non-negative integer".into() })
    }

    let costs = CostParams {
        vessel_price: money("vessel_price")?,
        operator_price: money("operator_price")?,
        training_price: money("training_price")?,
        operator_maint_price: money("operator_maint_price")?,
        vessel_maint_price: money("vessel_maint_price")?,
    };
    let (k_line, k_val) = get("attrition_rate")?;
    let attrition_rate: AttritionRate = k_val.parse().map_err(|e: super::DecimalError| ConfigError::BadValue {
        line: k_line,
        key: "attrition_rate",
        reason: e.reason.to_string(),
    })?;
    let fleet = FleetParams {
        instruct_capacity: count("instruct_capacity", get("instruct_capacity")?)?,
        attrition_rate,
        initial_vessels: count("initial_vessels", get("initial_vessels")?)?,
        initial_operators: count("initial_operators", get("initial_operators")?)?,
        horizon: count("horizon", get("horizon")?)?,
    };
    costs.validate()?;
    fleet.validate()?;
    Ok((costs, fleet))
}

/// Serializes parameters in canonical key order; `parse_config` reads it back unchanged.
pub fn write_config(costs: &CostParams, fleet: &FleetParams) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "vessel_price = {}", costs.vessel_price);
    let _ = writeln!(s, "operator_price = {}", costs.operator_price);
    let _ = writeln!(s, "training_price = {}", costs.training_price);
    let _ = writeln!(s, "operator_maint_price = {}", costs.operator_maint_price);
    let _ = writeln!(s, "vessel_maint_price = {}", costs.vessel_maint_price);
    let _ = writeln!(s, "instruct_capacity = {}", fleet.instruct_capacity);
    let _ = writeln!(s, "attrition_rate = {}", fleet.attrition_rate);
    let _ = writeln!(s, "initial_vessels = {}", fleet.initial_vessels);
    let _ = writeln!(s, "initial_operators = {}", fleet.initial_operators);
    let _ = writeln!(s, "horizon = {}", fleet.horizon);
    s
}
