//! Parameter bundles, demand series and procurement plans shared by every
//! other module.
//!
//! Money is carried as integer cents so that weekly cost increments always
//! sum to the reported total without floating-point drift. The attrition
//! rate is carried in parts per million for the same reason: attrition
//! losses are `round_half_up(K * n)` and must not depend on how `0.1` happens
//! to be represented in binary.

mod config;
mod demand;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use config::{load_config, parse_config, write_config, ConfigError, CONFIG_KEYS};
pub use demand::{gen_demand, parse_demand_csv, read_demand_csv, write_demand_csv, DemandError};

/// Monetary amount in cents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Money(i64);

impl Money {
    pub const ZERO: Money = Money(0);

    pub const fn from_cents(cents: i64) -> Self {
        Money(cents)
    }

    pub const fn from_units(units: i64) -> Self {
        Money(units * 100)
    }

    pub const fn cents(self) -> i64 {
        self.0
    }

    /// Value in whole currency units, as a float. Used for fitness weighting.
    pub fn as_f64(self) -> f64 {
        self.0 as f64 / 100.0
    }

    pub fn times(self, count: i64) -> Money {
        Money(self.0 * count)
    }
}

impl std::ops::Add for Money {
    type Output = Money;
    fn add(self, rhs: Money) -> Money {
        Money(self.0 + rhs.0)
    }
}

impl std::ops::AddAssign for Money {
    fn add_assign(&mut self, rhs: Money) {
        self.0 += rhs.0;
    }
}

impl std::ops::Sub for Money {
    type Output = Money;
    fn sub(self, rhs: Money) -> Money {
        Money(self.0 - rhs.0)
    }
}

impl std::iter::Sum for Money {
    fn sum<I: Iterator<Item = Money>>(iter: I) -> Money {
        iter.fold(Money::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for Money {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_scaled(self.0, 2))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid decimal `{input}`: {reason}")]
pub struct DecimalError {
    pub input: String,
    pub reason: &'static str,
}

impl FromStr for Money {
    type Err = DecimalError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_scaled(s, 2).map(Money)
    }
}

/// Parses a plain decimal literal into an integer scaled by `10^decimals`.
/// Rejects exponents and excess fractional digits rather than rounding them.
pub(crate) fn parse_scaled(s: &str, decimals: u32) -> Result<i64, DecimalError> {
    let err = |reason| DecimalError { input: s.to_string(), reason };
    let t = s.trim();
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    if body.is_empty() {
        return Err(err("empty"));
    }
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err("no digits"));
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
        return Err(err("not a plain decimal"));
    }
    if frac_part.len() > decimals as usize {
        return Err(err("too many fractional digits"));
    }
    let scale = 10i64.pow(decimals);
    let int_val: i64 = if int_part.is_empty() {
        0
    } else {
        int_part.parse().map_err(|_| err("out of range"))?
    };
    let mut frac_val: i64 = if frac_part.is_empty() { 0 } else { frac_part.parse().map_err(|_| err("out of range"))? };
    frac_val *= 10i64.pow(decimals - frac_part.len() as u32);
    let v = int_val
        .checked_mul(scale)
        .and_then(|v| v.checked_add(frac_val))
        .ok_or_else(|| err("out of range"))?;
    Ok(if neg { -v } else { v })
}

/// Inverse of [`parse_scaled`]; trailing fractional zeros are dropped.
pub(crate) fn format_scaled(v: i64, decimals: u32) -> String {
    let scale = 10i64.pow(decimals);
    let sign = if v < 0 { "-" } else { "" };
    let a = v.unsigned_abs();
    let int = a / scale as u64;
    let frac = a % scale as u64;
    if frac == 0 {
        return format!("{sign}{int}");
    }
    let mut f = format!("{:0width$}", frac, width = decimals as usize);
    while f.ends_with('0') {
        f.pop();
    }
    format!("{sign}{int}.{f}")
}

/// Half-up rounding of a non-negative float to an integer count.
pub fn round_half_up(x: f64) -> i64 {
    (x + 0.5).floor() as i64
}

/// Weekly attrition fraction `K`, stored in parts per million.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct AttritionRate(u32);

impl AttritionRate {
    pub const PPM: u32 = 1_000_000;
    pub const ZERO: AttritionRate = AttritionRate(0);

    pub fn from_ppm(ppm: u32) -> Result<Self, ValidationError> {
        if ppm >= Self::PPM {
            return Err(ValidationError::new("attrition_rate", "must satisfy 0 <= K < 1"));
        }
        Ok(AttritionRate(ppm))
    }

    /// Converts a float fraction, rounding to the nearest millionth.
    pub fn from_fraction(k: f64) -> Result<Self, ValidationError> {
        if !k.is_finite() || !(0.0..1.0).contains(&k) {
            return Err(ValidationError::new("attrition_rate", "must satisfy 0 <= K < 1"));
        }
        Self::from_ppm((k * Self::PPM as f64).round() as u32)
    }

    pub fn ppm(self) -> u32 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64 / Self::PPM as f64
    }

    /// Units lost out of `in_use`, rounded half-up, in exact integer arithmetic.
    pub fn losses(self, in_use: u64) -> u64 {
        (self.0 as u64 * in_use + (Self::PPM as u64 / 2)) / Self::PPM as u64
    }
}

impl fmt::Display for AttritionRate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_scaled(self.0 as i64, 6))
    }
}

impl FromStr for AttritionRate {
    type Err = DecimalError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let v = parse_scaled(s, 6)?;
        if !(0..AttritionRate::PPM as i64).contains(&v) {
            return Err(DecimalError { input: s.to_string(), reason: "must satisfy 0 <= K < 1" });
        }
        Ok(AttritionRate(v as u32))
    }
}

/// A constructor rejected a value that violates a type invariant.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid {field}: {reason}")]
pub struct ValidationError {
    pub field: &'static str,
    pub reason: String,
}

impl ValidationError {
    pub fn new(field: &'static str, reason: impl Into<String>) -> Self {
        ValidationError { field, reason: reason.into() }
    }
}

/// Unit prices. Maintenance prices are per unit-week.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CostParams {
    pub vessel_price: Money,
    pub operator_price: Money,
    pub training_price: Money,
    pub operator_maint_price: Money,
    pub vessel_maint_price: Money,
}

impl CostParams {
    pub fn new(
        vessel_price: Money,
        operator_price: Money,
        training_price: Money,
        operator_maint_price: Money,
        vessel_maint_price: Money,
    ) -> Result<Self, ValidationError> {
        let c = CostParams { vessel_price, operator_price, training_price, operator_maint_price, vessel_maint_price };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), ValidationError> {
        for (field, v) in [
            ("vessel_price", self.vessel_price),
            ("operator_price", self.operator_price),
            ("training_price", self.training_price),
            ("operator_maint_price", self.operator_maint_price),
            ("vessel_maint_price", self.vessel_maint_price),
        ] {
            if v.cents() <= 0 {
                return Err(ValidationError::new(field, "price must be strictly positive"));
            }
        }
        Ok(())
    }
}

/// Fleet-level parameters: instruction capacity `G`, attrition `K`, the
/// starting fleet and the planning horizon in weeks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FleetParams {
    pub instruct_capacity: u32,
    pub attrition_rate: AttritionRate,
    pub initial_vessels: u32,
    pub initial_operators: u32,
    pub horizon: usize,
}

impl FleetParams {
    pub fn new(
        instruct_capacity: u32,
        attrition_rate: AttritionRate,
        initial_vessels: u32,
        initial_operators: u32,
        horizon: usize,
    ) -> Result<Self, ValidationError> {
        let p = FleetParams { instruct_capacity, attrition_rate, initial_vessels, initial_operators, horizon };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), ValidationError> {
        if self.instruct_capacity < 1 {
            return Err(ValidationError::new("instruct_capacity", "must be at least 1"));
        }
        if self.attrition_rate.ppm() >= AttritionRate::PPM {
            return Err(ValidationError::new("attrition_rate", "must satisfy 0 <= K < 1"));
        }
        if self.horizon < 1 {
            return Err(ValidationError::new("horizon", "must be at least 1 week"));
        }
        Ok(())
    }

    /// Instructors needed to train `novices` new operators: `ceil(novices / G)`.
    pub fn instructors_for(&self, novices: u32) -> u32 {
        novices.div_ceil(self.instruct_capacity)
    }
}

/// Scenario presets for the three model variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    /// No attrition; `G` from the configuration.
    Base,
    /// 20% weekly attrition of in-use units.
    K20,
    /// 10% weekly attrition with `G = 20`.
    K10G20,
}

impl Scenario {
    pub fn apply(self, params: &FleetParams) -> FleetParams {
        let mut p = *params;
        match self {
            Scenario::Base => p.attrition_rate = AttritionRate::ZERO,
            Scenario::K20 => p.attrition_rate = AttritionRate(200_000),
            Scenario::K10G20 => {
                p.attrition_rate = AttritionRate(100_000);
                p.instruct_capacity = 20;
            }
        }
        p
    }

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Base => "base",
            Scenario::K20 => "k20",
            Scenario::K10G20 => "k10g20",
        }
    }

    pub const ALL: [Scenario; 3] = [Scenario::Base, Scenario::K20, Scenario::K10G20];
}

impl FromStr for Scenario {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "base" => Ok(Scenario::Base),
            "k20" => Ok(Scenario::K20),
            "k10g20" => Ok(Scenario::K10G20),
            other => Err(format!("unknown scenario `{other}` (expected base, k20 or k10g20)")),
        }
    }
}

/// Robots required per week, `R_1..R_h`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct DemandSeries(Vec<u32>);

impl DemandSeries {
    pub fn new(values: Vec<u32>) -> Self {
        DemandSeries(values)
    }

    pub fn zeros(horizon: usize) -> Self {
        DemandSeries(vec![0; horizon])
    }

    pub fn values(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Demand in 1-based week `week`; zero outside the series.
    pub fn week(&self, week: usize) -> u32 {
        if week == 0 {
            0
        } else {
            self.0.get(week - 1).copied().unwrap_or(0)
        }
    }

    pub fn max(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.0
    }

    pub fn check_horizon(&self, horizon: usize) -> Result<(), ValidationError> {
        if self.0.len() != horizon {
            return Err(ValidationError::new(
                "demand",
                format!("series has {} weeks but the horizon is {horizon}", self.0.len()),
            ));
        }
        Ok(())
    }
}

/// Which kind of unit a purchase or shortfall refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum UnitKind {
    Vessel,
    Operator,
}

impl fmt::Display for UnitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UnitKind::Vessel => "vessel",
            UnitKind::Operator => "operator",
        })
    }
}

/// The decision vector: purchases per week for each unit kind. Index 0 is week 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ProcurementPlan {
    pub vessel_buys: Vec<u32>,
    pub operator_buys: Vec<u32>,
}

impl ProcurementPlan {
    pub fn zeros(horizon: usize) -> Self {
        ProcurementPlan { vessel_buys: vec![0; horizon], operator_buys: vec![0; horizon] }
    }

    pub fn new(vessel_buys: Vec<u32>, operator_buys: Vec<u32>) -> Result<Self, ValidationError> {
        if vessel_buys.len() != operator_buys.len() {
            return Err(ValidationError::new("plan", "vessel and operator sequences differ in length"));
        }
        Ok(ProcurementPlan { vessel_buys, operator_buys })
    }

    pub fn horizon(&self) -> usize {
        self.vessel_buys.len()
    }

    pub fn buys(&self, idx: usize) -> (u32, u32) {
        (self.vessel_buys[idx], self.operator_buys[idx])
    }

    pub fn get(&self, kind: UnitKind, idx: usize) -> u32 {
        match kind {
            UnitKind::Vessel => self.vessel_buys[idx],
            UnitKind::Operator => self.operator_buys[idx],
        }
    }

    pub fn get_mut(&mut self, kind: UnitKind, idx: usize) -> &mut u32 {
        match kind {
            UnitKind::Vessel => &mut self.vessel_buys[idx],
            UnitKind::Operator => &mut self.operator_buys[idx],
        }
    }

    /// Sum of all purchase quantities.
    pub fn total_units(&self) -> u64 {
        self.vessel_buys.iter().chain(&self.operator_buys).map(|&v| v as u64).sum()
    }
}
