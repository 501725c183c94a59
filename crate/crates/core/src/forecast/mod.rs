//! ARIMA demand forecasting: differencing, recursive least squares with a
//! forgetting factor, minimum-variance k-step prediction and residual
//! diagnostics.
//!
//! Sign conventions: `A(B) = 1 - a_1 B - .. - a_p B^p` and
//! `C(B) = 1 + c_1 B + .. + c_q B^q`, with `A(B) (1-B)^d x(t) = C(B) e(t)`
//! and `x(t) = y(t) - mean(y)`.

mod diagnostics;
mod difference;
pub mod poly;
mod predict;
mod rls;

use thiserror::Error;

pub use diagnostics::{acf, chi2_critical_95, pacf, r_squared, whiteness_check, Whiteness};
pub use difference::{difference, integrate};
pub use predict::{
    astrom_predict, forecast_counts, forecast_demand, forecast_levels, predict_recursive, AstromPredictor, IDENTITY_TOLERANCE,
};
pub use rls::{
    check_forgetting_factor, filter_residuals, rls_fit, RlsState, DEFAULT_FORGETTING_FACTOR, INITIAL_COVARIANCE,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ForecastError {
    #[error("SERIES_TOO_SHORT: need at least {needed} values, got {got}")]
    SeriesTooShort { needed: usize, got: usize },
    #[error("LENGTH_MISMATCH: expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("NUMERICAL_BREAKDOWN: {0}")]
    NumericalBreakdown(&'static str),
    #[error("NONINVERTIBLE_MA: the MA polynomial has a root on or inside the unit circle")]
    NoninvertibleMa,
    #[error("invalid order: {0}")]
    InvalidOrder(String),
    #[error("forgetting factor {0} is outside (0.9, 1]")]
    InvalidForgettingFactor(f64),
    #[error("DEGENERATE: {0}")]
    Degenerate(&'static str),
}

impl ForecastError {
    pub fn code(&self) -> &'static str {
        match self {
            ForecastError::SeriesTooShort { .. } => "SERIES_TOO_SHORT",
            ForecastError::LengthMismatch { .. } => "LENGTH_MISMATCH",
            ForecastError::NumericalBreakdown(_) => "NUMERICAL_BREAKDOWN",
            ForecastError::NoninvertibleMa => "NONINVERTIBLE_MA",
            ForecastError::InvalidOrder(_) => "INVALID_ORDER",
            ForecastError::InvalidForgettingFactor(_) => "INVALID_FORGETTING_FACTOR",
            ForecastError::Degenerate(_) => "DEGENERATE",
        }
    }

    /// Whether the failure is numerical rather than a bad argument.
    pub fn is_numerical(&self) -> bool {
        matches!(self, ForecastError::NumericalBreakdown(_) | ForecastError::NoninvertibleMa)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ArimaOrder {
    pub p: usize,
    pub d: usize,
    pub q: usize,
}

impl ArimaOrder {
    pub fn new(p: usize, d: usize, q: usize) -> Result<Self, ForecastError> {
        let order = ArimaOrder { p, d, q };
        order.validate()?;
        Ok(order)
    }

    pub fn validate(&self) -> Result<(), ForecastError> {
        if self.p + self.q == 0 {
            return Err(ForecastError::InvalidOrder("p + q must be at least 1".into()));
        }
        Ok(())
    }

    pub fn n_params(&self) -> usize {
        self.p + self.q
    }
}

impl std::fmt::Display for ArimaOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{},{},{}", self.p, self.d, self.q)
    }
}

impl std::str::FromStr for ArimaOrder {
    type Err = ForecastError;

    /// Parses `p,d,q`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let bad = || ForecastError::InvalidOrder(format!("expected p,d,q but got {s:?}"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let n: Vec<usize> = parts.iter().map(|p| p.parse().map_err(|_| bad())).collect::<Result<_, _>>()?;
        ArimaOrder::new(n[0], n[1], n[2])
    }
}

/// A fitted ARIMA model. `ar_coeffs` are the `a_i` (also written gamma),
/// `ma_coeffs` the `c_j` (theta).
#[derive(Debug, Clone, PartialEq)]
pub struct ArimaModel {
    pub order: ArimaOrder,
    pub ar_coeffs: Vec<f64>,
    pub ma_coeffs: Vec<f64>,
    pub series_mean: f64,
    pub noise_variance: f64,
}

impl ArimaModel {
    /// `A(B) (1-B)^d` as coefficients of `B^0, B^1, ..`.
    pub fn integrated_ar_poly(&self) -> Vec<f64> {
        let a: Vec<f64> = std::iter::once(1.0).chain(self.ar_coeffs.iter().map(|v| -v)).collect();
        poly::mul(&a, &poly::difference_operator(self.order.d))
    }

    /// `C(B)`.
    pub fn ma_poly(&self) -> Vec<f64> {
        std::iter::once(1.0).chain(self.ma_coeffs.iter().copied()).collect()
    }

    /// Checks coefficient counts against the order. A model with `p = q = 0`
    /// is accepted here: it is the white-noise predictor, never fitted.
    pub fn check_shape(&self) -> Result<(), ForecastError> {
        if self.ar_coeffs.len() != self.order.p || self.ma_coeffs.len() != self.order.q {
            return Err(ForecastError::InvalidOrder(format!(
                "order ({}) but {} AR and {} MA coefficients",
                self.order,
                self.ar_coeffs.len(),
                self.ma_coeffs.len()
            )));
        }
        if !(self.noise_variance >= 0.0) || !self.series_mean.is_finite() {
            return Err(ForecastError::NumericalBreakdown("model has an invalid mean or noise variance"));
        }
        Ok(())
    }
}
