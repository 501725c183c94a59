use crate::domain::{round_half_up, DemandSeries};

use super::poly::{is_invertible, mul};
use super::rls::rls_fit;
use super::{ArimaModel, ArimaOrder, ForecastError};

/// Largest coefficient error tolerated in `C = A (1-B)^d F + B^k G`.
pub const IDENTITY_TOLERANCE: f64 = 1e-9;

/// Minimum-variance `k`-step predictor: `F` and `G` solve
/// `C(B) = A(B) (1-B)^d F(B) + B^k G(B)` with `deg F = k - 1`, and the
/// forecast is `G(B) / C(B)` applied to the centred series.
#[derive(Debug, Clone, PartialEq)]
pub struct AstromPredictor {
    pub f_poly: Vec<f64>,
    pub g_poly: Vec<f64>,
    pub c_poly: Vec<f64>,
    /// `A(B) (1-B)^d`.
    pub a_poly: Vec<f64>,
    pub horizon: usize,
}

impl AstromPredictor {
    pub fn new(model: &ArimaModel, k: usize) -> Result<Self, ForecastError> {
        if k == 0 {
            return Err(ForecastError::InvalidOrder("prediction horizon must be at least 1".into()));
        }
        let a_poly = model.integrated_ar_poly();
        let c_poly = model.ma_poly();
        // F: first k terms of C / A~
        let mut f = vec![0.0; k];
        for j in 0..k {
            let mut v = c_poly.get(j).copied().unwrap_or(0.0);
            for i in 1..=j.min(a_poly.len() - 1) {
                v -= a_poly[i] * f[j - i];
            }
            f[j] = v;
        }
        let af = mul(&a_poly, &f);
        let len = af.len().max(c_poly.len());
        let rem: Vec<f64> = (0..len)
            .map(|i| c_poly.get(i).copied().unwrap_or(0.0) - af.get(i).copied().unwrap_or(0.0))
            .collect();
        let scale = 1.0 + c_poly.iter().chain(&a_poly).fold(0.0f64, |m, v| m.max(v.abs()));
        if rem[..k.min(len)].iter().any(|r| r.abs() > IDENTITY_TOLERANCE * scale) {
            return Err(ForecastError::NumericalBreakdown("predictor identity does not hold"));
        }
        let g_poly = if len > k { rem[k..].to_vec() } else { Vec::new() };
        Ok(AstromPredictor { f_poly: f, g_poly, c_poly, a_poly, horizon: k })
    }

    /// Largest coefficient of `C - (A~ F + B^k G)`.
    pub fn identity_error(&self) -> f64 {
        let af = mul(&self.a_poly, &self.f_poly);
        let len = af.len().max(self.c_poly.len()).max(self.horizon + self.g_poly.len());
        (0..len)
            .map(|i| {
                let g = if i >= self.horizon { self.g_poly.get(i - self.horizon).copied().unwrap_or(0.0) } else { 0.0 };
                let c = self.c_poly.get(i).copied().unwrap_or(0.0);
                (c - af.get(i).copied().unwrap_or(0.0) - g).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Forecast of `x(t + k)` from centred values `x(0..=t)`, filtering
    /// `C(B) u = G(B) x` from rest.
    pub fn predict_centred(&self, x: &[f64]) -> f64 {
        let mut u = vec![0.0; x.len()];
        for s in 0..x.len() {
            let mut v = 0.0;
            for (i, g) in self.g_poly.iter().enumerate() {
                if s >= i {
                    v += g * x[s - i];
                }
            }
            for j in 1..self.c_poly.len() {
                if s >= j {
                    v -= self.c_poly[j] * u[s - j];
                }
            }
            u[s] = v;
        }
        u.last().copied().unwrap_or(0.0)
    }
}

fn check_prediction(model: &ArimaModel, history: &[f64], k: usize) -> Result<(), ForecastError> {
    model.check_shape()?;
    if k == 0 {
        return Err(ForecastError::InvalidOrder("prediction horizon must be at least 1".into()));
    }
    let ArimaOrder { p, d, q } = model.order;
    if history.len() < (p + d + q).max(1) {
        return Err(ForecastError::SeriesTooShort { needed: (p + d + q).max(1), got: history.len() });
    }
    if !is_invertible(&model.ma_coeffs) {
        return Err(ForecastError::NoninvertibleMa);
    }
    Ok(())
}

/// `k`-step minimum-variance forecast of the level series after `history`.
pub fn astrom_predict(model: &ArimaModel, history: &[f64], k: usize) -> Result<f64, ForecastError> {
    check_prediction(model, history, k)?;
    let x: Vec<f64> = history.iter().map(|y| y - model.series_mean).collect();
    Ok(AstromPredictor::new(model, k)?.predict_centred(&x) + model.series_mean)
}

/// The same forecast by conditional expectation: reconstruct the shocks
/// from the history, then run the model forward with future shocks at zero.
pub fn predict_recursive(model: &ArimaModel, history: &[f64], k: usize) -> Result<f64, ForecastError> {
    check_prediction(model, history, k)?;
    let a = model.integrated_ar_poly();
    let c = model.ma_poly();
    let n = history.len();
    let mut x: Vec<f64> = history.iter().map(|y| y - model.series_mean).collect();
    let mut e = vec![0.0; n];
    for s in 0..n {
        let mut v = 0.0;
        for (i, ai) in a.iter().enumerate() {
            if s >= i {
                v += ai * x[s - i];
            }
        }
        for j in 1..c.len() {
            if s >= j {
                v -= c[j] * e[s - j];
            }
        }
        e[s] = v;
    }
    for h in 1..=k {
        let s = n - 1 + h;
        let mut v = 0.0;
        for i in 1..a.len() {
            if s >= i {
                v -= a[i] * x[s - i];
            }
        }
        for j in h..c.len() {
            if s >= j && s - j < n {
                v += c[j] * e[s - j];
            }
        }
        x.push(v);
    }
    Ok(x[n - 1 + k] + model.series_mean)
}

/// Fits `order` to the demand history and forecasts the next `horizon`
/// weeks, rounded half-up and clamped at zero.
pub fn forecast_demand(
    series: &DemandSeries,
    order: ArimaOrder,
    lambda: f64,
    horizon: usize,
) -> Result<DemandSeries, ForecastError> {
    if horizon == 0 {
        return Err(ForecastError::InvalidOrder("forecast horizon must be at least 1".into()));
    }
    let y: Vec<f64> = series.values().iter().map(|&v| v as f64).collect();
    let (model, _) = rls_fit(&y, order, lambda)?;
    forecast_counts(&model, &y, horizon)
}

/// Forecasts from an already fitted model, rounded half-up to whole robots
/// and clamped at zero.
pub fn forecast_counts(model: &ArimaModel, history: &[f64], horizon: usize) -> Result<DemandSeries, ForecastError> {
    let levels = forecast_levels(model, history, horizon)?;
    Ok(DemandSeries::new(levels.into_iter().map(|f| round_half_up(f).clamp(0, u32::MAX as i64) as u32).collect()))
}

/// Unrounded forecasts for steps `1..=horizon`.
pub fn forecast_levels(model: &ArimaModel, history: &[f64], horizon: usize) -> Result<Vec<f64>, ForecastError> {
    (1..=horizon).map(|k| astrom_predict(model, history, k)).collect()
}
