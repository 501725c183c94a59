use std::collections::VecDeque;

use nalgebra::{DMatrix, DVector};

use super::difference::difference;
use super::poly::is_invertible;
use super::{ArimaModel, ArimaOrder, ForecastError};

/// Diagonal of the initial covariance: a diffuse prior.
pub const INITIAL_COVARIANCE: f64 = 1e6;
pub const DEFAULT_FORGETTING_FACTOR: f64 = 0.98;
/// Extra passes that re-estimate with residuals from the previous fit.
const REFINEMENT_PASSES: usize = 3;
/// Per-lag shrink applied to MA coefficients until they are invertible.
const MA_SHRINK: f64 = 0.98;

/// Recursive least squares with exponential forgetting over the regressor
/// `[w(t-1) .. w(t-p), e(t-1) .. e(t-q)]`, where the `e` are the estimator's
/// own a posteriori residuals (extended least squares).
#[derive(Debug, Clone, PartialEq)]
pub struct RlsState {
    pub estimate: DVector<f64>,
    pub covariance: DMatrix<f64>,
    pub forgetting_factor: f64,
    /// Most recent residual first.
    pub residual_history: VecDeque<f64>,
    /// Most recent observation first.
    value_history: VecDeque<f64>,
    p: usize,
    q: usize,
}

pub fn check_forgetting_factor(lambda: f64) -> Result<(), ForecastError> {
    if lambda > 0.9 && lambda <= 1.0 {
        Ok(())
    } else {
        Err(ForecastError::InvalidForgettingFactor(lambda))
    }
}

impl RlsState {
    pub fn new(p: usize, q: usize, lambda: f64) -> Result<Self, ForecastError> {
        check_forgetting_factor(lambda)?;
        let k = p + q;
        Ok(RlsState {
            estimate: DVector::zeros(k),
            covariance: DMatrix::identity(k, k) * INITIAL_COVARIANCE,
            forgetting_factor: lambda,
            residual_history: VecDeque::from(vec![0.0; q]),
            value_history: VecDeque::from(vec![0.0; p]),
            p,
            q,
        })
    }

    /// Current regressor built from the stored histories.
    pub fn regressor(&self) -> DVector<f64> {
        DVector::from_iterator(self.p + self.q, self.value_history.iter().chain(&self.residual_history).copied())
    }

    /// Takes the next observation, updates the estimate and returns the a
    /// posteriori residual.
    pub fn update(&mut self, y: f64) -> Result<f64, ForecastError> {
        let phi = self.regressor();
        let e = self.update_with(&phi, y)?;
        if self.q > 0 {
            self.residual_history.pop_back();
            self.residual_history.push_front(e);
        }
        if self.p > 0 {
            self.value_history.pop_back();
            self.value_history.push_front(y);
        }
        Ok(e)
    }

    /// One step with a caller-supplied regressor. Histories are untouched.
    pub fn update_with(&mut self, phi: &DVector<f64>, y: f64) -> Result<f64, ForecastError> {
        let p_phi = &self.covariance * phi;
        let denom = self.forgetting_factor + phi.dot(&p_phi);
        if !(denom.is_finite() && denom > 0.0) {
            return Err(ForecastError::NumericalBreakdown("gain denominator is not positive"));
        }
        let gain = &p_phi / denom;
        let err = y - phi.dot(&self.estimate);
        self.estimate += &gain * err;
        let mut cov = (&self.covariance - &gain * p_phi.transpose()) / self.forgetting_factor;
        cov = (&cov + cov.transpose()) * 0.5;
        if cov.diagonal().iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(ForecastError::NumericalBreakdown("covariance lost positive definiteness"));
        }
        self.covariance = cov;
        Ok(y - phi.dot(&self.estimate))
    }
}

/// Residuals of the ARMA model `(ar, ma)` run over `w` from rest.
pub fn filter_residuals(w: &[f64], ar: &[f64], ma: &[f64]) -> Vec<f64> {
    let mut e = vec![0.0; w.len()];
    for t in 0..w.len() {
        let mut s = w[t];
        for (i, a) in ar.iter().enumerate() {
            if t > i {
                s -= a * w[t - 1 - i];
            }
        }
        for (j, c) in ma.iter().enumerate() {
            if t > j {
                s -= c * e[t - 1 - j];
            }
        }
        e[t] = s;
    }
    e
}

fn fixed_regressor_fit(w: &[f64], resid: &[f64], p: usize, q: usize, lambda: f64) -> Result<DVector<f64>, ForecastError> {
    let mut state = RlsState::new(p, q, lambda)?;
    for t in 0..w.len() {
        let phi = DVector::from_fn(p + q, |i, _| {
            let lag = if i < p { i + 1 } else { i - p + 1 };
            let src = if i < p { w } else { resid };
            if t >= lag { src[t - lag] } else { 0.0 }
        });
        state.update_with(&phi, w[t])?;
    }
    Ok(state.estimate)
}

/// Fits ARIMA(p, d, q) by recursive least squares.
///
/// The series is centred on its mean and differenced `d` times; the ARMA
/// part is then estimated online with extended least squares. With MA
/// terms, a few refinement passes re-run the estimator with regressors
/// built from the previous fit's filtered residuals, which removes most of
/// the bias the online residual estimates leave behind. MA coefficients
/// are finally shrunk until the MA polynomial is invertible.
///
/// Returns the model and its residuals, one per differenced observation.
pub fn rls_fit(series: &[f64], order: ArimaOrder, lambda: f64) -> Result<(ArimaModel, Vec<f64>), ForecastError> {
    order.validate()?;
    check_forgetting_factor(lambda)?;
    let ArimaOrder { p, d, q } = order;
    let needed = (10 * (p + q)).max(d + 1);
    if series.len() < needed {
        return Err(ForecastError::SeriesTooShort { needed, got: series.len() });
    }
    if series.iter().any(|v| !v.is_finite()) {
        return Err(ForecastError::NumericalBreakdown("series contains a non-finite value"));
    }
    let mean = series.iter().sum::<f64>() / series.len() as f64;
    let centred: Vec<f64> = series.iter().map(|y| y - mean).collect();
    let (w, _) = difference(&centred, d)?;

    let mut state = RlsState::new(p, q, lambda)?;
    for &v in &w {
        state.update(v)?;
    }
    let mut theta = state.estimate;
    if q > 0 {
        for _ in 0..REFINEMENT_PASSES {
            if !is_invertible(&theta.as_slice()[p..]) {
                break;
            }
            let resid = filter_residuals(&w, &theta.as_slice()[..p], &theta.as_slice()[p..]);
            theta = fixed_regressor_fit(&w, &resid, p, q, lambda)?;
        }
    }

    let ar = theta.as_slice()[..p].to_vec();
    let mut ma = theta.as_slice()[p..].to_vec();
    let mut shrinks = 0;
    while !is_invertible(&ma) {
        shrinks += 1;
        if shrinks > 10_000 {
            return Err(ForecastError::NoninvertibleMa);
        }
        for (j, c) in ma.iter_mut().enumerate() {
            *c *= MA_SHRINK.powi(j as i32 + 1);
        }
    }
    let residuals = filter_residuals(&w, &ar, &ma);
    let noise_variance = if residuals.is_empty() {
        0.0
    } else {
        residuals.iter().map(|e| e * e).sum::<f64>() / residuals.len() as f64
    };
    let model = ArimaModel { order, ar_coeffs: ar, ma_coeffs: ma, series_mean: mean, noise_variance };
    Ok((model, residuals))
}
