use super::ForecastError;

/// Upper 5% points of the chi-square distribution for 1 to 100 degrees of
/// freedom.
const CHI2_95: [f64; 100] = [
    3.8415, 5.9915, 7.8147, 9.4877, 11.0705, 12.5916, 14.0671, 15.5073, 16.9190, 18.3070, 19.6751, 21.0261,
    22.3620, 23.6848, 24.9958, 26.2962, 27.5871, 28.8693, 30.1435, 31.4104, 32.6706, 33.9244, 35.1725, 36.4150,
    37.6525, 38.8851, 40.1133, 41.3371, 42.5570, 43.7730, 44.9853, 46.1943, 47.3999, 48.6024, 49.8018, 50.9985,
    52.1923, 53.3835, 54.5722, 55.7585, 56.9424, 58.1240, 59.3035, 60.4809, 61.6562, 62.8296, 64.0011, 65.1708,
    66.3386, 67.5048, 68.6693, 69.8322, 70.9935, 72.1532, 73.3115, 74.4683, 75.6237, 76.7778, 77.9305, 79.0819,
    80.2321, 81.3810, 82.5287, 83.6753, 84.8206, 85.9649, 87.1081, 88.2502, 89.3912, 90.5312, 91.6702, 92.8083,
    93.9453, 95.0815, 96.2167, 97.3510, 98.4844, 99.6169, 100.7486, 101.8795, 103.0095, 104.1387, 105.2672,
    106.3948, 107.5217, 108.6479, 109.7733, 110.8980, 112.0220, 113.1453, 114.2679, 115.3898, 116.5110,
    117.6317, 118.7516, 119.8709, 120.9896, 122.1077, 123.2252, 124.3421,
];

/// 5% critical value; beyond the table, the Wilson-Hilferty approximation.
pub fn chi2_critical_95(df: usize) -> f64 {
    match df {
        0 => 0.0,
        1..=100 => CHI2_95[df - 1],
        _ => {
            let k = df as f64;
            let h = 2.0 / (9.0 * k);
            k * (1.0 - h + 1.644_853_6 * h.sqrt()).powi(3)
        }
    }
}

fn check_len(len: usize, max_lag: usize) -> Result<(), ForecastError> {
    if len <= max_lag {
        return Err(ForecastError::SeriesTooShort { needed: max_lag + 1, got: len });
    }
    Ok(())
}

/// Sample autocorrelations for lags `0..=max_lag` (biased estimator, so the
/// sequence is positive semi-definite). `acf[0]` is exactly 1; a constant
/// series has zero autocorrelation at every other lag.
pub fn acf(series: &[f64], max_lag: usize) -> Result<Vec<f64>, ForecastError> {
    check_len(series.len(), max_lag)?;
    let n = series.len();
    let mean = series.iter().sum::<f64>() / n as f64;
    let dev: Vec<f64> = series.iter().map(|v| v - mean).collect();
    let c0: f64 = dev.iter().map(|v| v * v).sum();
    let mut out = vec![0.0; max_lag + 1];
    out[0] = 1.0;
    if c0 > 0.0 {
        for (k, slot) in out.iter_mut().enumerate().skip(1) {
            *slot = dev[k..].iter().zip(&dev).map(|(a, b)| a * b).sum::<f64>() / c0;
        }
    }
    Ok(out)
}

/// Partial autocorrelations for lags `0..=max_lag` by the Durbin-Levinson
/// recursion on [`acf`]. `pacf[0]` is 1.
pub fn pacf(series: &[f64], max_lag: usize) -> Result<Vec<f64>, ForecastError> {
    let r = acf(series, max_lag)?;
    let mut out = vec![0.0; max_lag + 1];
    out[0] = 1.0;
    let mut phi: Vec<f64> = Vec::new();
    let mut v = 1.0;
    for k in 1..=max_lag {
        if v <= 0.0 {
            break;
        }
        let num = r[k] - phi.iter().enumerate().map(|(j, p)| p * r[k - 1 - j]).sum::<f64>();
        let kk = num / v;
        let next: Vec<f64> = (0..phi.len()).map(|j| phi[j] - kk * phi[phi.len() - 1 - j]).chain([kk]).collect();
        phi = next;
        v *= 1.0 - kk * kk;
        out[k] = kk;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Whiteness {
    /// Ljung-Box portmanteau statistic.
    pub statistic: f64,
    pub df: usize,
    pub critical: f64,
    pub pass: bool,
}

/// Ljung-Box test that `residuals` are uncorrelated up to `max_lag`. The
/// degrees of freedom are `max_lag` less the number of fitted ARMA
/// coefficients (at least 1). Passes when the statistic is below the 5%
/// critical value.
pub fn whiteness_check(residuals: &[f64], max_lag: usize, fitted_params: usize) -> Result<Whiteness, ForecastError> {
    let r = acf(residuals, max_lag)?;
    let n = residuals.len() as f64;
    let sum: f64 = (1..=max_lag).map(|k| r[k] * r[k] / (n - k as f64)).sum();
    let statistic = n * (n + 2.0) * sum;
    let df = max_lag.saturating_sub(fitted_params).max(1);
    let critical = chi2_critical_95(df);
    Ok(Whiteness { statistic, df, critical, pass: statistic < critical })
}

/// Coefficient of determination `1 - SS_res / SS_tot`.
pub fn r_squared(fitted: &[f64], actual: &[f64]) -> Result<f64, ForecastError> {
    if fitted.len() != actual.len() {
        return Err(ForecastError::LengthMismatch { expected: actual.len(), got: fitted.len() });
    }
    if actual.len() < 2 {
        return Err(ForecastError::SeriesTooShort { needed: 2, got: actual.len() });
    }
    let mean = actual.iter().sum::<f64>() / actual.len() as f64;
    let ss_tot: f64 = actual.iter().map(|a| (a - mean).powi(2)).sum();
    if ss_tot == 0.0 {
        return Err(ForecastError::Degenerate("actual series is constant"));
    }
    let ss_res: f64 = fitted.iter().zip(actual).map(|(f, a)| (a - f).powi(2)).sum();
    Ok(1.0 - ss_res / ss_tot)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ar1(n: usize, a: f64, seed: u64) -> Vec<f64> {
        // deterministic pseudo-noise, good enough for correlation checks
        let mut s = seed;
        let mut x = 0.0;
        (0..n)
            .map(|_| {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let u = ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5;
                x = a * x + u;
                x
            })
            .collect()
    }

    #[test]
    fn acf_basics() {
        let x = ar1(5000, 0.5, 1);
        let r = acf(&x, 5).unwrap();
        assert_eq!(r[0], 1.0);
        assert!((r[1] - 0.5).abs() < 0.05);
        assert_eq!(acf(&[4.0; 10], 3).unwrap(), vec![1.0, 0.0, 0.0, 0.0]);
        assert!(acf(&[1.0, 2.0], 2).is_err());
    }

    #[test]
    fn pacf_cuts_off_after_ar_order() {
        let x = ar1(4000, 0.6, 2);
        let p = pacf(&x, 6).unwrap();
        assert_eq!(p[0], 1.0);
        assert!((p[1] - 0.6).abs() < 0.05);
        assert!(p[2..].iter().all(|v| v.abs() < 0.05), "{p:?}");
    }

    #[test]
    fn ljung_box() {
        let w = whiteness_check(&[0.0; 50], 10, 0).unwrap();
        assert_eq!(w.statistic, 0.0);
        assert!(w.pass);
        let w = whiteness_check(&ar1(1000, 0.7, 3), 20, 0).unwrap();
        assert!(!w.pass);
        assert_eq!(w.df, 20);
        assert_eq!(whiteness_check(&ar1(100, 0.0, 4), 20, 7).unwrap().df, 13);
        assert!((chi2_critical_95(13) - 22.3620).abs() < 1e-9);
        // the approximation joins the table smoothly
        assert!((chi2_critical_95(101) - 125.458).abs() < 0.05);
    }

    #[test]
    fn r_squared_cases() {
        let a = [1.0, 2.0, 4.0, 8.0];
        assert_eq!(r_squared(&a, &a).unwrap(), 1.0);
        assert_eq!(r_squared(&[3.75; 4], &a).unwrap(), 0.0);
        assert!(matches!(r_squared(&[1.0; 3], &[2.0; 3]), Err(ForecastError::Degenerate(_))));
        assert!(r_squared(&[1.0], &[1.0, 2.0]).is_err());
    }
}
