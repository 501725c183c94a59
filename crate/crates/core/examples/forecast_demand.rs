//! Fits ARIMA(3,1,4) to two years of weekly demand and forecasts the next
//! eight weeks, with residual diagnostics.

use vesselplan::domain::gen_demand;
use vesselplan::forecast::{
    acf, astrom_predict, forecast_counts, predict_recursive, rls_fit, whiteness_check, ArimaOrder,
    DEFAULT_FORGETTING_FACTOR,
};

fn main() {
    let demand = gen_demand(104, 42, 30.0, 0.2).unwrap();
    let y: Vec<f64> = demand.values().iter().map(|&v| v as f64).collect();
    let order = ArimaOrder::new(3, 1, 4).unwrap();
    let (model, resid) = rls_fit(&y, order, DEFAULT_FORGETTING_FACTOR).unwrap();

    println!("AR {:.3?}", model.ar_coeffs);
    println!("MA {:.3?}", model.ma_coeffs);
    println!("noise variance {:.3}", model.noise_variance);

    let weeks = forecast_counts(&model, &y, 8).unwrap();
    println!("weeks 105-112: {:?}", weeks.values());

    // the filter form and the conditional-expectation form agree
    let a = astrom_predict(&model, &y, 3).unwrap();
    let b = predict_recursive(&model, &y, 3).unwrap();
    println!("3-step forecast {a:.6} (recursion {b:.6})");

    let white = whiteness_check(&resid, 20, order.n_params()).unwrap();
    println!("Ljung-Box Q = {:.2} on {} df, critical {:.2}, white: {}", white.statistic, white.df, white.critical, white.pass);
    let r = acf(&resid, 5).unwrap();
    println!("residual acf 1..5 {:.3?}", &r[1..]);
}
