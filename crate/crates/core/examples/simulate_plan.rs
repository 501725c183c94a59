//! Runs a hand-written purchase plan through the weekly simulator, shows
//! what happens when it falls short, and lets `repair` fix it.

use vesselplan::domain::{AttritionRate, CostParams, DemandSeries, FleetParams, Money, ProcurementPlan};
use vesselplan::model::{repair, simulate, ModelError};

fn main() {
    let m = Money::from_units;
    let costs = CostParams::new(m(100), m(50), m(20), m(10), m(15)).unwrap();
    let params = FleetParams::new(4, "0.2".parse::<AttritionRate>().unwrap(), 4, 16, 6).unwrap();
    let demand = DemandSeries::new(vec![2, 3, 3, 4, 2, 3]);

    // buy nothing and hope the starting fleet copes
    let plan = ProcurementPlan::zeros(6);
    match simulate(&plan, &demand, &params, &costs) {
        Err(ModelError::Infeasible(why)) => println!("empty plan fails: week {}, {:?}", why.week, why.kind),
        other => println!("unexpected: {other:?}"),
    }

    let fixed = repair(&plan, &demand, &params, &costs).unwrap();
    println!("repaired vessel buys   {:?}", fixed.vessel_buys);
    println!("repaired operator buys {:?}", fixed.operator_buys);
    let schedule = simulate(&fixed, &demand, &params, &costs).unwrap();
    print!("{}", schedule.to_csv());
}
