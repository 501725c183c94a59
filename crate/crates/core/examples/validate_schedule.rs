//! Round-trips a solved schedule through CSV, then tampers with it and
//! shows what the validator reports.

use vesselplan::domain::{gen_demand, parse_config};
use vesselplan::greedy::greedy_plan;
use vesselplan::model::{simulate, validate, Schedule};

fn main() {
    let (costs, params) = parse_config(include_str!("data/base.cfg")).unwrap();
    let demand = gen_demand(params.horizon, 1, 20.0, 0.2).unwrap();
    let (plan, _) = greedy_plan(&demand, &params, &costs).unwrap();
    let csv = simulate(&plan, &demand, &params, &costs).unwrap().to_csv();

    let parsed = Schedule::from_csv(&csv, &params).unwrap();
    println!("clean schedule: {} violations", validate(&parsed, &demand, &params, &costs).len());

    let mut tampered = parsed.clone();
    tampered.records[3].robots_deployed += 1;
    tampered.records[9].operators_maint -= 2;
    for v in validate(&tampered, &demand, &params, &costs) {
        println!("{v}");
    }
}
