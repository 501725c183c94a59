//! Solves the same demand under the three presets: no attrition, 20%
//! attrition, and 10% attrition with a larger instruction capacity.

use vesselplan::domain::{gen_demand, parse_config, Scenario};
use vesselplan::metaheuristic::{solve, AnnealSchedule, SolverConfig};

fn main() {
    let (costs, base) = parse_config(include_str!("data/base.cfg")).unwrap();
    let demand = gen_demand(base.horizon, 1, 20.0, 0.2).unwrap();
    let config = SolverConfig::default();
    for scenario in Scenario::ALL {
        let params = scenario.apply(&base);
        let sol = solve(&demand, &params, &costs, &config, &AnnealSchedule::default(), true).unwrap();
        let lost: i64 = sol.schedule.records.iter().map(|r| r.vessels_destroyed + r.operators_destroyed).sum();
        println!(
            "{:<7} K={:<4} G={:<2} cost {:>9}  bought {:>3} vessels {:>4} operators, {lost} units lost",
            scenario.name(),
            params.attrition_rate.to_string(),
            params.instruct_capacity,
            sol.schedule.total_cost,
            sol.schedule.vessels_purchased(),
            sol.schedule.operators_purchased(),
        );
    }
}
