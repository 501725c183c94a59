//! The greedy phase on its own: start from a generous feasible plan and
//! keep removing the single purchase that saves the most.

use vesselplan::domain::{gen_demand, parse_config};
use vesselplan::greedy::{greedy_plan, seed_plan};
use vesselplan::model::simulate_cost;

fn main() {
    let (costs, params) = parse_config(include_str!("data/base.cfg")).unwrap();
    let demand = gen_demand(params.horizon, 1, 20.0, 0.2).unwrap();

    let seed = seed_plan(&demand, &params, &costs).unwrap();
    println!("seed plan cost    {}", simulate_cost(&seed, &demand, &params, &costs).unwrap());

    let (plan, trace) = greedy_plan(&demand, &params, &costs).unwrap();
    println!("greedy plan cost  {} after {} passes", trace.final_cost, trace.passes);
    println!("vessel buys   {:?}", plan.vessel_buys);
    println!("operator buys {:?}", plan.operator_buys);
    for r in trace.reductions.iter().take(5) {
        println!("  pass {}: -{} {} in week {} -> {}", r.pass, r.amount, r.kind, r.week, r.cost_after);
    }
}
