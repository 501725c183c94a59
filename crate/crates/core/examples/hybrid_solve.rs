//! Full solve: greedy seed, then the annealing-controlled genetic search.
//! The result is checked with the independent validator.
//!
//! cargo run --release --example hybrid_solve -- [seed]

use vesselplan::domain::{gen_demand, parse_config};
use vesselplan::metaheuristic::{solve, AnnealSchedule, SolverConfig};
use vesselplan::model::validate;

fn main() {
    let seed = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(0);
    let (costs, params) = parse_config(include_str!("data/base.cfg")).unwrap();
    let demand = gen_demand(params.horizon, 1, 20.0, 0.2).unwrap();

    let config = SolverConfig { rng_seed: seed, ..Default::default() };
    let sol = solve(&demand, &params, &costs, &config, &AnnealSchedule::default(), true).unwrap();

    let first = sol.trace.points.first().unwrap();
    let last = sol.trace.points.last().unwrap();
    println!("generations        {}", sol.trace.points.len());
    println!("evaluations        {}", sol.trace.evaluations);
    println!("iterations to best {}", sol.trace.iterations_to_best);
    println!("cost               {} -> {}", first.best_cost, last.best_cost);
    println!("reheats            {}", last.reheats);
    println!("final temperature  {:.4}", last.temperature);
    println!("vessels bought     {}", sol.schedule.vessels_purchased());
    println!("operators bought   {}", sol.schedule.operators_purchased());
    let violations = validate(&sol.schedule, &demand, &params, &costs);
    println!("violations         {}", violations.len());
}
