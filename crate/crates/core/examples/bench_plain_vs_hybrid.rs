//! Hybrid solver against the plain genetic algorithm on a few seeds:
//! evaluations needed to reach the final best, and the best cost.
//!
//! cargo run --release --example bench_plain_vs_hybrid -- [seeds]

use vesselplan::domain::{gen_demand, parse_config};
use vesselplan::metaheuristic::{solve, solve_plain_ga, AnnealSchedule, SolverConfig};

fn main() {
    let seeds: u64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(3);
    let (costs, params) = parse_config(include_str!("data/base.cfg")).unwrap();
    let demand = gen_demand(params.horizon, 1, 20.0, 0.2).unwrap();
    println!("seed  hybrid cost @ iter     plain cost @ iter");
    for seed in 0..seeds {
        let config = SolverConfig { rng_seed: seed, ..Default::default() };
        let h = solve(&demand, &params, &costs, &config, &AnnealSchedule::default(), true).unwrap();
        let p = solve_plain_ga(&demand, &params, &costs, &config).unwrap();
        println!(
            "{seed:>4}  {:>10} @ {:<8}  {:>10} @ {}",
            h.schedule.total_cost, h.trace.iterations_to_best, p.schedule.total_cost, p.trace.iterations_to_best
        );
    }
}
