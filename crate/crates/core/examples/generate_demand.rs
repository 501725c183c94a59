//! Generates a synthetic demand series and prints it as CSV.
//!
//! cargo run --example generate_demand -- [weeks] [seed]

use vesselplan::domain::{gen_demand, write_demand_csv};

fn main() {
    let mut args = std::env::args().skip(1);
    let weeks = args.next().and_then(|a| a.parse().ok()).unwrap_or(26);
    let seed = args.next().and_then(|a| a.parse().ok()).unwrap_or(1);
    let demand = gen_demand(weeks, seed, 20.0, 0.2).expect("valid generator settings");
    eprintln!("{} weeks, peak {} robots", demand.len(), demand.max());
    print!("{}", write_demand_csv(&demand));
}
