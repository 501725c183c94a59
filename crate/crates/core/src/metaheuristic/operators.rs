use rand::Rng;

use crate::domain::{round_half_up, CostParams, DemandSeries, FleetParams, Money, ProcurementPlan};
use crate::model::{repair, simulate_cost, ModelError};

use super::{AnnealSchedule, SolverConfig, REHEAT_EPS};

/// Cost of the repaired plan. Lower is better.
pub fn fitness(
    plan: &ProcurementPlan,
    demand: &DemandSeries,
    params: &FleetParams,
    costs: &CostParams,
) -> Result<Money, ModelError> {
    let fixed = repair(plan, demand, params, costs)?;
    simulate_cost(&fixed, demand, params, costs)
}

/// Picks two parent indices by roulette wheel.
///
/// Each individual's weight is `max - f + 1` in whole currency units, so the
/// worst plan keeps a small chance and cheaper plans are favoured linearly.
/// Weights are kept in cents so the wheel is exact.
pub fn roulette_select<R: Rng + ?Sized>(fitnesses: &[Money], rng: &mut R) -> (usize, usize) {
    assert!(!fitnesses.is_empty(), "roulette over an empty population");
    let max = fitnesses.iter().copied().max().unwrap_or(Money::ZERO);
    let unit = Money::from_units(1).cents();
    let weights: Vec<u128> = fitnesses.iter().map(|f| ((max - *f).cents() + unit) as u128).collect();
    let total: u128 = weights.iter().sum();
    let mut spin = || {
        let mut ball = rng.random_range(0..total);
        for (i, w) in weights.iter().enumerate() {
            if ball < *w {
                return i;
            }
            ball -= w;
        }
        weights.len() - 1
    };
    let a = spin();
    let b = spin();
    (a, b)
}

/// Uniform crossover on weeks: each week's (vessel, operator) pair is swapped
/// between the children with probability `rate`.
pub fn crossover<R: Rng + ?Sized>(
    p1: &ProcurementPlan,
    p2: &ProcurementPlan,
    rng: &mut R,
    rate: f64,
) -> (ProcurementPlan, ProcurementPlan) {
    assert_eq!(p1.horizon(), p2.horizon(), "crossover of plans with different horizons");
    let mut c1 = p1.clone();
    let mut c2 = p2.clone();
    for i in 0..p1.horizon() {
        if rng.random::<f64>() < rate {
            std::mem::swap(&mut c1.vessel_buys[i], &mut c2.vessel_buys[i]);
            std::mem::swap(&mut c1.operator_buys[i], &mut c2.operator_buys[i]);
        }
    }
    (c1, c2)
}

/// Mutation step bound at temperature `temp`: `max(1, round(magnitude * T))`.
pub fn mutation_range(temp: f64, config: &SolverConfig) -> u32 {
    round_half_up(config.mutation_magnitude_per_temp * temp).max(1) as u32
}

/// Perturbs each gene with probability `base_mutation_rate` by a uniform
/// integer in `[-m, m]`, clamping at zero. Genes are visited week by week,
/// vessel before operator.
pub fn mutate<R: Rng + ?Sized>(plan: &ProcurementPlan, temp: f64, config: &SolverConfig, rng: &mut R) -> ProcurementPlan {
    mutate_with_range(plan, mutation_range(temp, config), config.base_mutation_rate, rng)
}

pub(crate) fn mutate_with_range<R: Rng + ?Sized>(
    plan: &ProcurementPlan,
    m: u32,
    rate: f64,
    rng: &mut R,
) -> ProcurementPlan {
    let mut out = plan.clone();
    let m = m as i64;
    for i in 0..out.horizon() {
        for gene in [&mut out.vessel_buys[i], &mut out.operator_buys[i]] {
            if rng.random::<f64>() < rate {
                let delta = rng.random_range(-m..=m);
                *gene = (*gene as i64 + delta).clamp(0, u32::MAX as i64) as u32;
            }
        }
    }
    out
}

/// Reheats on improvement, then cools geometrically.
pub fn anneal_step(temp: f64, improved: bool, schedule: &AnnealSchedule) -> f64 {
    let t = if reheats(temp, improved) { temp + 0.5 * (temp - 1.0).ln() } else { temp };
    t * schedule.cooling_coeff
}

/// Whether [`anneal_step`] applies the reheat at `temp`. The warming term
/// `0.5 ln(T - 1)` needs `T > 1`, and just above 1 it is so negative that it
/// would drive the temperature below zero, so it is skipped there too.
pub fn reheats(temp: f64, improved: bool) -> bool {
    improved && temp > 1.0 + REHEAT_EPS && temp + 0.5 * (temp - 1.0).ln() > 0.0
}
