use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::domain::{CostParams, DemandSeries, FleetParams, Money, ProcurementPlan};
use crate::greedy::{greedy_plan, seed_plan};
use crate::model::{repair, simulate, simulate_cost, ModelError, Schedule};

use super::operators::{anneal_step, crossover, mutate_with_range, mutation_range, reheats, roulette_select};
use super::{AnnealSchedule, ConvergenceTrace, SolveError, SolverConfig, TracePoint};

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub plan: ProcurementPlan,
    pub schedule: Schedule,
    pub trace: ConvergenceTrace,
}

struct Problem<'a> {
    demand: &'a DemandSeries,
    params: &'a FleetParams,
    costs: &'a CostParams,
}

impl Problem<'_> {
    /// Repairs and costs `plan`. `None` when it cannot be repaired.
    fn evaluate(&self, plan: &ProcurementPlan) -> Result<Option<(ProcurementPlan, Money)>, ModelError> {
        match repair(plan, self.demand, self.params, self.costs) {
            Ok(fixed) => {
                let cost = simulate_cost(&fixed, self.demand, self.params, self.costs)?;
                Ok(Some((fixed, cost)))
            }
            Err(ModelError::Unrepairable { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    }
}

enum Mode {
    Annealed(AnnealSchedule),
    /// Constant mutation range, no temperature.
    Plain { range: u32, temp: f64 },
}

/// Hybrid solver: the population starts from the greedy plan and jittered
/// copies of it (or from random repaired plans when `use_greedy_seed` is
/// false), then evolves by roulette selection, week-wise crossover and
/// temperature-scaled mutation. Offspring are stored repaired. The
/// temperature reheats whenever the best cost improves and cools by `s`
/// every generation; the run ends when it drops below the termination
/// temperature or the evaluation cap is reached.
pub fn solve(
    demand: &DemandSeries,
    params: &FleetParams,
    costs: &CostParams,
    config: &SolverConfig,
    schedule: &AnnealSchedule,
    use_greedy_seed: bool,
) -> Result<Solution, SolveError> {
    config.validate()?;
    schedule.validate()?;
    let problem = Problem { demand, params, costs };
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let range = mutation_range(schedule.initial_temp, config);
    let initial = if use_greedy_seed {
        let (greedy, _) = greedy_plan(demand, params, costs)?;
        let mut plans = vec![greedy.clone()];
        for _ in 1..config.population_size {
            plans.push(mutate_with_range(&greedy, range, config.base_mutation_rate, &mut rng));
        }
        evaluate_initial(&problem, plans, &greedy)?
    } else {
        random_population(&problem, config, &mut rng)?
    };
    evolve(&problem, config, Mode::Annealed(*schedule), initial, &mut rng)
}

/// Baseline GA: random initial plans, a constant mutation range taken at
/// the schedule's initial temperature, no reheating, and a fixed budget of
/// `max_iterations` evaluations.
pub fn solve_plain_ga(
    demand: &DemandSeries,
    params: &FleetParams,
    costs: &CostParams,
    config: &SolverConfig,
) -> Result<Solution, SolveError> {
    config.validate()?;
    let temp = AnnealSchedule::default().initial_temp;
    let problem = Problem { demand, params, costs };
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let initial = random_population(&problem, config, &mut rng)?;
    let mode = Mode::Plain { range: mutation_range(temp, config), temp };
    evolve(&problem, config, mode, initial, &mut rng)
}

/// Uniform random plans with vessel purchases up to the peak demand and
/// operator purchases up to four times that. A plan whose week-1 training
/// cannot be staffed has its week-1 operator purchase dropped; if it still
/// cannot be repaired the just-in-time plan stands in.
fn random_population(
    problem: &Problem<'_>,
    config: &SolverConfig,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<(ProcurementPlan, Money)>, SolveError> {
    let fallback = seed_plan(problem.demand, problem.params, problem.costs)?;
    let horizon = problem.demand.len();
    let top = problem.demand.max();
    let plans: Vec<ProcurementPlan> = (0..config.population_size)
        .map(|_| {
            let mut p = ProcurementPlan::zeros(horizon);
            for i in 0..horizon {
                p.vessel_buys[i] = rng.random_range(0..=top);
                p.operator_buys[i] = rng.random_range(0..=4 * top);
            }
            p
        })
        .collect();
    let evaluated: Vec<_> = plans
        .par_iter()
        .map(|p| -> Result<_, ModelError> {
            if let Some(hit) = problem.evaluate(p)? {
                return Ok(Some(hit));
            }
            let mut trimmed = p.clone();
            if horizon > 0 {
                trimmed.operator_buys[0] = 0;
            }
            problem.evaluate(&trimmed)
        })
        .collect::<Result<_, _>>()?;
    let fallback_cost = simulate_cost(&fallback, problem.demand, problem.params, problem.costs)?;
    Ok(evaluated.into_iter().map(|e| e.unwrap_or_else(|| (fallback.clone(), fallback_cost))).collect())
}

fn evaluate_initial(
    problem: &Problem<'_>,
    plans: Vec<ProcurementPlan>,
    fallback: &ProcurementPlan,
) -> Result<Vec<(ProcurementPlan, Money)>, SolveError> {
    let fallback_cost = simulate_cost(fallback, problem.demand, problem.params, problem.costs)?;
    let evaluated: Vec<_> = plans.par_iter().map(|p| problem.evaluate(p)).collect::<Result<_, _>>()?;
    Ok(evaluated.into_iter().map(|e| e.unwrap_or_else(|| (fallback.clone(), fallback_cost))).collect())
}

fn mean(costs: &[Money]) -> Money {
    let sum: i128 = costs.iter().map(|c| c.cents() as i128).sum();
    let n = costs.len() as i128;
    Money::from_cents(((2 * sum + n) / (2 * n)) as i64)
}

/// First index holding the minimum cost.
fn argmin(costs: &[Money]) -> usize {
    let mut best = 0;
    for (i, c) in costs.iter().enumerate() {
        if *c < costs[best] {
            best = i;
        }
    }
    best
}

fn evolve(
    problem: &Problem<'_>,
    config: &SolverConfig,
    mode: Mode,
    initial: Vec<(ProcurementPlan, Money)>,
    rng: &mut ChaCha8Rng,
) -> Result<Solution, SolveError> {
    let n = initial.len();
    let (mut pop, mut fits): (Vec<_>, Vec<_>) = initial.into_iter().unzip();
    let mut evals = n as u64;
    let first = argmin(&fits);
    let mut best = (pop[first].clone(), fits[first]);
    let mut trace = ConvergenceTrace { iterations_to_best: first as u64 + 1, ..Default::default() };
    let mut temp = match mode {
        Mode::Annealed(s) => s.initial_temp,
        Mode::Plain { temp, .. } => temp,
    };
    let mut reheat_count = 0u32;
    trace.points.push(TracePoint { iteration: evals, temperature: temp, best_cost: best.1, mean_cost: mean(&fits), reheats: 0 });

    loop {
        if let Mode::Annealed(s) = mode {
            if temp < s.termination_temp {
                break;
            }
        }
        let budget = ((n - 1) as u64).min(config.max_iterations.saturating_sub(evals)) as usize;
        if budget == 0 {
            break;
        }
        let range = match mode {
            Mode::Annealed(_) => mutation_range(temp, config),
            Mode::Plain { range, .. } => range,
        };

        // variation draws come from one stream in a fixed order
        let mut children: Vec<(ProcurementPlan, usize)> = Vec::with_capacity(budget);
        while children.len() < budget {
            let (a, b) = roulette_select(&fits, rng);
            let (c1, c2) = crossover(&pop[a], &pop[b], rng, config.crossover_rate);
            children.push((mutate_with_range(&c1, range, config.base_mutation_rate, rng), a));
            if children.len() < budget {
                children.push((mutate_with_range(&c2, range, config.base_mutation_rate, rng), b));
            }
        }

        let scored: Vec<(ProcurementPlan, Money)> = children
            .par_iter()
            .map(|(child, parent)| {
                Ok(problem.evaluate(child)?.unwrap_or_else(|| (pop[*parent].clone(), fits[*parent])))
            })
            .collect::<Result<_, ModelError>>()?;

        let child_costs: Vec<Money> = scored.iter().map(|s| s.1).collect();
        let j = argmin(&child_costs);
        let improved = child_costs[j] < best.1;
        if improved {
            best = scored[j].clone();
            trace.iterations_to_best = evals + j as u64 + 1;
        }
        evals += budget as u64;

        pop = std::iter::once(best.0.clone()).chain(scored.iter().map(|s| s.0.clone())).collect();
        fits = std::iter::once(best.1).chain(child_costs).collect();

        if let Mode::Annealed(s) = mode {
            if reheats(temp, improved) {
                reheat_count += 1;
            }
            temp = anneal_step(temp, improved, &s);
        }
        trace.points.push(TracePoint {
            iteration: evals,
            temperature: temp,
            best_cost: best.1,
            mean_cost: mean(&fits),
            reheats: reheat_count,
        });
    }

    trace.evaluations = evals;
    let schedule = simulate(&best.0, problem.demand, problem.params, problem.costs)?;
    Ok(Solution { plan: best.0, schedule, trace })
}
