//! Greedy-seeded genetic search whose mutation range follows an annealing
//! temperature, plus the plain GA it is measured against.

mod operators;
mod solver;

use std::fmt::Write as _;

use thiserror::Error;

use crate::domain::{Money, ValidationError};
use crate::greedy::GreedyError;
use crate::model::{Infeasibility, ModelError};

pub use operators::{anneal_step, crossover, fitness, mutate, mutation_range, reheats, roulette_select};
pub use solver::{solve, solve_plain_ga, Solution};

/// Reheating needs `ln(T - 1)`, so it is never applied unless `T > 1 + REHEAT_EPS`.
pub const REHEAT_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnealSchedule {
    pub initial_temp: f64,
    /// Geometric cooling factor `s`, applied once per generation.
    pub cooling_coeff: f64,
    /// The search stops once the temperature falls below this.
    pub termination_temp: f64,
}

impl Default for AnnealSchedule {
    fn default() -> Self {
        AnnealSchedule { initial_temp: 100.0, cooling_coeff: 0.98, termination_temp: 0.01 }
    }
}

impl AnnealSchedule {
    pub fn validate(&self) -> Result<(), ValidationError> {
        if !(self.initial_temp.is_finite() && self.initial_temp > 0.0) {
            return Err(ValidationError::new("initial_temp", "must be a positive number"));
        }
        if !(self.cooling_coeff > 0.0 && self.cooling_coeff < 1.0) {
            return Err(ValidationError::new("cooling_coeff", "must lie strictly between 0 and 1"));
        }
        if !(self.termination_temp.is_finite() && self.termination_temp > 0.0) {
            return Err(ValidationError::new("termination_temp", "must be a positive number"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub population_size: usize,
    pub crossover_rate: f64,
    pub base_mutation_rate: f64,
    /// Mutation step bound per unit of temperature.
    pub mutation_magnitude_per_temp: f64,
    pub rng_seed: u64,
    /// Cap on fitness evaluations.
    pub max_iterations: u64,
    /// The best plan always survives. Kept as a field for visibility; must be true.
    pub elitism: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            population_size: 60,
            crossover_rate: 0.8,
            base_mutation_rate: 0.1,
            mutation_magnitude_per_temp: 0.05,
            rng_seed: 0,
            max_iterations: 200_000,
            elitism: true,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), ValidationError> {
        if self.population_size < 2 {
            return Err(ValidationError::new("population_size", "must be at least 2"));
        }
        for (field, v) in [("crossover_rate", self.crossover_rate), ("base_mutation_rate", self.base_mutation_rate)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(ValidationError::new(field, "must lie in [0, 1]"));
            }
        }
        if !(self.mutation_magnitude_per_temp.is_finite() && self.mutation_magnitude_per_temp >= 0.0) {
            return Err(ValidationError::new("mutation_magnitude_per_temp", "must be a non-negative number"));
        }
        if self.max_iterations < self.population_size as u64 {
            return Err(ValidationError::new("max_iterations", "must cover at least one population"));
        }
        if !self.elitism {
            return Err(ValidationError::new("elitism", "cannot be disabled"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    /// Fitness evaluations so far.
    pub iteration: u64,
    pub temperature: f64,
    pub best_cost: Money,
    pub mean_cost: Money,
    pub reheats: u32,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConvergenceTrace {
    /// One point for the initial population, then one per generation.
    pub points: Vec<TracePoint>,
    /// Evaluation index (1-based) at which the final best was first seen.
    pub iterations_to_best: u64,
    pub evaluations: u64,
}

impl ConvergenceTrace {
    pub fn best_cost(&self) -> Option<Money> {
        self.points.last().map(|p| p.best_cost)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("iteration,temperature,best_cost,mean_cost,reheats\n");
        for p in &self.points {
            let _ = writeln!(s, "{},{:.6},{},{},{}", p.iteration, p.temperature, p.best_cost, p.mean_cost, p.reheats);
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("UNSEEDABLE: {0}")]
    Unseedable(Infeasibility),
    #[error("UNREPAIRABLE: {0}")]
    Unrepairable(Infeasibility),
    #[error(transparent)]
    Model(ModelError),
    #[error("invalid solver setting: {0}")]
    InvalidConfig(#[from] ValidationError),
}

impl From<GreedyError> for SolveError {
    fn from(e: GreedyError) -> Self {
        match e {
            GreedyError::Unseedable { cause } => SolveError::Unseedable(cause),
            GreedyError::Model(m) => m.into(),
        }
    }
}

impl From<ModelError> for SolveError {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::Unrepairable { cause } => SolveError::Unrepairable(cause),
            other => SolveError::Model(other),
        }
    }
}
