//! Procurement scheduling for a fleet of robotic vessels and their operators.
pub mod domain;
pub mod model;
pub mod greedy;
pub mod metaheuristic;
pub mod forecast;
pub mod cli;
