//! Behaviours, correlations, functionals and strategies.
//!
//! All tensors are dense and row-major with party 1 varying slowest.
//! Indices are 0-based in memory; the JSON layer converts to 1-based.

mod behaviour;
mod correlation;
mod functional;
pub mod index;
mod scenario;
mod strategy;

pub use behaviour::{Behaviour, NsReport, NsViolation, CONSTRAINT_TOL, NONNEGATIVITY_TOL};
pub use correlation::{output_sign, Correlation};
pub use functional::{evaluate, evaluate_correlation, BellFunctional, FunctionalKind, NORMALIZATION_TOL};
pub use scenario::Scenario;
pub use strategy::{DeterministicStrategy, Partition};

use crate::error::Result;

pub fn behaviour_from_deterministic(strategy: &DeterministicStrategy) -> Behaviour {
    Behaviour::from_deterministic(strategy)
}

pub fn correlation_from_behaviour(p: &Behaviour) -> Result<Correlation> {
    Correlation::from_behaviour(p)
}

pub fn behaviour_from_correlation(c: &Correlation) -> Behaviour {
    c.to_behaviour()
}

pub fn is_non_signalling(p: &Behaviour) -> NsReport {
    p.non_signalling_report()
}
