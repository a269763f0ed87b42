use serde::Serialize;

use super::{behaviour_of, QuantumStrategy};
use crate::error::{Error, Result};
use crate::model::{evaluate, BellFunctional};
use crate::solvers::{bilocal_value_general, SolverOptions};

/// Known bracket on the real Grothendieck constant.
pub const K_G_LOWER: f64 = 1.676;
pub const K_G_UPPER: f64 = 1.7823;

const BOUND_SLACK: f64 = 1e-9;

/// `lhs ≤ rhs + 1e-9` with both sides kept for reporting.
#[derive(Clone, Debug, Serialize)]
pub struct BoundCheck {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub factor: usize,
    pub bilocal: f64,
    pub holds: bool,
}

fn check(
    name: &'static str,
    qs: &QuantumStrategy,
    g: &BellFunctional,
    factor: usize,
    opts: &SolverOptions,
) -> Result<BoundCheck> {
    if g.parties() != 3 || qs.parties() != 3 {
        return Err(Error::unsupported(format!("{name} is stated for tripartite games")));
    }
    let lhs = evaluate(g, &behaviour_of(qs)?)?;
    let bilocal = bilocal_value_general(g, opts)?.value;
    let rhs = factor as f64 * bilocal;
    Ok(BoundCheck {
        name,
        lhs,
        rhs,
        factor,
        bilocal,
        holds: lhs <= rhs + BOUND_SLACK,
    })
}

/// Quantum value at local dimension `d` is at most `d` times the bilocal value.
pub fn check_dimension_bound(
    qs: &QuantumStrategy,
    g: &BellFunctional,
    opts: &SolverOptions,
) -> Result<BoundCheck> {
    let d = qs.dims().iter().copied().min().unwrap_or(1);
    check("dimension-bound", qs, g, d, opts)
}

/// Quantum value with `K` outputs per party is at most `K` times the bilocal value.
pub fn check_output_bound(
    qs: &QuantumStrategy,
    g: &BellFunctional,
    opts: &SolverOptions,
) -> Result<BoundCheck> {
    let k = g.scenario().outputs().iter().copied().min().unwrap_or(1);
    check("output-bound", qs, g, k, opts)
}
