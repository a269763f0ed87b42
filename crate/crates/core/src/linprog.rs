//! Linear programs of the form `max c·x  s.t.  A x = b,  x ≥ 0`.
//!
//! Solving is delegated to `minilp`; every returned point is re-checked
//! against the constraints before it is handed back.

use serde::Serialize;

use crate::error::{Error, Result};

/// Feasibility and objective tolerance for returned points.
pub const LP_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LpStatus {
    Infeasible,
    Unbounded,
}

impl std::fmt::Display for LpStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LpStatus::Infeasible => f.write_str("is infeasible"),
            LpStatus::Unbounded => f.write_str("is unbounded"),
        }
    }
}

/// Sparse equality rows over non-negative variables, maximized.
#[derive(Clone, Debug, Default)]
pub struct LinearProgram {
    objective: Vec<f64>,
    rows: Vec<Vec<(usize, f64)>>,
    rhs: Vec<f64>,
}

impl LinearProgram {
    pub fn new(objective: Vec<f64>) -> Self {
        Self {
            objective,
            rows: Vec::new(),
            rhs: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.rows.len()
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn add_equality(&mut self, row: Vec<(usize, f64)>, rhs: f64) -> Result<()> {
        if let Some((j, _)) = row.iter().find(|(j, _)| *j >= self.num_vars()) {
            return Err(Error::dim(format!(
                "constraint references variable {j} of {}",
                self.num_vars()
            )));
        }
        if !rhs.is_finite() {
            return Err(Error::domain("constraint right-hand side must be finite"));
        }
        self.rows.push(row);
        self.rhs.push(rhs);
        Ok(())
    }

    /// Largest absolute residual of `A x = b` and of `x ≥ 0`.
    pub fn max_violation(&self, point: &[f64]) -> f64 {
        let eq = self
            .rows
            .iter()
            .zip(&self.rhs)
            .map(|(row, b)| (row.iter().map(|(j, a)| a * point[*j]).sum::<f64>() - b).abs());
        let nonneg = point.iter().map(|v| (-v).max(0.0));
        eq.chain(nonneg).fold(0.0, f64::max)
    }

    pub fn objective_at(&self, point: &[f64]) -> f64 {
        self.objective.iter().zip(point).map(|(c, x)| c * x).sum()
    }
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub value: f64,
    pub point: Vec<f64>,
}

pub fn solve_lp(program: &LinearProgram) -> Result<LpSolution> {
    use minilp::{ComparisonOp, OptimizationDirection, Problem};

    let mut problem = Problem::new(OptimizationDirection::Maximize);
    let vars: Vec<_> = program
        .objective
        .iter()
        .map(|&c| problem.add_var(c, (0.0, f64::INFINITY)))
        .collect();
    for (row, &b) in program.rows.iter().zip(&program.rhs) {
        let expr: Vec<_> = row.iter().map(|&(j, a)| (vars[j], a)).collect();
        problem.add_constraint(expr.as_slice(), ComparisonOp::Eq, b);
    }
    let solution = problem.solve().map_err(|e| match e {
        minilp::Error::Infeasible => Error::Lp(LpStatus::Infeasible),
        minilp::Error::Unbounded => Error::Lp(LpStatus::Unbounded),
    })?;

    // Round-off can leave tiny negatives; they are clipped before validation.
    let point: Vec<f64> = vars.iter().map(|&v| solution[v].max(0.0)).collect();
    // minilp can report an unbounded ray as a point at infinity.
    if point.iter().any(|v| !v.is_finite()) || !solution.objective().is_finite() {
        return Err(Error::Lp(LpStatus::Unbounded));
    }
    let violation = program.max_violation(&point);
    if violation > LP_TOL {
        return Err(Error::Internal(format!(
            "LP point violates its constraints by {violation:e}"
        )));
    }
    let value = program.objective_at(&point);
    if (value - solution.objective()).abs() > LP_TOL * (1.0 + value.abs()) {
        return Err(Error::Internal(format!(
            "LP objective {} does not match its point ({value})",
            solution.objective()
        )));
    }
    Ok(LpSolution { value, point })
}
