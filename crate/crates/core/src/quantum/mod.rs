//! Finite-dimensional quantum strategies: pure states with local POVMs, and
//! ±1 observables for correlation functionals.

mod bounds;
mod constructions;
pub mod linalg;
pub mod random;
mod seesaw;

use serde::Serialize;

pub use bounds::{check_dimension_bound, check_output_bound, BoundCheck, K_G_LOWER, K_G_UPPER};
pub use constructions::{
    chsh_optimal_observables, chsh_optimal_strategy, constructed_strategy, hat_strategy,
    kv_strategy, projective_from_observable, tensor_strategy,
};
pub use seesaw::{correlation_seesaw, seesaw_run, SeesawRun, MAX_ROUNDS, SEESAW_TOL};

use crate::error::{Error, Result};
use crate::model::{evaluate, evaluate_correlation, BellFunctional, Behaviour, Correlation, Scenario};
use crate::solvers::{label_of, Certificate, Method, ValueClass, ValueReport};
use linalg::{apply_local, hermitian_eigen, max_abs_entry, CMat, CVec, Cx};

pub const STATE_NORM_TOL: f64 = 1e-10;
pub const PSD_TOL: f64 = 1e-9;
pub const COMPLETENESS_TOL: f64 = 1e-9;
pub const HERMITIAN_TOL: f64 = 1e-10;
pub const OPERATOR_NORM_TOL: f64 = 1e-9;

/// Local dimensions above this are refused; dense eigensolvers scale cubically.
pub const MAX_TOTAL_DIM: usize = 4096;

fn check_state(dims: &[usize], state: &CVec) -> Result<()> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::validation("local dimensions must be positive"));
    }
    let total = dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d));
    match total {
        Some(t) if t <= MAX_TOTAL_DIM => {
            if state.len() != t {
                return Err(Error::dim(format!(
                    "state has {} amplitudes, local dimensions {dims:?} need {t}",
                    state.len()
                )));
            }
        }
        _ => {
            return Err(Error::unsupported(format!(
                "total dimension of {dims:?} exceeds {MAX_TOTAL_DIM}"
            )))
        }
    }
    let norm = state.norm();
    if (norm - 1.0).abs() > STATE_NORM_TOL {
        return Err(Error::validation(format!("state norm is {norm}, expected 1")));
    }
    Ok(())
}

fn hermiticity_defect(m: &CMat) -> f64 {
    max_abs_entry(&(m - m.adjoint()))
}

/// A pure state with one POVM per party and input.
#[derive(Clone, Debug, Serialize)]
pub struct QuantumStrategy {
    dims: Vec<usize>,
    state: CVec,
    /// `povms[party][input][output]`.
    povms: Vec<Vec<Vec<CMat>>>,
}

impl QuantumStrategy {
    pub fn new(dims: Vec<usize>, state: CVec, povms: Vec<Vec<Vec<CMat>>>) -> Result<Self> {
        check_state(&dims, &state)?;
        if povms.len() != dims.len() {
            return Err(Error::dim(format!(
                "{} parties have dimensions but {} have measurements",
                dims.len(),
                povms.len()
            )));
        }
        for (i, (party, &d)) in povms.iter().zip(&dims).enumerate() {
            if party.is_empty() {
                return Err(Error::validation(format!("party {i} has no inputs")));
            }
            let k = party[0].len();
            for (x, povm) in party.iter().enumerate() {
                if povm.is_empty() || povm.len() != k {
                    return Err(Error::validation(format!(
                        "party {i} input {x} has {} outcomes, expected {k} (at least one)",
                        povm.len()
                    )));
                }
                let mut sum = CMat::zeros(d, d);
                for (a, e) in povm.iter().enumerate() {
                    if e.shape() != (d, d) {
                        return Err(Error::dim(format!(
                            "party {i} input {x} outcome {a} is {:?}, expected {d}x{d}",
                            e.shape()
                        )));
                    }
                    let defect = hermiticity_defect(e);
                    if defect > HERMITIAN_TOL {
                        return Err(Error::validation(format!(
                            "party {i} input {x} outcome {a} is not self-adjoint (defect {defect:e})"
                        )));
                    }
                    let min = hermitian_eigen(e).0.into_iter().fold(f64::INFINITY, f64::min);
                    if min < -PSD_TOL {
                        return Err(Error::validation(format!(
                            "party {i} input {x} outcome {a} has eigenvalue {min:e}"
                        )));
                    }
                    sum += e;
                }
                let defect = max_abs_entry(&(sum - CMat::identity(d, d)));
                if defect > COMPLETENESS_TOL {
                    return Err(Error::validation(format!(
                        "party {i} input {x}: outcomes sum to identity only within {defect:e}"
                    )));
                }
            }
        }
        Ok(Self { dims, state, povms })
    }

    pub fn parties(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn state(&self) -> &CVec {
        &self.state
    }

    pub fn povms(&self) -> &[Vec<Vec<CMat>>] {
        &self.povms
    }

    pub fn scenario(&self) -> Scenario {
        Scenario::new(
            self.povms.iter().map(Vec::len).collect(),
            self.povms.iter().map(|p| p[0].len()).collect(),
        )
        .expect("validated strategy")
    }
}

/// Born-rule probabilities `⟨ψ| E¹ ⊗ … ⊗ Eᵏ |ψ⟩` in table order.
pub fn behaviour_of(qs: &QuantumStrategy) -> Result<Behaviour> {
    let s = qs.scenario();
    let inputs = s.input_radix();
    let mut table = Vec::with_capacity(s.table_len());
    let mut x = vec![0; qs.parties()];
    for xi in 0..inputs.len() {
        inputs.decode_into(xi, &mut x);
        born_rows(qs, &x, 0, &qs.state, &mut table);
    }
    // Round-off can leave entries a hair below zero.
    for p in &mut table {
        if *p < 0.0 && *p > -PSD_TOL {
            *p = 0.0;
        }
    }
    Behaviour::new(s, table)
}

fn born_rows(qs: &QuantumStrategy, x: &[usize], party: usize, v: &CVec, out: &mut Vec<f64>) {
    for e in &qs.povms[party][x[party]] {
        let w = apply_local(v, &qs.dims, party, e);
        if party + 1 == qs.parties() {
            out.push(qs.state.dotc(&w).re);
        } else {
            born_rows(qs, x, party + 1, &w, out);
        }
    }
}

/// Value of a functional on an explicit strategy, as a quantum lower bound.
pub fn strategy_value(m: &BellFunctional, qs: &QuantumStrategy) -> Result<ValueReport> {
    if m.is_correlation() {
        return Err(Error::unsupported(
            "constructed strategies evaluate full functionals; use the see-saw for correlation functionals",
        ));
    }
    let v = evaluate(m, &behaviour_of(qs)?)?;
    Ok(ValueReport {
        functional: label_of(m),
        class: ValueClass::QuantumLower,
        value: v.abs(),
        method: Method::ConstructedStrategy,
        certificate: Certificate::Strategy {
            strategy: qs.clone(),
        },
    })
}

/// A pure state with one self-adjoint contraction per party and input.
#[derive(Clone, Debug, Serialize)]
pub struct CorrelationObservables {
    dims: Vec<usize>,
    state: CVec,
    /// `observables[party][input]`.
    observables: Vec<Vec<CMat>>,
}

impl CorrelationObservables {
    pub fn new(dims: Vec<usize>, state: CVec, observables: Vec<Vec<CMat>>) -> Result<Self> {
        check_state(&dims, &state)?;
        if observables.len() != dims.len() {
            return Err(Error::dim("one observable family per party is required"));
        }
        for (i, (party, &d)) in observables.iter().zip(&dims).enumerate() {
            if party.is_empty() {
                return Err(Error::validation(format!("party {i} has no inputs")));
            }
            for (x, a) in party.iter().enumerate() {
                if a.shape() != (d, d) {
                    return Err(Error::dim(format!(
                        "party {i} input {x} is {:?}, expected {d}x{d}",
                        a.shape()
                    )));
                }
                let defect = hermiticity_defect(a);
                if defect > HERMITIAN_TOL {
                    return Err(Error::validation(format!(
                        "observable of party {i} input {x} is not self-adjoint (defect {defect:e})"
                    )));
                }
                let norm = hermitian_eigen(a).0.into_iter().map(f64::abs).fold(0.0, f64::max);
                if norm > 1.0 + OPERATOR_NORM_TOL {
                    return Err(Error::validation(format!(
                        "observable of party {i} input {x} has norm {norm}"
                    )));
                }
            }
        }
        Ok(Self {
            dims,
            state,
            observables,
        })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn state(&self) -> &CVec {
        &self.state
    }

    pub fn observables(&self) -> &[Vec<CMat>] {
        &self.observables
    }

    pub fn scenario(&self) -> Scenario {
        let k = self.observables.len();
        Scenario::new(self.observables.iter().map(Vec::len).collect(), vec![2; k])
            .expect("validated observables")
    }

    /// `γ_x = ⟨ψ| A¹_{x_1} ⊗ … ⊗ Aᵏ_{x_k} |ψ⟩`.
    pub fn correlation(&self) -> Result<Correlation> {
        let s = self.scenario();
        let inputs = s.input_radix();
        let mut x = vec![0; s.parties()];
        let table = (0..inputs.len())
            .map(|xi| {
                inputs.decode_into(xi, &mut x);
                let v = apply_all(&self.state, &self.dims, &self.observables, &x, None);
                let g = self.state.dotc(&v).re;
                g.clamp(-1.0, 1.0)
            })
            .collect();
        Correlation::new(s, table)
    }

    pub fn value(&self, m: &BellFunctional) -> Result<f64> {
        evaluate_correlation(m, &self.correlation()?)
    }
}

/// `(⊗_i A^i_{x_i}) ψ`, leaving out party `skip`.
pub(crate) fn apply_all(
    state: &CVec,
    dims: &[usize],
    ops: &[Vec<CMat>],
    x: &[usize],
    skip: Option<usize>,
) -> CVec {
    let mut v = state.clone();
    for (i, &xi) in x.iter().enumerate() {
        if Some(i) != skip {
            v = apply_local(&v, dims, i, &ops[i][xi]);
        }
    }
    v
}

pub(crate) fn cx(re: f64) -> Cx {
    Cx::new(re, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::chsh_game;

    #[test]
    fn chsh_optimum_by_born_rule() {
        let p = behaviour_of(&chsh_optimal_strategy()).unwrap();
        let v = evaluate(&chsh_game(), &p).unwrap();
        assert!((v - (2.0 + 2f64.sqrt()) / 4.0).abs() < 1e-12);
        assert!(p.is_non_signalling());
    }

    #[test]
    fn invalid_povm_names_the_failed_check() {
        let qs = chsh_optimal_strategy();
        let mut povms = qs.povms().to_vec();
        povms[1][0][0] = povms[1][0][0].scale(0.5);
        let err = QuantumStrategy::new(qs.dims().to_vec(), qs.state().clone(), povms).unwrap_err();
        assert!(err.to_string().contains("sum to identity"), "{err}");

        let state = qs.state().scale(1.1);
        let err = QuantumStrategy::new(qs.dims().to_vec(), state, qs.povms().to_vec()).unwrap_err();
        assert!(err.to_string().contains("norm"), "{err}");
    }

    #[test]
    fn product_state_with_deterministic_measurements() {
        let one = CVec::from_vec(vec![cx(0.0), cx(1.0)]);
        let state = linalg::kron_vec(&one, &one);
        let p0 = linalg::real_matrix(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        let p1 = linalg::real_matrix(2, 2, &[0.0, 0.0, 0.0, 1.0]);
        let meas = vec![vec![p0.clone(), p1.clone()]];
        let qs = QuantumStrategy::new(vec![2, 2], state, vec![meas.clone(), meas]).unwrap();
        let p = behaviour_of(&qs).unwrap();
        assert_eq!(p.table(), &[0.0, 0.0, 0.0, 1.0]);
    }
}
