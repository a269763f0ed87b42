use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::linalg::{hermitian_eigen, hermitian_sign, identity, kron, reduced_cross, CMat, CVec};
use super::random::random_observables;
use super::{apply_all, cx, CorrelationObservables};
use crate::error::{Error, Result};
use crate::model::BellFunctional;
use crate::solvers::{label_of, require_correlation, Certificate, Method, ValueClass, ValueReport};

pub const SEESAW_TOL: f64 = 1e-9;
pub const MAX_ROUNDS: usize = 500;
pub const MAX_SITE_DIM: usize = 16;
/// The state step diagonalizes the full Bell operator.
pub const MAX_SEESAW_DIM: usize = 512;

/// One see-saw trajectory from a single seed.
#[derive(Clone, Debug)]
pub struct SeesawRun {
    pub seed: u64,
    pub value: f64,
    pub rounds: usize,
    /// Objective after the initialization and after every single update.
    pub trace: Vec<f64>,
    pub observables: CorrelationObservables,
}

struct Problem<'a> {
    m: &'a BellFunctional,
    dims: &'a [usize],
}

impl Problem<'_> {
    fn terms(&self) -> impl Iterator<Item = (Vec<usize>, f64)> + '_ {
        let inputs = self.m.scenario().input_radix();
        self.m
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0.0)
            .map(move |(xi, &c)| (inputs.decode(xi), c))
    }

    fn expectation(&self, state: &CVec, ops: &[Vec<CMat>]) -> f64 {
        self.terms()
            .map(|(x, c)| c * state.dotc(&apply_all(state, self.dims, ops, &x, None)).re)
            .sum()
    }

    fn bell_operator(&self, ops: &[Vec<CMat>]) -> CMat {
        let total: usize = self.dims.iter().product();
        let mut b = CMat::zeros(total, total);
        for (x, c) in self.terms() {
            let term = x
                .iter()
                .enumerate()
                .fold(identity(1), |acc, (i, &xi)| kron(&acc, &ops[i][xi]));
            b += term.scale(c);
        }
        b
    }

    /// Top eigenvector of the Bell operator.
    fn update_state(&self, ops: &[Vec<CMat>], state: &mut CVec) {
        let (vals, vecs) = hermitian_eigen(&self.bell_operator(ops));
        let top = (0..vals.len()).fold(0, |best, i| if vals[i] > vals[best] { i } else { best });
        let v = vecs.column(top).into_owned();
        *state = v.unscale(v.norm());
    }

    /// Best observables of `party` with the state and the other parties fixed.
    fn update_party(&self, party: usize, state: &CVec, ops: &mut [Vec<CMat>]) {
        let n = ops[party].len();
        let mut phi = vec![CVec::zeros(state.len()); n];
        for (x, c) in self.terms() {
            let v = apply_all(state, self.dims, ops, &x, Some(party));
            phi[x[party]].axpy(cx(c), &v, cx(1.0));
        }
        for (xp, f) in phi.iter().enumerate() {
            let r = reduced_cross(f, state, self.dims, party);
            ops[party][xp] = hermitian_sign(&r);
        }
    }
}

/// See-saw over one party's observables at a time, then the state.
pub fn seesaw_run(m: &BellFunctional, dims: &[usize], seed: u64) -> Result<SeesawRun> {
    check_preconditions(m, dims)?;
    let problem = Problem { m, dims };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let init = random_observables(dims, m.scenario().inputs(), &mut rng)?;
    let mut state = init.state().clone();
    let mut ops = init.observables().to_vec();

    let mut value = problem.expectation(&state, &ops);
    let mut trace = vec![value];
    let mut rounds = 0;
    while rounds < MAX_ROUNDS {
        rounds += 1;
        let start = value;
        problem.update_state(&ops, &mut state);
        trace.push(problem.expectation(&state, &ops));
        for party in 0..dims.len() {
            problem.update_party(party, &state, &mut ops);
            trace.push(problem.expectation(&state, &ops));
        }
        value = *trace.last().expect("non-empty trace");
        if value - start < SEESAW_TOL {
            break;
        }
    }
    let observables = CorrelationObservables::new(dims.to_vec(), state, ops)?;
    let value = observables.value(m)?.abs();
    Ok(SeesawRun {
        seed,
        value,
        rounds,
        trace,
        observables,
    })
}

fn check_preconditions(m: &BellFunctional, dims: &[usize]) -> Result<()> {
    require_correlation(m, "correlation_seesaw")?;
    if dims.len() != m.parties() {
        return Err(Error::dim(format!(
            "{} local dimensions given for {} parties",
            dims.len(),
            m.parties()
        )));
    }
    if dims.iter().any(|&d| d == 0 || d > MAX_SITE_DIM) {
        return Err(Error::domain(format!(
            "local dimensions must lie in 1..={MAX_SITE_DIM}, got {dims:?}"
        )));
    }
    let total = dims.iter().try_fold(1usize, |a, &d| a.checked_mul(d));
    if total.is_none_or(|t| t > MAX_SEESAW_DIM) {
        return Err(Error::unsupported(format!(
            "see-saw total dimension is capped at {MAX_SEESAW_DIM}, got {dims:?}"
        )));
    }
    Ok(())
}

/// Best see-saw value over seeds `0..seeds`, run in parallel.
pub fn correlation_seesaw(m: &BellFunctional, dims: &[usize], seeds: u64) -> Result<ValueReport> {
    check_preconditions(m, dims)?;
    if seeds == 0 {
        return Err(Error::domain("at least one see-saw seed is needed"));
    }
    let runs: Vec<SeesawRun> = (0..seeds)
        .into_par_iter()
        .map(|seed| seesaw_run(m, dims, seed))
        .collect::<Result<_>>()?;
    let best = runs
        .into_iter()
        .reduce(|a, b| if b.value > a.value { b } else { a })
        .expect("at least one seed");
    Ok(ValueReport {
        functional: label_of(m),
        class: ValueClass::QuantumLower,
        value: best.value,
        method: Method::SeeSaw,
        certificate: Certificate::Observables {
            observables: best.observables,
        },
    })
}
