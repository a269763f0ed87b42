//! Random states, measurements and observables for property tests and seeds.

use rand::Rng;
use rand_distr::StandardNormal;

use super::linalg::{hermitian_part, hermitian_sign, spectral_map, CMat, CVec, Cx};
use super::{CorrelationObservables, QuantumStrategy};
use crate::error::Result;

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Cx {
    Cx::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn random_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMat {
    CMat::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Haar-distributed pure state.
pub fn random_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CVec {
    let v = CVec::from_fn(dim, |_, _| gaussian(rng));
    let n = v.norm();
    v.unscale(n)
}

pub fn random_hermitian<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMat {
    hermitian_part(&random_matrix(d, d, rng))
}

/// ±1 observable: the sign of a random Hermitian matrix.
pub fn random_sign_observable<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMat {
    hermitian_sign(&random_hermitian(d, rng))
}

/// `E_a = S^{-1/2} G_a S^{-1/2}` with `G_a = B_a B_a†` and `S = Σ G_a`.
pub fn random_povm<R: Rng + ?Sized>(d: usize, k: usize, rng: &mut R) -> Vec<CMat> {
    let g: Vec<CMat> = (0..k)
        .map(|_| {
            let b = random_matrix(d, d, rng);
            &b * b.adjoint()
        })
        .collect();
    let s = g.iter().fold(CMat::zeros(d, d), |acc, e| acc + e);
    let inv_sqrt = spectral_map(&s, |v| 1.0 / v.max(1e-300).sqrt());
    g.iter()
        .map(|e| hermitian_part(&(&inv_sqrt * e * &inv_sqrt)))
        .collect()
}

pub fn random_strategy<R: Rng + ?Sized>(
    dims: &[usize],
    inputs: &[usize],
    outputs: &[usize],
    rng: &mut R,
) -> Result<QuantumStrategy> {
    let total = dims.iter().product();
    let state = random_state(total, rng);
    let povms = dims
        .iter()
        .zip(inputs.iter().zip(outputs))
        .map(|(&d, (&n, &k))| (0..n).map(|_| random_povm(d, k, rng)).collect())
        .collect();
    QuantumStrategy::new(dims.to_vec(), state, povms)
}

pub fn random_observables<R: Rng + ?Sized>(
    dims: &[usize],
    inputs: &[usize],
    rng: &mut R,
) -> Result<CorrelationObservables> {
    let total = dims.iter().product();
    let state = random_state(total, rng);
    let ops = dims
        .iter()
        .zip(inputs)
        .map(|(&d, &n)| (0..n).map(|_| random_sign_observable(d, rng)).collect())
        .collect();
    CorrelationObservables::new(dims.to_vec(), state, ops)
}
