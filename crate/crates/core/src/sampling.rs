//! Random instances for property checks and the verification suites.

use rand::Rng;

use crate::error::Result;
use crate::model::{BellFunctional, Correlation, Scenario};

/// Uniform entries rescaled so that `Σ_x max_a G = 1`.
pub fn random_game<R: Rng + ?Sized>(scenario: &Scenario, rng: &mut R) -> Result<BellFunctional> {
    let n_out = scenario.num_output_tuples();
    let mut coeffs: Vec<f64> = (0..scenario.table_len()).map(|_| rng.gen::<f64>()).collect();
    let total: f64 = coeffs
        .chunks(n_out)
        .map(|row| row.iter().copied().fold(0.0, f64::max))
        .sum();
    if total > 0.0 {
        coeffs.iter_mut().for_each(|c| *c /= total);
    }
    BellFunctional::game(scenario.clone(), coeffs)
}

/// Entries uniform in `[-1, 1]`.
pub fn random_correlation_functional<R: Rng + ?Sized>(
    scenario: &Scenario,
    rng: &mut R,
) -> Result<BellFunctional> {
    let coeffs = (0..scenario.num_input_tuples())
        .map(|_| rng.gen_range(-1.0..=1.0))
        .collect();
    BellFunctional::correlation(scenario.clone(), coeffs)
}

/// Entries uniform in `[-1, 1]`.
pub fn random_correlation<R: Rng + ?Sized>(scenario: &Scenario, rng: &mut R) -> Result<Correlation> {
    let table = (0..scenario.num_input_tuples())
        .map(|_| rng.gen_range(-1.0..=1.0))
        .collect();
    Correlation::new(scenario.clone(), table)
}
