use serde::Serialize;

use super::{index::MixedRadix, DeterministicStrategy, Scenario};
use crate::error::{Error, Result};

/// Entries may dip this far below zero before a table is rejected.
pub const NONNEGATIVITY_TOL: f64 = 1e-12;
/// Tolerance for per-input normalization and marginal constraints.
pub const CONSTRAINT_TOL: f64 = 1e-9;

/// Joint conditional distribution `P(a_1..a_k | x_1..x_k)`.
///
/// Stored densely: `table[x * num_output_tuples + a]` with both tuples in
/// row-major order, party 1 slowest. Output index 0 is read as `+1` and
/// index 1 as `-1` whenever a correlation is taken.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Behaviour {
    scenario: Scenario,
    table: Vec<f64>,
}

impl Behaviour {
    pub fn new(scenario: Scenario, table: Vec<f64>) -> Result<Self> {
        if table.len() != scenario.table_len() {
            return Err(Error::dim(format!(
                "behaviour table has {} entries, scenario needs {}",
                table.len(),
                scenario.table_len()
            )));
        }
        let n_out = scenario.num_output_tuples();
        for (x, row) in table.chunks(n_out).enumerate() {
            if let Some(v) = row.iter().find(|v| !v.is_finite() || **v < -NONNEGATIVITY_TOL) {
                return Err(Error::validation(format!(
                    "entry {v} for input tuple {x} is not a probability"
                )));
            }
            let total: f64 = row.iter().sum();
            if (total - 1.0).abs() > CONSTRAINT_TOL {
                return Err(Error::validation(format!(
                    "row for input tuple {x} sums to {total}"
                )));
            }
        }
        Ok(Self { scenario, table })
    }

    pub fn uniform(scenario: Scenario) -> Self {
        let p = 1.0 / scenario.num_output_tuples() as f64;
        let table = vec![p; scenario.table_len()];
        Self { scenario, table }
    }

    pub fn from_deterministic(strategy: &DeterministicStrategy) -> Self {
        let scenario = strategy.scenario().clone();
        let inputs = scenario.input_radix();
        let outputs = scenario.output_radix();
        let mut table = vec![0.0; scenario.table_len()];
        let mut x = vec![0; scenario.parties()];
        let mut a = vec![0; scenario.parties()];
        for xi in 0..inputs.len() {
            inputs.decode_into(xi, &mut x);
            for (party, slot) in a.iter_mut().enumerate() {
                *slot = strategy.output(party, x[party]);
            }
            table[xi * outputs.len() + outputs.encode(&a)] = 1.0;
        }
        Self { scenario, table }
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn table(&self) -> &[f64] {
        &self.table
    }

    pub fn into_table(self) -> Vec<f64> {
        self.table
    }

    pub fn row(&self, input_index: usize) -> &[f64] {
        let n = self.scenario.num_output_tuples();
        &self.table[input_index * n..(input_index + 1) * n]
    }

    pub fn prob(&self, outputs: &[usize], inputs: &[usize]) -> f64 {
        let xi = self.scenario.input_radix().encode(inputs);
        let ai = self.scenario.output_radix().encode(outputs);
        self.row(xi)[ai]
    }

    /// Checks marginal independence for every strict non-empty subset of parties.
    pub fn non_signalling_report(&self) -> NsReport {
        let k = self.scenario.parties();
        let inputs = self.scenario.input_radix();
        let outputs = self.scenario.output_radix();
        let mut worst: Option<NsViolation> = None;
        let mut x = vec![0; k];
        let mut a = vec![0; k];

        for mask in 1..(1usize << k).saturating_sub(1) {
            let kept: Vec<usize> = (0..k).filter(|i| mask & (1 << i) != 0).collect();
            let kept_outputs =
                MixedRadix::new(&kept.iter().map(|&i| self.scenario.outputs()[i]).collect::<Vec<_>>());
            let marginal = |xi: usize, buf: &mut [f64], a: &mut [usize]| {
                buf.iter_mut().for_each(|v| *v = 0.0);
                for (ai, p) in self.row(xi).iter().enumerate() {
                    outputs.decode_into(ai, a);
                    let key: usize = kept
                        .iter()
                        .enumerate()
                        .map(|(j, &i)| a[i] * kept_outputs.stride(j))
                        .sum();
                    buf[key] += p;
                }
            };
            let mut reference = vec![0.0; kept_outputs.len()];
            let mut current = vec![0.0; kept_outputs.len()];
            let mut x_ref = vec![0; k];
            for xi in 0..inputs.len() {
                inputs.decode_into(xi, &mut x);
                // Compare against the same kept inputs with every other input at 0.
                for i in 0..k {
                    x_ref[i] = if mask & (1 << i) != 0 { x[i] } else { 0 };
                }
                if x_ref == x {
                    continue;
                }
                marginal(inputs.encode(&x_ref), &mut reference, &mut a);
                marginal(xi, &mut current, &mut a);
                for (key, (r, c)) in reference.iter().zip(&current).enumerate() {
                    let dev = (r - c).abs();
                    if worst.as_ref().is_none_or(|w| dev > w.deviation) {
                        worst = Some(NsViolation {
                            subset: kept.clone(),
                            inputs: x.clone(),
                            reference_inputs: x_ref.clone(),
                            outputs: kept_outputs.decode(key),
                            deviation: dev,
                        });
                    }
                }
            }
        }
        let non_signalling = worst.as_ref().is_none_or(|w| w.deviation <= CONSTRAINT_TOL);
        NsReport {
            non_signalling,
            worst,
        }
    }

    pub fn is_non_signalling(&self) -> bool {
        self.non_signalling_report().non_signalling
    }
}

/// Outcome of a non-signalling check. `worst` is the largest marginal
/// deviation seen, whether or not it exceeds the tolerance.
#[derive(Clone, Debug, Serialize)]
pub struct NsReport {
    pub non_signalling: bool,
    pub worst: Option<NsViolation>,
}

#[derive(Clone, Debug, Serialize)]
pub struct NsViolation {
    /// Parties whose marginal was compared (0-based).
    pub subset: Vec<usize>,
    pub inputs: Vec<usize>,
    pub reference_inputs: Vec<usize>,
    /// Output tuple of the subset.
    pub outputs: Vec<usize>,
    pub deviation: f64,
}
