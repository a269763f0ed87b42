use serde::Serialize;

use super::{Behaviour, Scenario};
use crate::error::{Error, Result};

const ENTRY_TOL: f64 = 1e-12;

/// `+1` for output index 0, `-1` for output index 1.
#[inline]
pub fn output_sign(a: usize) -> f64 {
    if a == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Product of output signs of a binary output tuple given by its row-major index.
#[inline]
pub(crate) fn parity_sign(output_index: usize) -> f64 {
    if output_index.count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Expectation tensor `E[a_1 ... a_k | x_1 ... x_k]` of a binary-output scenario.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Correlation {
    scenario: Scenario,
    table: Vec<f64>,
}

impl Correlation {
    pub fn new(scenario: Scenario, table: Vec<f64>) -> Result<Self> {
        if !scenario.is_binary() {
            return Err(Error::unsupported("correlations need two outputs per party"));
        }
        if table.len() != scenario.num_input_tuples() {
            return Err(Error::dim(format!(
                "correlation has {} entries, scenario needs {}",
                table.len(),
                scenario.num_input_tuples()
            )));
        }
        if let Some(v) = table.iter().find(|v| v.is_nan() || v.abs() > 1.0 + ENTRY_TOL) {
            return Err(Error::domain(format!("correlation entry {v} outside [-1, 1]")));
        }
        Ok(Self { scenario, table })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn table(&self) -> &[f64] {
        &self.table
    }

    pub fn from_behaviour(p: &Behaviour) -> Result<Self> {
        let scenario = p.scenario().clone();
        if !scenario.is_binary() {
            return Err(Error::unsupported(
                "correlation needs two outputs per party",
            ));
        }
        // Binary outputs: the row-major output index has one bit per party.
        let table = (0..scenario.num_input_tuples())
            .map(|xi| {
                p.row(xi)
                    .iter()
                    .enumerate()
                    .map(|(ai, v)| parity_sign(ai) * v)
                    .sum::<f64>()
                    .clamp(-1.0, 1.0)
            })
            .collect();
        Ok(Self { scenario, table })
    }

    /// The behaviour `(1 ± γ) / 2^k`, split by the parity of the outputs.
    pub fn to_behaviour(&self) -> Behaviour {
        let k = self.scenario.parties();
        let n_out = self.scenario.num_output_tuples();
        let scale = 1.0 / (1u64 << k) as f64;
        let mut table = Vec::with_capacity(self.scenario.table_len());
        for &g in &self.table {
            let g = g.clamp(-1.0, 1.0);
            table.extend((0..n_out).map(|ai| (1.0 + parity_sign(ai) * g) * scale));
        }
        Behaviour::new(self.scenario.clone(), table)
            .expect("parity split of a bounded correlation is a behaviour")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_correlation_gives_uniform() {
        let s = Scenario::uniform(2, 3, 2).unwrap();
        let c = Correlation::new(s, vec![0.0; 9]).unwrap();
        assert!(c.to_behaviour().table().iter().all(|&p| p == 0.25));
    }

    #[test]
    fn all_ones_tripartite() {
        let s = Scenario::uniform(3, 2, 2).unwrap();
        let c = Correlation::new(s, vec![1.0; 8]).unwrap();
        let p = c.to_behaviour();
        for (ai, v) in p.row(0).iter().enumerate() {
            let expected = if parity_sign(ai) > 0.0 { 0.25 } else { 0.0 };
            assert_eq!(*v, expected);
        }
    }

    #[test]
    fn entries_out_of_range_are_rejected() {
        let s = Scenario::uniform(2, 1, 2).unwrap();
        assert!(matches!(
            Correlation::new(s, vec![1.5]),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn needs_binary_outputs() {
        let s = Scenario::uniform(2, 1, 3).unwrap();
        let p = Behaviour::uniform(s);
        assert!(matches!(
            Correlation::from_behaviour(&p),
            Err(Error::Unsupported(_))
        ));
    }
}
