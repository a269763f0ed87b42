use serde::{Deserialize, Serialize};

use super::index::MixedRadix;
use crate::error::{Error, Result};

/// Number of parties and the input/output alphabet size of each one.
///
/// Most of the toolkit works with uniform alphabets. Per-party sizes are
/// kept so that constructions such as the two-instance tripartite game can
/// be represented without padding.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scenario {
    inputs: Vec<usize>,
    outputs: Vec<usize>,
}

impl Scenario {
    pub fn new(inputs: Vec<usize>, outputs: Vec<usize>) -> Result<Self> {
        if inputs.is_empty() {
            return Err(Error::domain("a scenario needs at least one party"));
        }
        if inputs.len() != outputs.len() {
            return Err(Error::dim(format!(
                "{} input alphabets but {} output alphabets",
                inputs.len(),
                outputs.len()
            )));
        }
        if inputs.iter().chain(&outputs).any(|&n| n == 0) {
            return Err(Error::domain("alphabet sizes must be positive"));
        }
        Ok(Self { inputs, outputs })
    }

    pub fn uniform(parties: usize, inputs: usize, outputs: usize) -> Result<Self> {
        Self::new(vec![inputs; parties], vec![outputs; parties])
    }

    pub fn parties(&self) -> usize {
        self.inputs.len()
    }

    pub fn inputs(&self) -> &[usize] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }

    pub fn input_radix(&self) -> MixedRadix {
        MixedRadix::new(&self.inputs)
    }

    pub fn output_radix(&self) -> MixedRadix {
        MixedRadix::new(&self.outputs)
    }

    pub fn num_input_tuples(&self) -> usize {
        self.inputs.iter().product()
    }

    pub fn num_output_tuples(&self) -> usize {
        self.outputs.iter().product()
    }

    pub fn table_len(&self) -> usize {
        self.num_input_tuples() * self.num_output_tuples()
    }

    /// `(N, K)` when every party shares the same alphabets.
    pub fn uniform_sizes(&self) -> Option<(usize, usize)> {
        let n = self.inputs[0];
        let k = self.outputs[0];
        (self.inputs.iter().all(|&x| x == n) && self.outputs.iter().all(|&x| x == k))
            .then_some((n, k))
    }

    pub fn is_binary(&self) -> bool {
        self.outputs.iter().all(|&k| k == 2)
    }

    pub(crate) fn expect_parties(&self, parties: usize, what: &str) -> Result<()> {
        if self.parties() != parties {
            return Err(Error::unsupported(format!(
                "{what} needs {parties} parties, got {}",
                self.parties()
            )));
        }
        Ok(())
    }
}

impl std::fmt::Display for Scenario {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "inputs {:?} outputs {:?}", self.inputs, self.outputs)
    }
}
