use serde::Serialize;

use super::{Behaviour, Scenario};
use crate::error::{Error, Result};

/// One fixed output per party and input. Outputs are 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeterministicStrategy {
    scenario: Scenario,
    assignment: Vec<Vec<usize>>,
}

impl DeterministicStrategy {
    pub fn new(scenario: Scenario, assignment: Vec<Vec<usize>>) -> Result<Self> {
        if assignment.len() != scenario.parties() {
            return Err(Error::dim("one assignment per party is required"));
        }
        for (party, map) in assignment.iter().enumerate() {
            if map.len() != scenario.inputs()[party] {
                return Err(Error::dim(format!(
                    "party {party} has {} inputs, assignment covers {}",
                    scenario.inputs()[party],
                    map.len()
                )));
            }
            if let Some(a) = map.iter().find(|&&a| a >= scenario.outputs()[party]) {
                return Err(Error::domain(format!(
                    "party {party} answers {a}, only {} outputs exist",
                    scenario.outputs()[party]
                )));
            }
        }
        Ok(Self {
            scenario,
            assignment,
        })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn assignment(&self) -> &[Vec<usize>] {
        &self.assignment
    }

    pub fn output(&self, party: usize, input: usize) -> usize {
        self.assignment[party][input]
    }

    pub fn behaviour(&self) -> Behaviour {
        Behaviour::from_deterministic(self)
    }
}

/// A split of three parties into a merged pair and a lone party (0-based indices).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Partition {
    merged: [usize; 2],
    lone: usize,
}

impl Partition {
    /// `{1,2}|3`, `{2,3}|1`, `{1,3}|2` in that order.
    pub const ALL: [Partition; 3] = [
        Partition {
            merged: [0, 1],
            lone: 2,
        },
        Partition {
            merged: [1, 2],
            lone: 0,
        },
        Partition {
            merged: [0, 2],
            lone: 1,
        },
    ];

    pub fn with_lone(lone: usize) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.lone == lone)
            .ok_or_else(|| Error::domain(format!("party {lone} is not one of 0, 1, 2")))
    }

    pub fn merged(&self) -> [usize; 2] {
        self.merged
    }

    pub fn lone(&self) -> usize {
        self.lone
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{{{},{}}}|{{{}}}",
            self.merged[0] + 1,
            self.merged[1] + 1,
            self.lone + 1
        )
    }
}
