use serde::{Deserialize, Serialize};

use super::{correlation::parity_sign, Behaviour, Correlation, Scenario};
use crate::error::{Error, Result};

/// Slack allowed on `Σ_x max_a G ≤ 1`.
pub const NORMALIZATION_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FunctionalKind {
    /// Arbitrary real coefficients indexed by inputs and outputs.
    General,
    /// Non-negative coefficients satisfying the normalization condition.
    Game,
    /// Binary-output functional indexed by inputs only, paired with correlations.
    Correlation,
}

impl FunctionalKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FunctionalKind::General => "general",
            FunctionalKind::Game => "game",
            FunctionalKind::Correlation => "correlation",
        }
    }
}

impl std::str::FromStr for FunctionalKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "general" => Ok(FunctionalKind::General),
            "game" => Ok(FunctionalKind::Game),
            "correlation" | "correlation-functional" => Ok(FunctionalKind::Correlation),
            other => Err(Error::Format(format!("unknown functional kind {other:?}"))),
        }
    }
}

/// Linear functional on behaviours (or on correlations, for the correlation kind).
///
/// Coefficients share the behaviour layout: `coeffs[x * num_output_tuples + a]`.
/// Correlation functionals store one coefficient per input tuple.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BellFunctional {
    label: String,
    scenario: Scenario,
    kind: FunctionalKind,
    coeffs: Vec<f64>,
}

impl BellFunctional {
    pub fn new(scenario: Scenario, kind: FunctionalKind, coeffs: Vec<f64>) -> Result<Self> {
        let expected = match kind {
            FunctionalKind::Correlation => {
                if !scenario.is_binary() {
                    return Err(Error::unsupported(
                        "correlation functionals need two outputs per party",
                    ));
                }
                scenario.num_input_tuples()
            }
            _ => scenario.table_len(),
        };
        if coeffs.len() != expected {
            return Err(Error::dim(format!(
                "{} coefficients given, {} expected",
                coeffs.len(),
                expected
            )));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::domain("coefficients must be finite"));
        }
        let f = Self {
            label: String::new(),
            scenario,
            kind,
            coeffs,
        };
        if kind == FunctionalKind::Game {
            if !f.is_nonnegative() {
                return Err(Error::validation("game coefficients must be non-negative"));
            }
            let total = f.normalization_sum();
            if total > 1.0 + NORMALIZATION_TOL {
                return Err(Error::validation(format!(
                    "game violates the normalization condition: sum of row maxima is {total}"
                )));
            }
        }
        Ok(f)
    }

    pub fn general(scenario: Scenario, coeffs: Vec<f64>) -> Result<Self> {
        Self::new(scenario, FunctionalKind::General, coeffs)
    }

    pub fn game(scenario: Scenario, coeffs: Vec<f64>) -> Result<Self> {
        Self::new(scenario, FunctionalKind::Game, coeffs)
    }

    pub fn correlation(scenario: Scenario, coeffs: Vec<f64>) -> Result<Self> {
        Self::new(scenario, FunctionalKind::Correlation, coeffs)
    }

    pub fn zero(scenario: Scenario, kind: FunctionalKind) -> Result<Self> {
        let len = match kind {
            FunctionalKind::Correlation => scenario.num_input_tuples(),
            _ => scenario.table_len(),
        };
        Self::new(scenario, kind, vec![0.0; len])
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn kind(&self) -> FunctionalKind {
        self.kind
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn parties(&self) -> usize {
        self.scenario.parties()
    }

    pub fn is_correlation(&self) -> bool {
        self.kind == FunctionalKind::Correlation
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|&c| c >= 0.0)
    }

    /// Coefficient for 0-based input and output tuples.
    pub fn coeff(&self, inputs: &[usize], outputs: &[usize]) -> f64 {
        let xi = self.scenario.input_radix().encode(inputs);
        match self.kind {
            FunctionalKind::Correlation => self.coeffs[xi],
            _ => {
                let ai = self.scenario.output_radix().encode(outputs);
                self.coeffs[xi * self.scenario.num_output_tuples() + ai]
            }
        }
    }

    /// `Σ_x max_a M_x^a`. For correlation functionals this is `Σ_x |M_x|`.
    pub fn normalization_sum(&self) -> f64 {
        match self.kind {
            FunctionalKind::Correlation => self.coeffs.iter().map(|c| c.abs()).sum(),
            _ => self
                .coeffs
                .chunks(self.scenario.num_output_tuples())
                .map(|row| row.iter().copied().fold(f64::NEG_INFINITY, f64::max))
                .sum(),
        }
    }

    /// Scaled copy. A scaled game is no longer assumed to be a game.
    pub fn scaled(&self, factor: f64) -> Self {
        let kind = match self.kind {
            FunctionalKind::Game => FunctionalKind::General,
            k => k,
        };
        Self {
            label: format!("{}*{}", factor, self.label),
            scenario: self.scenario.clone(),
            kind,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// `alpha * self + beta * other` on a shared scenario and layout.
    pub fn combine(&self, alpha: f64, other: &Self, beta: f64) -> Result<Self> {
        if self.scenario != other.scenario || self.is_correlation() != other.is_correlation() {
            return Err(Error::dim("functionals live on different scenarios"));
        }
        let kind = if self.is_correlation() {
            FunctionalKind::Correlation
        } else {
            FunctionalKind::General
        };
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| alpha * a + beta * b)
            .collect();
        Self::new(self.scenario.clone(), kind, coeffs)
    }

    /// Reinterprets the coefficients under a new kind, re-validating them.
    pub fn into_kind(self, kind: FunctionalKind) -> Result<Self> {
        let label = self.label;
        Ok(Self::new(self.scenario, kind, self.coeffs)?.with_label(label))
    }
}

/// `⟨M, P⟩`. Correlation functionals are paired with the correlation of `P`.
pub fn evaluate(functional: &BellFunctional, behaviour: &Behaviour) -> Result<f64> {
    if functional.scenario() != behaviour.scenario() {
        return Err(Error::dim(format!(
            "functional on {} evaluated on behaviour on {}",
            functional.scenario(),
            behaviour.scenario()
        )));
    }
    let value = match functional.kind() {
        FunctionalKind::Correlation => functional
            .coeffs()
            .iter()
            .enumerate()
            .map(|(xi, m)| {
                let row = behaviour.row(xi);
                m * row
                    .iter()
                    .enumerate()
                    .map(|(ai, p)| parity_sign(ai) * p)
                    .sum::<f64>()
            })
            .sum(),
        _ => functional
            .coeffs()
            .iter()
            .zip(behaviour.table())
            .map(|(m, p)| m * p)
            .sum(),
    };
    Ok(value)
}

/// `Σ_x M_x γ_x` for a correlation functional.
pub fn evaluate_correlation(functional: &BellFunctional, correlation: &Correlation) -> Result<f64> {
    if !functional.is_correlation() {
        return Err(Error::unsupported(
            "only correlation functionals pair with correlations",
        ));
    }
    if functional.scenario() != correlation.scenario() {
        return Err(Error::dim("functional and correlation scenarios differ"));
    }
    Ok(functional
        .coeffs()
        .iter()
        .zip(correlation.table())
        .map(|(m, g)| m * g)
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn game_constructor_enforces_normalization() {
        let s = Scenario::uniform(1, 2, 2).unwrap();
        assert!(BellFunctional::game(s.clone(), vec![0.5, 0.5, 0.5, 0.0]).is_ok());
        assert!(matches!(
            BellFunctional::game(s.clone(), vec![0.6, 0.0, 0.5, 0.0]),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            BellFunctional::game(s, vec![-0.1, 0.0, 0.5, 0.0]),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn mismatched_scenarios_are_dimension_errors() {
        let f = BellFunctional::zero(Scenario::uniform(2, 2, 2).unwrap(), FunctionalKind::General)
            .unwrap();
        let p = Behaviour::uniform(Scenario::uniform(2, 3, 2).unwrap());
        assert!(matches!(evaluate(&f, &p), Err(Error::Dimension(_))));
    }

    #[test]
    fn zero_functional_evaluates_to_zero() {
        let s = Scenario::uniform(3, 2, 3).unwrap();
        let f = BellFunctional::zero(s.clone(), FunctionalKind::General).unwrap();
        assert_eq!(evaluate(&f, &Behaviour::uniform(s)).unwrap(), 0.0);
    }
}
