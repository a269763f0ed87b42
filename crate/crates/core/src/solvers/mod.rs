//! Values `ω_A(M) = sup_{P ∈ A} |⟨M, P⟩|` over each behaviour class.
//!
//! Every enumerator fixes all parties but the last and lets the last one
//! answer input by input; its optimum separates over its inputs, so this is
//! exact. Work is metered against [`SolverOptions::budget`] and exceeding it
//! is an error, never a silent approximation.

mod bilocal;
mod correlation;
mod local;
mod ns;

use serde::Serialize;

pub use bilocal::{bilocal_value_general, bilocal_value_ns, merge_pair};
pub use correlation::{bilocal_correlation_value, local_correlation_value, ns_correlation_value};
pub use local::local_value;
pub use ns::{ns_program, ns_value};

use crate::error::{Error, Result};
use crate::model::{
    evaluate, evaluate_correlation, BellFunctional, Behaviour, Correlation, DeterministicStrategy,
    Partition, Scenario,
};
use crate::quantum::{self, CorrelationObservables, QuantumStrategy};

pub const DEFAULT_BUDGET: u64 = 100_000_000;
/// Certificates must reproduce their value to this accuracy.
pub const CERTIFICATE_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolverOptions {
    /// Cap on elementary scans (enumeration) or `variables × constraints` (LP).
    pub budget: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
        }
    }
}

impl SolverOptions {
    pub fn with_budget(budget: u64) -> Self {
        Self { budget }
    }

    pub(crate) fn charge(&self, required: u128, bound: impl FnOnce() -> String) -> Result<()> {
        if required > self.budget as u128 {
            return Err(Error::Budget {
                bound: bound(),
                required,
                budget: self.budget,
            });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ValueClass {
    Local,
    BilocalGeneral,
    BilocalNs,
    Ns,
    QuantumLower,
    LocalCor,
    BilocalCor,
    NsCor,
}

impl ValueClass {
    pub const ALL: [ValueClass; 8] = [
        ValueClass::Local,
        ValueClass::BilocalGeneral,
        ValueClass::BilocalNs,
        ValueClass::Ns,
        ValueClass::QuantumLower,
        ValueClass::LocalCor,
        ValueClass::BilocalCor,
        ValueClass::NsCor,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ValueClass::Local => "local",
            ValueClass::BilocalGeneral => "bilocal-general",
            ValueClass::BilocalNs => "bilocal-ns",
            ValueClass::Ns => "ns",
            ValueClass::QuantumLower => "quantum-lower",
            ValueClass::LocalCor => "local-cor",
            ValueClass::BilocalCor => "bilocal-cor",
            ValueClass::NsCor => "ns-cor",
        }
    }
}

impl std::str::FromStr for ValueClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::domain(format!("unknown class {s:?}")))
    }
}

impl std::fmt::Display for ValueClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Enumeration,
    Lp,
    ClosedForm,
    SeeSaw,
    ConstructedStrategy,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Enumeration => "enumeration",
            Method::Lp => "lp",
            Method::ClosedForm => "closed-form",
            Method::SeeSaw => "see-saw",
            Method::ConstructedStrategy => "constructed-strategy",
        }
    }
}

/// Witness that a class attains the reported value.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Certificate {
    Deterministic {
        strategy: DeterministicStrategy,
    },
    /// Lone party plays `lone_outputs[x_l]`; the merged pair answers
    /// `merged_outputs[x_i * N_j + x_j]`.
    Bilocal {
        partition: Partition,
        lone_outputs: Vec<usize>,
        merged_outputs: Vec<[usize; 2]>,
    },
    Behaviour {
        behaviour: Behaviour,
    },
    BilocalNs {
        partition: Partition,
        lone_outputs: Vec<usize>,
        pair_behaviour: Behaviour,
    },
    /// One ±1 vector per party.
    Signs {
        signs: Vec<Vec<i8>>,
    },
    Correlation {
        correlation: Correlation,
    },
    /// `γ = α_{x_i x_j} · c_{x_l}` with `α` in the unit cube.
    BilocalCorrelation {
        partition: Partition,
        lone_signs: Vec<i8>,
        pair_point: Vec<f64>,
    },
    Observables {
        observables: CorrelationObservables,
    },
    Strategy {
        strategy: QuantumStrategy,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct ValueReport {
    pub functional: String,
    pub class: ValueClass,
    pub value: f64,
    pub method: Method,
    pub certificate: Certificate,
}

impl ValueReport {
    /// Recomputes the value from the certificate alone.
    pub fn recheck(&self, m: &BellFunctional) -> Result<f64> {
        let v = match &self.certificate {
            Certificate::Deterministic { strategy } => evaluate(m, &strategy.behaviour())?,
            Certificate::Bilocal {
                partition,
                lone_outputs,
                merged_outputs,
            } => evaluate(
                m,
                &bilocal::deterministic_bilocal_behaviour(
                    m.scenario(),
                    *partition,
                    lone_outputs,
                    merged_outputs,
                )?,
            )?,
            Certificate::Behaviour { behaviour } => evaluate(m, behaviour)?,
            Certificate::BilocalNs {
                partition,
                lone_outputs,
                pair_behaviour,
            } => evaluate(
                m,
                &bilocal::ns_bilocal_behaviour(m.scenario(), *partition, lone_outputs, pair_behaviour)?,
            )?,
            Certificate::Signs { signs } => {
                evaluate_correlation(m, &correlation::product_correlation(m.scenario(), signs)?)?
            }
            Certificate::Correlation { correlation } => evaluate_correlation(m, correlation)?,
            Certificate::BilocalCorrelation {
                partition,
                lone_signs,
                pair_point,
            } => evaluate_correlation(
                m,
                &correlation::bilocal_correlation(m.scenario(), *partition, lone_signs, pair_point)?,
            )?,
            Certificate::Observables { observables } => {
                evaluate_correlation(m, &observables.correlation()?)?
            }
            Certificate::Strategy { strategy } => {
                evaluate(m, &quantum::behaviour_of(strategy)?)?
            }
        };
        Ok(v.abs())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LvReport {
    pub functional: String,
    pub numerator: ValueClass,
    pub denominator: ValueClass,
    pub numerator_value: f64,
    pub denominator_value: f64,
    pub ratio: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

/// Ratio of two values of the same functional. `0/0` is taken as 0.
pub fn lv_ratio(num: &ValueReport, den: &ValueReport) -> LvReport {
    let (n, d) = (num.value, den.value);
    let (ratio, warning) = if d > 0.0 {
        (n / d, None)
    } else if n > 0.0 {
        (
            f64::INFINITY,
            Some(format!("{} value is zero while {} is {n}", den.class, num.class)),
        )
    } else {
        (0.0, None)
    };
    LvReport {
        functional: num.functional.clone(),
        numerator: num.class,
        denominator: den.class,
        numerator_value: n,
        denominator_value: d,
        ratio,
        warning,
    }
}

/// Quantum lower bounds need a strategy; this picks see-saw with local
/// dimension `dim` per party for correlation functionals.
#[derive(Clone, Debug)]
pub struct QuantumOptions {
    pub dims: Option<Vec<usize>>,
    pub seeds: u64,
    pub strategy: Option<QuantumStrategy>,
}

impl Default for QuantumOptions {
    fn default() -> Self {
        Self {
            dims: None,
            seeds: 20,
            strategy: None,
        }
    }
}

/// Dispatches a class to its solver.
pub fn value(
    m: &BellFunctional,
    class: ValueClass,
    opts: &SolverOptions,
    qopts: &QuantumOptions,
) -> Result<ValueReport> {
    match class {
        ValueClass::Local => local_value(m, opts),
        ValueClass::BilocalGeneral => bilocal_value_general(m, opts),
        ValueClass::BilocalNs => bilocal_value_ns(m, opts),
        ValueClass::Ns => ns_value(m, opts),
        ValueClass::LocalCor => local_correlation_value(m, opts),
        ValueClass::BilocalCor => bilocal_correlation_value(m, opts),
        ValueClass::NsCor => ns_correlation_value(m),
        ValueClass::QuantumLower => {
            if let Some(qs) = &qopts.strategy {
                quantum::strategy_value(m, qs)
            } else if m.is_correlation() {
                let dims = qopts
                    .dims
                    .clone()
                    .unwrap_or_else(|| vec![2; m.parties()]);
                quantum::correlation_seesaw(m, &dims, qopts.seeds)
            } else {
                Err(Error::unsupported(
                    "quantum lower bounds for full functionals need a constructed strategy",
                ))
            }
        }
    }
}

pub fn lv_ratio_for(
    m: &BellFunctional,
    num: ValueClass,
    den: ValueClass,
    opts: &SolverOptions,
    qopts: &QuantumOptions,
) -> Result<LvReport> {
    let n = value(m, num, opts, qopts)?;
    let d = if den == num {
        n.clone()
    } else {
        value(m, den, opts, qopts)?
    };
    Ok(lv_ratio(&n, &d))
}

pub(crate) fn label_of(m: &BellFunctional) -> String {
    if m.label().is_empty() {
        "unnamed".to_owned()
    } else {
        m.label().to_owned()
    }
}

pub(crate) fn require_full(m: &BellFunctional, what: &str) -> Result<()> {
    if m.is_correlation() {
        return Err(Error::unsupported(format!(
            "{what} works on full functionals; use the correlation solvers for correlation functionals"
        )));
    }
    Ok(())
}

pub(crate) fn require_correlation(m: &BellFunctional, what: &str) -> Result<()> {
    if !m.is_correlation() {
        return Err(Error::unsupported(format!("{what} needs a correlation functional")));
    }
    Ok(())
}

/// `K^(N·p)` style description of a strategy count for budget errors.
pub(crate) fn strategy_bound(s: &Scenario, parties: &[usize]) -> String {
    match s.uniform_sizes() {
        Some((n, k)) => format!("K^(N*{}) = {k}^{}", parties.len(), n * parties.len()),
        None => parties
            .iter()
            .map(|&i| format!("{}^{}", s.outputs()[i], s.inputs()[i]))
            .collect::<Vec<_>>()
            .join(" * "),
    }
}

/// Argmax with ties resolved toward the lower index.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Best {
    pub value: f64,
    pub index: usize,
}

impl Best {
    pub const MAX_IDENTITY: Best = Best {
        value: f64::NEG_INFINITY,
        index: usize::MAX,
    };

    pub fn better(self, other: Best) -> Best {
        if other.value > self.value || (other.value == self.value && other.index < self.index) {
            other
        } else {
            self
        }
    }
}
