//! JSON game files and report files.
//!
//! Game files list coefficients sparsely with 1-based indices; anything not
//! listed is zero. Floats are written in shortest round-trip form, so a
//! saved game loads back bit for bit.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::games::Recipe;
use crate::model::{BellFunctional, FunctionalKind, Scenario};
use crate::solvers::{LvReport, ValueReport};
use crate::verify::Check;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoeffEntry {
    pub x: Vec<usize>,
    /// Empty for correlation functionals.
    #[serde(default)]
    pub a: Vec<usize>,
    pub v: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameFile {
    pub parties: usize,
    pub inputs: Vec<usize>,
    pub outputs: Vec<usize>,
    pub kind: String,
    pub coeffs: Vec<CoeffEntry>,
    #[serde(default)]
    pub meta: Map<String, Value>,
}

impl GameFile {
    pub fn from_functional(m: &BellFunctional, recipe: Option<&Recipe>) -> Result<Self> {
        let s = m.scenario();
        let inputs = s.input_radix();
        let outputs = s.output_radix();
        let one_based = |v: Vec<usize>| v.into_iter().map(|i| i + 1).collect::<Vec<_>>();
        let mut coeffs = Vec::new();
        if m.is_correlation() {
            for (xi, &v) in m.coeffs().iter().enumerate() {
                if v != 0.0 {
                    coeffs.push(CoeffEntry {
                        x: one_based(inputs.decode(xi)),
                        a: Vec::new(),
                        v,
                    });
                }
            }
        } else {
            let n_out = outputs.len();
            for (idx, &v) in m.coeffs().iter().enumerate() {
                if v != 0.0 {
                    coeffs.push(CoeffEntry {
                        x: one_based(inputs.decode(idx / n_out)),
                        a: one_based(outputs.decode(idx % n_out)),
                        v,
                    });
                }
            }
        }
        let mut meta = Map::new();
        if !m.label().is_empty() {
            meta.insert("id".into(), Value::String(m.label().to_owned()));
        }
        if let Some(r) = recipe {
            meta.insert("recipe".into(), serde_json::to_value(r)?);
        }
        Ok(Self {
            parties: s.parties(),
            inputs: s.inputs().to_vec(),
            outputs: s.outputs().to_vec(),
            kind: m.kind().as_str().to_owned(),
            coeffs,
            meta,
        })
    }

    /// Dense functional; rejects out-of-range or repeated indices.
    pub fn to_functional(&self) -> Result<BellFunctional> {
        if self.inputs.len() != self.parties || self.outputs.len() != self.parties {
            return Err(Error::Format(format!(
                "{} parties but {} input and {} output sizes",
                self.parties,
                self.inputs.len(),
                self.outputs.len()
            )));
        }
        let s = Scenario::new(self.inputs.clone(), self.outputs.clone())
            .map_err(|e| Error::Format(e.to_string()))?;
        let kind: FunctionalKind = self.kind.parse()?;
        let correlation = kind == FunctionalKind::Correlation;
        let len = if correlation {
            s.num_input_tuples()
        } else {
            s.table_len()
        };
        let mut dense = vec![0.0; len];
        let mut seen = vec![false; len];
        let zero_based = |idx: &[usize], sizes: &[usize], what: &str| -> Result<Vec<usize>> {
            if idx.len() != sizes.len() {
                return Err(Error::Format(format!(
                    "{what} index {idx:?} needs {} entries",
                    sizes.len()
                )));
            }
            idx.iter()
                .zip(sizes)
                .map(|(&i, &n)| {
                    if i == 0 || i > n {
                        Err(Error::Format(format!("{what} index {idx:?} is outside 1..={n}")))
                    } else {
                        Ok(i - 1)
                    }
                })
                .collect()
        };
        let (in_radix, out_radix) = (s.input_radix(), s.output_radix());
        for c in &self.coeffs {
            let x = zero_based(&c.x, s.inputs(), "input")?;
            let pos = if correlation {
                if !c.a.is_empty() {
                    return Err(Error::Format("correlation entries take no outputs".into()));
                }
                in_radix.encode(&x)
            } else {
                let a = zero_based(&c.a, s.outputs(), "output")?;
                in_radix.encode(&x) * out_radix.len() + out_radix.encode(&a)
            };
            if std::mem::replace(&mut seen[pos], true) {
                return Err(Error::Format(format!(
                    "coefficient x={:?} a={:?} appears twice",
                    c.x, c.a
                )));
            }
            if kind == FunctionalKind::Game && c.v < 0.0 {
                return Err(Error::Format(format!(
                    "game coefficient x={:?} a={:?} is negative",
                    c.x, c.a
                )));
            }
            dense[pos] = c.v;
        }
        let m = BellFunctional::new(s, kind, dense)?;
        Ok(match self.meta.get("id").and_then(Value::as_str) {
            Some(id) => m.with_label(id),
            None => m,
        })
    }

    pub fn recipe(&self) -> Option<Recipe> {
        self.meta
            .get("recipe")
            .and_then(|r| serde_json::from_value(r.clone()).ok())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

pub fn save_game(path: &Path, m: &BellFunctional, recipe: Option<&Recipe>) -> Result<()> {
    std::fs::write(path, GameFile::from_functional(m, recipe)?.to_json()? + "\n")?;
    Ok(())
}

pub fn load_game_file(path: &Path) -> Result<GameFile> {
    GameFile::from_json(&std::fs::read_to_string(path)?)
}

pub fn load_game(path: &Path) -> Result<(BellFunctional, Option<Recipe>)> {
    let file = load_game_file(path)?;
    Ok((file.to_functional()?, file.recipe()))
}

/// Values, ratios and inequality checks for one functional or suite.
#[derive(Clone, Debug, Default, Serialize)]
pub struct ReportFile {
    pub functional: String,
    pub values: Vec<ValueReport>,
    pub lv_ratios: Vec<LvReport>,
    pub checks: Vec<Check>,
    /// Seconds per step.
    pub wall_times: BTreeMap<String, f64>,
}

impl ReportFile {
    pub fn new(functional: impl Into<String>) -> Self {
        Self {
            functional: functional.into(),
            ..Self::default()
        }
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn merge(&mut self, other: ReportFile) {
        self.values.extend(other.values);
        self.lv_ratios.extend(other.lv_ratios);
        self.checks.extend(other.checks);
        self.wall_times.extend(other.wall_times);
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::{chsh_game, hadamard_correlation_functional};

    #[test]
    fn chsh_file_lists_eight_winning_entries() {
        let f = GameFile::from_functional(&chsh_game(), Some(&Recipe::Chsh)).unwrap();
        assert_eq!(f.coeffs.len(), 8);
        assert!(f.coeffs.iter().all(|c| c.v == 0.25));
        assert_eq!(f.recipe(), Some(Recipe::Chsh));
        let back = GameFile::from_json(&f.to_json().unwrap()).unwrap();
        assert_eq!(back.to_functional().unwrap(), chsh_game());
    }

    #[test]
    fn correlation_round_trip() {
        let m = hadamard_correlation_functional(4).unwrap();
        let f = GameFile::from_functional(&m, None).unwrap();
        assert!(f.coeffs.iter().all(|c| c.a.is_empty()));
        assert_eq!(f.to_functional().unwrap(), m);
    }

    #[test]
    fn bad_indices_are_rejected() {
        let mut f = GameFile::from_functional(&chsh_game(), None).unwrap();
        f.coeffs[0].x[0] = 3;
        assert!(matches!(f.to_functional(), Err(Error::Format(_))));
        let mut f = GameFile::from_functional(&chsh_game(), None).unwrap();
        f.coeffs[1] = f.coeffs[0].clone();
        assert!(matches!(f.to_functional(), Err(Error::Format(_))));
        let mut f = GameFile::from_functional(&chsh_game(), None).unwrap();
        f.coeffs[0].v = -0.25;
        assert!(matches!(f.to_functional(), Err(Error::Format(_))));
    }
}
