//! JSON file formats for set functions, matroids, modular weights and universal witnesses.
//!
//! Rationals are written as canonical strings (`"3"`, `"-1/2"`) and read from strings
//! or JSON numbers. Output is deterministic: object keys are sorted and every value is
//! in lowest terms.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::matroid::{FieldMatrix, Matroid, MatroidKind, ModularWeights};
use crate::rational::{self, Rational};
use crate::setfn::{elements, GroundSet, SetFunction};
use crate::universal::{RationalIntervalSet, ResidualRule, UniversalWitness};

/// `{"ground_set": [...], "values": [...]}` with `values[mask]` for each bitmask.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetFunctionJson {
    pub ground_set: Vec<String>,
    #[serde(with = "rational::serde_vec")]
    pub values: Vec<Rational>,
}

impl SetFunctionJson {
    pub fn from_set_function(f: &SetFunction) -> Self {
        Self {
            ground_set: f.ground().labels().to_vec(),
            values: f.values().to_vec(),
        }
    }

    pub fn to_set_function(&self) -> Result<SetFunction> {
        SetFunction::new(GroundSet::new(self.ground_set.clone())?, self.values.clone())
    }
}

/// Tagged matroid description; see [`MatroidJson::from_matroid`] for how each kind is written.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum MatroidJson {
    Uniform {
        n: usize,
        r: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
    },
    Vamos,
    Linear {
        p: u32,
        matrix: Vec<Vec<i64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
    },
    Partition {
        labels: Vec<String>,
        blocks: Vec<Vec<String>>,
    },
    Free {
        n: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
    },
    Zero {
        n: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
    },
    Explicit {
        set_function: SetFunctionJson,
    },
    DirectSum {
        parts: Vec<MatroidJson>,
    },
}

fn ground_for(n: usize, labels: &Option<Vec<String>>) -> Result<GroundSet> {
    match labels {
        None => GroundSet::indexed(n),
        Some(l) if l.len() == n => GroundSet::new(l.clone()),
        Some(l) => domain(format!("{} labels given for {n} elements", l.len())),
    }
}

/// `None` when the labels are the default `"1"`, …, `"n"`.
fn custom_labels(ground: &GroundSet) -> Option<Vec<String>> {
    let indexed = ground
        .labels()
        .iter()
        .enumerate()
        .all(|(i, l)| *l == (i + 1).to_string());
    (!indexed).then(|| ground.labels().to_vec())
}

impl MatroidJson {
    /// Structured kinds keep their structure; restrictions, contractions and couplings
    /// are written as explicit rank tables.
    pub fn from_matroid(m: &Matroid) -> Result<Self> {
        let ground = m.ground();
        Ok(match m.kind() {
            MatroidKind::Uniform { r } => MatroidJson::Uniform {
                n: m.n(),
                r: *r,
                labels: custom_labels(ground),
            },
            MatroidKind::Vamos => MatroidJson::Vamos,
            MatroidKind::Linear(a) => MatroidJson::Linear {
                p: a.p(),
                matrix: a.to_rows(),
                labels: custom_labels(ground),
            },
            MatroidKind::Partition { blocks } => MatroidJson::Partition {
                labels: ground.labels().to_vec(),
                blocks: blocks.iter().map(|&b| ground.labels_of(b)).collect(),
            },
            MatroidKind::Free => MatroidJson::Free {
                n: m.n(),
                labels: custom_labels(ground),
            },
            MatroidKind::Zero => MatroidJson::Zero {
                n: m.n(),
                labels: custom_labels(ground),
            },
            MatroidKind::DirectSum(parts) => MatroidJson::DirectSum {
                parts: parts.iter().map(Self::from_matroid).collect::<Result<_>>()?,
            },
            MatroidKind::Explicit(_)
            | MatroidKind::Restriction { .. }
            | MatroidKind::Contraction { .. }
            | MatroidKind::Coupling(_) => MatroidJson::Explicit {
                set_function: SetFunctionJson::from_set_function(&m.rank_function()?),
            },
        })
    }

    pub fn to_matroid(&self) -> Result<Matroid> {
        match self {
            MatroidJson::Uniform { n, r, labels } => Matroid::uniform_on(ground_for(*n, labels)?, *r),
            MatroidJson::Vamos => Ok(Matroid::vamos()),
            MatroidJson::Linear { p, matrix, labels } => {
                let a = FieldMatrix::from_rows(*p, matrix)?;
                Matroid::linear_on(ground_for(a.cols(), labels)?, a)
            }
            MatroidJson::Partition { labels, blocks } => {
                Matroid::partition(GroundSet::new(labels.clone())?, blocks)
            }
            MatroidJson::Free { n, labels } => Ok(Matroid::free(ground_for(*n, labels)?)),
            MatroidJson::Zero { n, labels } => Ok(Matroid::zero(ground_for(*n, labels)?)),
            MatroidJson::Explicit { set_function } => Matroid::explicit(&set_function.to_set_function()?),
            MatroidJson::DirectSum { parts } => {
                Matroid::direct_sum(parts.iter().map(Self::to_matroid).collect::<Result<_>>()?)
            }
        }
    }
}

/// `{"weights": [...]}`, one weight per ground-set element in order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightsJson {
    #[serde(with = "rational::serde_vec")]
    pub weights: Vec<Rational>,
}

impl WeightsJson {
    pub fn to_weights(&self, ground: &GroundSet) -> Result<ModularWeights> {
        ModularWeights::new(ground.clone(), self.weights.clone())
    }
}

/// `{"psi": {...}, "classes": [[["0","1/2"], ...], ...], "residual_rule": "..."}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UniversalWitnessJson {
    pub psi: SetFunctionJson,
    pub classes: Vec<Vec<(String, String)>>,
    pub residual_rule: ResidualRule,
}

impl UniversalWitnessJson {
    pub fn from_witness(w: &UniversalWitness) -> Self {
        Self {
            psi: SetFunctionJson::from_set_function(&w.psi),
            classes: w
                .classes
                .iter()
                .map(|c| {
                    c.intervals()
                        .iter()
                        .map(|(p, q)| (rational::format(p), rational::format(q)))
                        .collect()
                })
                .collect(),
            residual_rule: w.residual_rule,
        }
    }

    pub fn to_witness(&self) -> Result<UniversalWitness> {
        let classes = self
            .classes
            .iter()
            .map(|c| {
                let pieces = c
                    .iter()
                    .map(|(p, q)| Ok((rational::parse(p)?, rational::parse(q)?)))
                    .collect::<Result<Vec<_>>>()?;
                RationalIntervalSet::from_intervals(pieces)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(UniversalWitness {
            psi: self.psi.to_set_function()?,
            classes,
            residual_rule: self.residual_rule,
        })
    }
}

/// A function file: either a set function or a matroid.
#[derive(Debug, Clone)]
pub enum FunctionInput {
    SetFunction(SetFunction),
    Matroid(Matroid),
}

impl FunctionInput {
    pub fn ground(&self) -> &GroundSet {
        match self {
            FunctionInput::SetFunction(f) => f.ground(),
            FunctionInput::Matroid(m) => m.ground(),
        }
    }

    /// The dense table; for a matroid, its rank function.
    pub fn to_set_function(&self) -> Result<SetFunction> {
        match self {
            FunctionInput::SetFunction(f) => Ok(f.clone()),
            FunctionInput::Matroid(m) => m.rank_function(),
        }
    }

    /// The matroid itself, or the explicit matroid of an integer-valued table.
    pub fn to_matroid(&self) -> Result<Matroid> {
        match self {
            FunctionInput::SetFunction(f) => Matroid::explicit(f),
            FunctionInput::Matroid(m) => Ok(m.clone()),
        }
    }
}

fn parse_value<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

fn from_value<T: serde::de::DeserializeOwned>(value: serde_json::Value) -> Result<T> {
    serde_json::from_value(value).map_err(|e| Error::Parse(e.to_string()))
}

pub fn parse_set_function(text: &str) -> Result<SetFunction> {
    parse_value::<SetFunctionJson>(text)?.to_set_function()
}

pub fn parse_matroid(text: &str) -> Result<Matroid> {
    parse_value::<MatroidJson>(text)?.to_matroid()
}

pub fn parse_weights(text: &str, ground: &GroundSet) -> Result<ModularWeights> {
    parse_value::<WeightsJson>(text)?.to_weights(ground)
}

pub fn parse_universal_witness(text: &str) -> Result<UniversalWitness> {
    parse_value::<UniversalWitnessJson>(text)?.to_witness()
}

/// Reads a matroid if the object has a `"type"` key, otherwise a set function.
pub fn parse_function(text: &str) -> Result<FunctionInput> {
    let value: serde_json::Value = parse_value(text)?;
    if value.get("type").is_some() {
        Ok(FunctionInput::Matroid(from_value::<MatroidJson>(value)?.to_matroid()?))
    } else {
        Ok(FunctionInput::SetFunction(from_value::<SetFunctionJson>(value)?.to_set_function()?))
    }
}

pub fn set_function_to_value(f: &SetFunction) -> serde_json::Value {
    serde_json::to_value(SetFunctionJson::from_set_function(f)).expect("plain data serializes")
}

pub fn matroid_to_value(m: &Matroid) -> Result<serde_json::Value> {
    Ok(serde_json::to_value(MatroidJson::from_matroid(m)?).expect("plain data serializes"))
}

pub fn universal_witness_to_value(w: &UniversalWitness) -> serde_json::Value {
    serde_json::to_value(UniversalWitnessJson::from_witness(w)).expect("plain data serializes")
}

/// Labels of a subset, for witness output.
pub fn subset_labels(ground: &GroundSet, mask: crate::setfn::SubsetMask) -> Vec<String> {
    elements(mask).map(|i| ground.label(i).to_string()).collect()
}
