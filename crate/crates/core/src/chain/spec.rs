use serde::{Deserialize, Serialize};

use super::{FiniteChain, GluedGraph, LatticeWalk};
use crate::error::{Error, Result};

/// JSON document form of a chain:
///
/// ```json
/// {"type": "finite", "states": ["a", "b"], "kernel": [[0.5, 0.5], [0.0, 0.9]]}
/// {"type": "lattice", "dimension": 3, "kill_prob": 0.01}
/// {"type": "glued", "kill_prob": 0.0, "escape_radius": 20}
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum ChainDoc {
    Finite {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        states: Option<Vec<String>>,
        kernel: Vec<Vec<f64>>,
    },
    Lattice {
        dimension: usize,
        #[serde(default)]
        kill_prob: f64,
    },
    Glued {
        #[serde(default)]
        kill_prob: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        escape_radius: Option<u32>,
    },
}

/// A validated chain of one of the supported families. Serializes as its JSON
/// document form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ChainDoc", into = "ChainDoc")]
pub enum ChainSpec {
    Finite(FiniteChain),
    Lattice(LatticeWalk),
    Glued(GluedGraph),
}

impl ChainSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_doc(serde_json::from_str(text)?)
    }

    pub fn from_value(value: serde_json::Value) -> Result<Self> {
        Self::from_doc(serde_json::from_value(value)?)
    }

    fn from_doc(doc: ChainDoc) -> Result<Self> {
        Ok(match doc {
            ChainDoc::Finite { states, kernel } => match states {
                Some(labels) => ChainSpec::Finite(FiniteChain::new(labels, kernel)?),
                None => ChainSpec::Finite(FiniteChain::from_kernel(kernel)?),
            },
            ChainDoc::Lattice {
                dimension,
                kill_prob,
            } => ChainSpec::Lattice(LatticeWalk::new(dimension, kill_prob)?),
            ChainDoc::Glued {
                kill_prob,
                escape_radius,
            } => ChainSpec::Glued(GluedGraph::new(kill_prob, escape_radius)?),
        })
    }

    pub fn to_value(&self) -> serde_json::Value {
        serde_json::to_value(ChainDoc::from(self.clone())).expect("chain documents serialize")
    }

    /// Adds killing with probability `q` before every move, on top of any
    /// killing the chain already has.
    pub fn with_additional_kill(&self, q: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&q) {
            return Err(Error::InvalidSpec(format!("kill probability {q} outside [0, 1)")));
        }
        let compose = |p: f64| 1.0 - (1.0 - p) * (1.0 - q);
        Ok(match self {
            ChainSpec::Finite(c) => {
                let kernel = c
                    .kernel()
                    .iter()
                    .map(|row| row.iter().map(|v| v * (1.0 - q)).collect())
                    .collect();
                ChainSpec::Finite(FiniteChain::new(c.labels().to_vec(), kernel)?)
            }
            ChainSpec::Lattice(w) => ChainSpec::Lattice(LatticeWalk::new(w.dim(), compose(w.kill_prob()))?),
            ChainSpec::Glued(g) => {
                ChainSpec::Glued(GluedGraph::new(compose(g.kill_prob()), g.escape_radius())?)
            }
        })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ChainSpec::Finite(_) => "finite",
            ChainSpec::Lattice(_) => "lattice",
            ChainSpec::Glued(_) => "glued",
        }
    }
}

impl TryFrom<ChainDoc> for ChainSpec {
    type Error = Error;

    fn try_from(doc: ChainDoc) -> Result<Self> {
        Self::from_doc(doc)
    }
}

impl From<ChainSpec> for ChainDoc {
    fn from(spec: ChainSpec) -> Self {
        match spec {
            ChainSpec::Finite(c) => ChainDoc::Finite {
                states: Some(c.labels().to_vec()),
                kernel: c.kernel().to_vec(),
            },
            ChainSpec::Lattice(w) => ChainDoc::Lattice {
                dimension: w.dim(),
                kill_prob: w.kill_prob(),
            },
            ChainSpec::Glued(g) => ChainDoc::Glued {
                kill_prob: g.kill_prob(),
                escape_radius: g.escape_radius(),
            },
        }
    }
}
