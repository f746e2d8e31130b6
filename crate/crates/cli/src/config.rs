//! Experiment configuration files.

use std::fs;
use std::path::Path;

use lerw_core::wilson::FiniteMultigraph;
use lerw_core::{ChainSpec, FiniteChain};
use serde::{Deserialize, Serialize};

use crate::error::{io_err, LabError, Result};

pub const PRESETS: [&str; 11] = [
    "lemma-intloop",
    "seconv-sandwich",
    "chi-half",
    "moment-identity",
    "kahane-bound",
    "heat-kernel",
    "dichotomy-z3-z5",
    "counterexample-H",
    "wilson-uniformity",
    "pemantle-path",
    "triple-intersection",
];

/// A complete, serializable description of one experiment run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub seed: u64,
    #[serde(flatten)]
    pub preset: PresetConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "preset", rename_all = "kebab-case")]
pub enum PresetConfig {
    LemmaIntloop(IntloopConfig),
    SeconvSandwich(FiniteInstances),
    ChiHalf(FiniteInstances),
    MomentIdentity(MomentConfig),
    KahaneBound(KahaneConfig),
    HeatKernel(HeatKernelConfig),
    #[serde(rename = "dichotomy-z3-z5")]
    Dichotomy(DichotomyConfig),
    #[serde(rename = "counterexample-H")]
    Counterexample(CounterexampleConfig),
    WilsonUniformity(WilsonConfig),
    PemantlePath(PemantleConfig),
    TripleIntersection(TripleConfig),
}

impl PresetConfig {
    pub fn name(&self) -> &'static str {
        match self {
            PresetConfig::LemmaIntloop(_) => PRESETS[0],
            PresetConfig::SeconvSandwich(_) => PRESETS[1],
            PresetConfig::ChiHalf(_) => PRESETS[2],
            PresetConfig::MomentIdentity(_) => PRESETS[3],
            PresetConfig::KahaneBound(_) => PRESETS[4],
            PresetConfig::HeatKernel(_) => PRESETS[5],
            PresetConfig::Dichotomy(_) => PRESETS[6],
            PresetConfig::Counterexample(_) => PRESETS[7],
            PresetConfig::WilsonUniformity(_) => PRESETS[8],
            PresetConfig::PemantlePath(_) => PRESETS[9],
            PresetConfig::TripleIntersection(_) => PRESETS[10],
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(io_err(path))?;
        Self::from_json(&text)
    }

    pub fn to_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("configs serialize")
    }
}

/// Finite chains by family name, or an explicit kernel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FiniteFamily {
    LazyTwoState,
    Flip { kill: f64 },
    UniformKilled { states: usize, kill: f64 },
    LazyCycle { n: usize },
    Cycle { n: usize },
    Interval { lo: i64, hi: i64 },
    Explicit { chain: ChainSpec },
}

impl FiniteFamily {
    pub fn build(&self) -> Result<FiniteChain> {
        Ok(match self {
            FiniteFamily::LazyTwoState => FiniteChain::lazy_two_state(),
            FiniteFamily::Flip { kill } => FiniteChain::flip(*kill)?,
            FiniteFamily::UniformKilled { states, kill } => FiniteChain::uniform_killed(*states, *kill)?,
            FiniteFamily::LazyCycle { n } => FiniteChain::lazy_cycle(*n)?,
            FiniteFamily::Cycle { n } => FiniteChain::cycle_walk(*n)?,
            FiniteFamily::Interval { lo, hi } => FiniteChain::interval_walk(*lo, *hi)?,
            FiniteFamily::Explicit { chain } => match chain {
                ChainSpec::Finite(c) => c.clone(),
                other => {
                    return Err(LabError::Config(format!(
                        "expected a finite chain, found a {} chain",
                        other.kind()
                    )))
                }
            },
        })
    }
}

pub(crate) fn state(chain: &FiniteChain, label: &str) -> Result<usize> {
    chain
        .index_of(label)
        .ok_or_else(|| LabError::Config(format!("unknown state `{label}`")))
}

fn default_budget() -> usize {
    lerw_core::oracle::DEFAULT_PATH_BUDGET
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StartPair {
    pub start_x: String,
    pub start_y: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntloopConfig {
    pub chain: ChainSpec,
    pub pairs: Vec<StartPair>,
    pub horizon: usize,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiniteInstance {
    pub name: String,
    pub chain: FiniteFamily,
    pub start_x: String,
    pub start_y: String,
    pub horizon: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiniteInstances {
    pub instances: Vec<FiniteInstance>,
    #[serde(default = "default_budget")]
    pub budget: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentConfig {
    pub chain: FiniteFamily,
    pub origin: String,
    pub n: usize,
    pub transitive: bool,
    #[serde(default = "default_budget")]
    pub budget: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KahaneConfig {
    pub chain: FiniteFamily,
    pub origin: String,
    pub n: usize,
    pub eps: Vec<f64>,
    #[serde(default = "default_budget")]
    pub budget: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeatInstance {
    pub name: String,
    pub chain: FiniteFamily,
    pub x: String,
    pub horizon: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeatKernelConfig {
    pub instances: Vec<HeatInstance>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DichotomyConfig {
    pub ns: Vec<usize>,
    pub z3_samples: usize,
    pub z5_samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CounterexampleConfig {
    pub samples: usize,
    pub cap: usize,
    #[serde(default)]
    pub escape_radius: Option<u32>,
    /// Allowed relative deviation from 1/6.
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WilsonConfig {
    pub graph: FiniteMultigraph,
    pub root: usize,
    pub samples: usize,
    /// Minimum chi-square p-value.
    pub alpha: f64,
    /// A graph that is itself a tree; every sample must reproduce it.
    #[serde(default)]
    pub tree: Option<FiniteMultigraph>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PemantleCase {
    pub name: String,
    pub graph: FiniteMultigraph,
    pub x: usize,
    pub y: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PemantleConfig {
    pub cases: Vec<PemantleCase>,
    pub samples: usize,
    pub bootstrap: usize,
    pub max_tv: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TripleConfig {
    pub chain: ChainSpec,
    pub start_x: String,
    pub start_y: String,
    /// Start of the independent walk whose trace is the set `Z`.
    pub start_z: String,
    pub horizon: usize,
    pub samples: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_tags_round_trip() {
        let text = r#"{"preset": "counterexample-H", "seed": 3, "samples": 10, "cap": 100, "tolerance": 0.1}"#;
        let cfg = ExperimentConfig::from_json(text).unwrap();
        assert_eq!(cfg.preset.name(), "counterexample-H");
        let back = ExperimentConfig::from_json(&cfg.to_value().to_string()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn unknown_preset_is_an_error() {
        assert!(ExperimentConfig::from_json(r#"{"preset": "nope", "seed": 1}"#).is_err());
    }

    #[test]
    fn families_build() {
        let f: FiniteFamily = serde_json::from_str(r#"{"family": "interval", "lo": -2, "hi": 2}"#).unwrap();
        let c = f.build().unwrap();
        assert_eq!(state(&c, "0").unwrap(), 2);
        let lattice: FiniteFamily = serde_json::from_str(
            r#"{"family": "explicit", "chain": {"type": "lattice", "dimension": 3}}"#,
        )
        .unwrap();
        assert!(lattice.build().is_err());
    }
}
