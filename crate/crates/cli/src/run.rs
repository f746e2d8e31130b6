//! Running a preset and writing its report files.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::{ExperimentConfig, PRESETS};
use crate::error::{LabError, Result};
use crate::presets::run_preset;
use crate::report::{pretty, sha256_hex, write_file, Report};

pub const RESULTS_FILE: &str = "results.csv";
pub const VERDICTS_FILE: &str = "verdicts.json";
pub const MANIFEST_FILE: &str = "run-manifest.json";

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    preset: &'a str,
    seed: u64,
    config: serde_json::Value,
    versions: Versions,
    /// SHA-256 of each written report file.
    outputs: BTreeMap<&'static str, String>,
}

#[derive(Debug, Serialize)]
struct Versions {
    #[serde(rename = "lerw-lab")]
    lab: &'static str,
    #[serde(rename = "lerw-core")]
    core: &'static str,
}

/// Paths written by [`run_experiment`] together with the report itself.
#[derive(Debug)]
pub struct RunOutput {
    pub report: Report,
    pub results: PathBuf,
    pub verdicts: PathBuf,
    pub manifest: PathBuf,
}

pub fn check_preset_name(name: &str) -> Result<()> {
    if PRESETS.contains(&name) {
        Ok(())
    } else {
        Err(LabError::UnknownPreset(name.to_string(), PRESETS.join(", ")))
    }
}

/// Runs `config` and writes `results.csv`, `verdicts.json` and `run-manifest.json`
/// into `out_dir`. Identical configs give byte-identical files.
pub fn run_experiment(config: &ExperimentConfig, out_dir: &Path) -> Result<RunOutput> {
    let preset = config.preset.name();
    let report = run_preset(config)?;
    let csv = report.csv_bytes()?;
    let verdicts = report.verdicts_json(preset)?;
    let manifest = Manifest {
        preset,
        seed: config.seed,
        config: config.to_value(),
        versions: Versions {
            lab: env!("CARGO_PKG_VERSION"),
            core: lerw_core::VERSION,
        },
        outputs: BTreeMap::from([
            (RESULTS_FILE, sha256_hex(&csv)),
            (VERDICTS_FILE, sha256_hex(&verdicts)),
        ]),
    };
    let out = RunOutput {
        report,
        results: out_dir.join(RESULTS_FILE),
        verdicts: out_dir.join(VERDICTS_FILE),
        manifest: out_dir.join(MANIFEST_FILE),
    };
    write_file(&out.results, &csv)?;
    write_file(&out.verdicts, &verdicts)?;
    write_file(&out.manifest, &pretty(&manifest)?)?;
    Ok(out)
}
