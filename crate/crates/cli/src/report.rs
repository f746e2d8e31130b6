//! Result rows, inequality verdicts and the files they are written to.

use std::fs;
use std::path::Path;

use lerw_core::stats::{Estimate, Proportion};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{io_err, Result};

/// One line of `results.csv`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub quantity: String,
    pub estimate: f64,
    pub stderr: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
}

impl Row {
    pub fn exact(quantity: impl Into<String>, value: f64) -> Self {
        Self {
            quantity: quantity.into(),
            estimate: value,
            stderr: 0.0,
            ci_lo: value,
            ci_hi: value,
        }
    }

    pub fn estimate(quantity: impl Into<String>, e: &Estimate) -> Self {
        Self {
            quantity: quantity.into(),
            estimate: e.mean,
            stderr: e.stderr,
            ci_lo: e.ci_lo,
            ci_hi: e.ci_hi,
        }
    }

    pub fn proportion(quantity: impl Into<String>, p: &Proportion) -> Self {
        Self {
            quantity: quantity.into(),
            estimate: p.estimate,
            stderr: p.stderr,
            ci_lo: p.ci_lo,
            ci_hi: p.ci_hi,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = ">=")]
    AtLeast,
    #[serde(rename = "<=")]
    AtMost,
    /// Equality up to the stated tolerance.
    #[serde(rename = "=")]
    Equal,
}

/// Outcome of one inequality: `value relation bound`, where `bound` is built from
/// `constant`. Positive slack means the inequality holds with room to spare.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub inequality: String,
    pub value: f64,
    pub relation: Relation,
    pub bound: f64,
    pub constant: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    pub slack: f64,
    pub pass: bool,
}

impl Verdict {
    pub fn at_least(inequality: impl Into<String>, value: f64, bound: f64, constant: &str) -> Self {
        let slack = value - bound;
        Self {
            inequality: inequality.into(),
            value,
            relation: Relation::AtLeast,
            bound,
            constant: constant.into(),
            tolerance: None,
            slack,
            pass: slack >= 0.0,
        }
    }

    pub fn at_most(inequality: impl Into<String>, value: f64, bound: f64, constant: &str) -> Self {
        let slack = bound - value;
        Self {
            inequality: inequality.into(),
            value,
            relation: Relation::AtMost,
            bound,
            constant: constant.into(),
            tolerance: None,
            slack,
            pass: slack >= 0.0,
        }
    }

    /// `|value - bound| ≤ tolerance`; slack is `tolerance - |value - bound|`.
    pub fn equal(
        inequality: impl Into<String>,
        value: f64,
        bound: f64,
        constant: &str,
        tolerance: f64,
    ) -> Self {
        let slack = tolerance - (value - bound).abs();
        Self {
            inequality: inequality.into(),
            value,
            relation: Relation::Equal,
            bound,
            constant: constant.into(),
            tolerance: Some(tolerance),
            slack,
            pass: slack >= 0.0,
        }
    }

    /// Exact inequalities are checked with a `1e-12` allowance for rounding.
    pub fn with_rounding(mut self) -> Self {
        if self.relation != Relation::Equal {
            self.tolerance = Some(EXACT_TOLERANCE);
            self.pass = self.slack >= -EXACT_TOLERANCE;
        }
        self
    }
}

pub const EXACT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Report {
    pub rows: Vec<Row>,
    pub verdicts: Vec<Verdict>,
}

impl Report {
    pub fn row(&mut self, row: Row) {
        self.rows.push(row);
    }

    pub fn verdict(&mut self, verdict: Verdict) {
        self.verdicts.push(verdict);
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn csv_bytes(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in &self.rows {
            w.serialize(row)?;
        }
        if self.rows.is_empty() {
            w.write_record(["quantity", "estimate", "stderr", "ci_lo", "ci_hi"])?;
        }
        w.into_inner().map_err(|e| csv::Error::from(e.into_error()).into())
    }

    pub fn verdicts_json(&self, preset: &str) -> Result<Vec<u8>> {
        #[derive(Serialize)]
        struct Doc<'a> {
            preset: &'a str,
            all_pass: bool,
            verdicts: &'a [Verdict],
        }
        let doc = Doc {
            preset,
            all_pass: self.all_pass(),
            verdicts: &self.verdicts,
        };
        pretty(&doc)
    }
}

pub fn pretty<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    fs::write(path, bytes).map_err(io_err(path))
}
