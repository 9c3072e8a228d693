//! One JSON object per procedure run, appended to a results file.

use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::Path;

use dea_frame::lp::{Algorithm, PivotRule};
use serde::{Deserialize, Serialize};

use crate::error::{BenchError, Result};

#[derive(
    Debug,
    Clone,
    Copy,
    PartialEq,
    Eq,
    Hash,
    PartialOrd,
    Ord,
    Serialize,
    Deserialize,
    clap::ValueEnum,
)]
#[serde(rename_all = "lowercase")]
pub enum Procedure {
    Buildhull,
    Ehd,
    Oracle,
}

impl std::fmt::Display for Procedure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Procedure::Buildhull => "buildhull",
            Procedure::Ehd => "ehd",
            Procedure::Oracle => "oracle",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub dataset: String,
    pub procedure: Procedure,
    pub pivot_rule: PivotRule,
    pub algorithm: Algorithm,
    pub n: usize,
    pub m1: usize,
    pub m2: usize,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub target_density: Option<f64>,
    pub m_hat: usize,
    /// |F|, from the procedure itself or from the dataset manifest.
    #[serde(default)]
    pub frame_size: Option<usize>,
    #[serde(default)]
    pub boundary_size: Option<usize>,
    pub total_lps: usize,
    #[serde(default)]
    pub avg_lp_size: Option<f64>,
    #[serde(default)]
    pub hyperplane_translations: Option<usize>,
    #[serde(default)]
    pub inner_products: Option<u64>,
    #[serde(default)]
    pub translation_time: Option<f64>,
    #[serde(default)]
    pub subset_size: Option<usize>,
    #[serde(default)]
    pub lp_size_step2: Option<usize>,
    #[serde(default)]
    pub num_lps_step2: Option<usize>,
    #[serde(default)]
    pub lp_size_step3: Option<usize>,
    #[serde(default)]
    pub num_lps_step3: Option<usize>,
    #[serde(default)]
    pub lp_size_step4: Option<usize>,
    #[serde(default)]
    pub num_lps_step4: Option<usize>,
    #[serde(default)]
    pub aux_lps: Option<usize>,
    #[serde(default)]
    pub productivity: Option<usize>,
    pub preprocess_time: f64,
    pub phase1_time: f64,
    #[serde(default)]
    pub phase2_lps: Option<usize>,
    #[serde(default)]
    pub phase2_lp_size: Option<usize>,
    #[serde(default)]
    pub phase2_time: Option<f64>,
    /// Preprocessing plus Phase 1, plus Phase 2 when it was requested.
    pub total_time: f64,
    pub timestamp: u64,
}

impl RunRecord {
    pub fn m(&self) -> usize {
        self.m1 + self.m2
    }

    /// Target density when known, otherwise |F| / n.
    pub fn density(&self) -> Option<f64> {
        self.target_density
            .or_else(|| self.frame_size.map(|f| f as f64 / self.n as f64))
    }
}

pub fn append_record(path: &Path, record: &RunRecord) -> Result<()> {
    let mut line = serde_json::to_string(record).map_err(|e| BenchError::Data(e.to_string()))?;
    line.push('\n');
    let mut f = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(BenchError::io(format!("opening {}", path.display())))?;
    f.write_all(line.as_bytes())
        .map_err(BenchError::io(format!("writing {}", path.display())))
}

/// `(line number, error)` for each line that failed to parse.
pub type ParseFailures = Vec<(usize, String)>;

pub fn read_records(path: &Path) -> Result<(Vec<RunRecord>, ParseFailures)> {
    let text =
        fs::read_to_string(path).map_err(BenchError::io(format!("reading {}", path.display())))?;
    let mut records = Vec::new();
    let mut bad = Vec::new();
    for (k, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<RunRecord>(line) {
            Ok(r) => records.push(r),
            Err(e) => bad.push((k + 1, e.to_string())),
        }
    }
    Ok((records, bad))
}

#[cfg(test)]
pub(crate) fn sample(
    dataset: &str,
    procedure: Procedure,
    n: usize,
    m: usize,
    density: f64,
    time: f64,
) -> RunRecord {
    RunRecord {
        dataset: dataset.into(),
        procedure,
        pivot_rule: PivotRule::Dantzig,
        algorithm: Algorithm::Primal,
        n,
        m1: m / 2,
        m2: m - m / 2,
        seed: Some(1),
        target_density: Some(density),
        m_hat: 3,
        frame_size: Some((density * n as f64).round() as usize),
        boundary_size: None,
        total_lps: n - 3,
        avg_lp_size: Some(10.0),
        hyperplane_translations: None,
        inner_products: None,
        translation_time: None,
        subset_size: None,
        lp_size_step2: None,
        num_lps_step2: None,
        lp_size_step3: None,
        num_lps_step3: None,
        lp_size_step4: None,
        num_lps_step4: None,
        aux_lps: None,
        productivity: None,
        preprocess_time: 0.0,
        phase1_time: time,
        phase2_lps: None,
        phase2_lp_size: None,
        phase2_time: None,
        total_time: time,
        timestamp: 0,
    }
}
