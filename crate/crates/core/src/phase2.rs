//! Scoring of the DMUs left out of a Phase-1 reference set.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::config::SolveConfig;
use crate::dea::{models, Dataset};
use crate::error::{DeaError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Phase2Result {
    /// `(target, phi)` in target order.
    pub scores: Vec<(usize, f64)>,
    pub lp_size: usize,
    pub lp_count: usize,
    pub time: f64,
}

impl Phase2Result {
    pub fn score_of(&self, target: usize) -> Option<f64> {
        self.scores
            .iter()
            .find(|(t, _)| *t == target)
            .map(|&(_, phi)| phi)
    }
}

/// Deleted-domain output-oriented scores of `targets` against `reference`.
pub fn score_all(
    ds: &Dataset,
    reference: &[usize],
    targets: &[usize],
    cfg: &SolveConfig,
) -> Result<Phase2Result> {
    let start = Instant::now();
    let mut scores = Vec::with_capacity(targets.len());
    for &t in targets {
        let s = models::output_oriented_score(reference, ds, t, true, cfg)?;
        if !s.feasible {
            return Err(DeaError::Contract(format!(
                "DMU {t} lies outside the hull of the reference set"
            )));
        }
        scores.push((t, s.phi));
    }
    Ok(Phase2Result {
        scores,
        lp_size: reference.len(),
        lp_count: targets.len(),
        time: start.elapsed().as_secs_f64(),
    })
}

/// Every DMU not in `reference`, ascending.
pub fn complement(n: usize, reference: &[usize]) -> Vec<usize> {
    let mut inside = vec![false; n];
    for &i in reference {
        inside[i] = true;
    }
    (0..n).filter(|&i| !inside[i]).collect()
}
