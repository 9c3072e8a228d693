//! Brute-force classification with full-size LPs, one per DMU and test.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::SolveConfig;
use crate::dea::{membership_test, models, strict_dominance, Dataset};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    ExtremeEfficient,
    BoundaryNonextreme,
    Interior,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub labels: Vec<Label>,
    /// Output-oriented VRS score against all DMUs.
    pub scores: Vec<f64>,
    pub frame: Vec<usize>,
    /// Extreme and nonextreme boundary DMUs, ascending.
    pub boundary: Vec<usize>,
    pub density: f64,
    pub lp_count: usize,
}

/// Index of the first DMU with identical measurements, per DMU.
pub fn duplicate_representatives(ds: &Dataset) -> Vec<usize> {
    let mut first: HashMap<Vec<u64>, usize> = HashMap::new();
    (0..ds.n())
        .map(|i| {
            let key: Vec<u64> = ds.point(i).iter().map(|v| (v + 0.0).to_bits()).collect();
            *first.entry(key).or_insert(i)
        })
        .collect()
}

pub fn classify_all(ds: &Dataset, cfg: &SolveConfig) -> Result<ClassificationReport> {
    let n = ds.n();
    let rep = duplicate_representatives(ds);
    let unique: Vec<usize> = (0..n).filter(|&i| rep[i] == i).collect();
    let all: Vec<usize> = (0..n).collect();
    let all_points: Vec<&[f64]> = ds.points(&all).collect();
    let tol = cfg.member_tol();

    let unique_labels: Vec<(usize, Label)> = unique
        .par_iter()
        .map(|&i| {
            let others: Vec<&[f64]> = unique
                .iter()
                .filter(|&&j| j != i)
                .map(|&j| ds.point(j))
                .collect();
            let extreme =
                others.is_empty() || membership_test(&others, ds.point(i), cfg)?.delta > tol;
            let label = if extreme {
                Label::ExtremeEfficient
            } else if strict_dominance(&all_points, ds.point(i), cfg)? > tol {
                Label::Interior
            } else {
                Label::BoundaryNonextreme
            };
            Ok((i, label))
        })
        .collect::<Result<_>>()?;
    let mut labels = vec![Label::Interior; n];
    for (i, label) in unique_labels {
        labels[i] = label;
    }
    for i in 0..n {
        if rep[i] != i {
            labels[i] = match labels[rep[i]] {
                Label::Interior => Label::Interior,
                _ => Label::BoundaryNonextreme,
            };
        }
    }

    let scores: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| models::output_oriented_score(&all, ds, i, false, cfg).map(|s| s.phi))
        .collect::<Result<_>>()?;

    let frame: Vec<usize> = (0..n)
        .filter(|&i| labels[i] == Label::ExtremeEfficient)
        .collect();
    let boundary: Vec<usize> = (0..n).filter(|&i| labels[i] != Label::Interior).collect();
    // One membership LP per unique point (none for a lone point), one t-LP per
    // nonextreme unique point, one score LP per DMU.
    let nonextreme_unique = unique
        .iter()
        .filter(|&&i| labels[i] != Label::ExtremeEfficient)
        .count();
    let lp_count = if unique.len() > 1 { unique.len() } else { 0 } + nonextreme_unique + n;
    Ok(ClassificationReport {
        density: frame.len() as f64 / n as f64,
        labels,
        scores,
        frame,
        boundary,
        lp_count,
    })
}
