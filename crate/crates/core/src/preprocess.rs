//! LP-free preprocessing shared by both frame procedures.

use std::cmp::Ordering;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::dea::Dataset;
use crate::error::{DeaError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreprocessorOutput {
    /// Extreme-efficient DMUs found without solving an LP, ascending.
    pub extreme_seed: Vec<usize>,
    pub prescores: Vec<f64>,
    pub m_hat: usize,
    /// Seconds spent in `dimension_sort` and `prescore`.
    pub time: f64,
}

pub fn preprocess(ds: &Dataset) -> PreprocessorOutput {
    let start = Instant::now();
    let extreme_seed = dimension_sort(ds);
    let prescores = prescore(ds);
    PreprocessorOutput {
        m_hat: extreme_seed.len(),
        extreme_seed,
        prescores,
        time: start.elapsed().as_secs_f64(),
    }
}

/// Orders DMUs by translated coordinate `k`, falling back to the other
/// coordinates in index order.
fn lex_cmp_from(a: &[f64], b: &[f64], k: usize) -> Ordering {
    std::iter::once(k)
        .chain((0..a.len()).filter(|&j| j != k))
        .map(|j| a[j].total_cmp(&b[j]))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// For every translated coordinate, the DMU maximizing it (lexicographic
/// tie-break over the remaining coordinates, then lowest index). Returns the
/// distinct union ascending.
pub fn dimension_sort(ds: &Dataset) -> Vec<usize> {
    let mut seed: Vec<usize> = (0..ds.m())
        .map(|k| {
            (1..ds.n()).fold(0, |best, i| {
                match lex_cmp_from(ds.point(i), ds.point(best), k) {
                    Ordering::Greater => i,
                    _ => best,
                }
            })
        })
        .collect();
    seed.sort_unstable();
    seed.dedup();
    seed
}

/// Ascending fractional ranks in `1..=n`, ties sharing their average rank.
pub fn fractional_ranks(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; n];
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // Positions start..end hold ranks start+1..=end.
        let avg = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = avg;
        }
        start = end;
    }
    ranks
}

/// Quantile-rank closeness to the frontier: small inputs and large outputs
/// score high. Values lie in `[0, 1]`.
pub fn prescore(ds: &Dataset) -> Vec<f64> {
    let n = ds.n();
    let nf = n as f64;
    let mut score = vec![0.0; n];
    for r in 0..ds.m1() {
        let col: Vec<f64> = (0..n).map(|i| ds.input(i)[r]).collect();
        for (s, rank) in score.iter_mut().zip(fractional_ranks(&col)) {
            *s += 1.0 - rank / nf;
        }
    }
    for r in 0..ds.m2() {
        let col: Vec<f64> = (0..n).map(|i| ds.output(i)[r]).collect();
        for (s, rank) in score.iter_mut().zip(fractional_ranks(&col)) {
            *s += rank / nf;
        }
    }
    let m = ds.m() as f64;
    score.iter_mut().for_each(|s| *s /= m);
    score
}

/// `ceil(sqrt(n))`, computed exactly.
pub fn initial_subset_size(n: usize) -> usize {
    let mut p = (n as f64).sqrt() as usize;
    while p * p < n {
        p += 1;
    }
    while p > 0 && (p - 1) * (p - 1) >= n {
        p -= 1;
    }
    p
}

/// The seed plus the `p - m_hat` highest-prescore remaining DMUs, ascending.
pub fn select_initial_subset(n: usize, p: usize, prep: &PreprocessorOutput) -> Result<Vec<usize>> {
    if p < prep.m_hat || p > n {
        return Err(DeaError::Contract(format!(
            "subset size {p} outside [{}, {n}]",
            prep.m_hat
        )));
    }
    let mut in_seed = vec![false; n];
    for &i in &prep.extreme_seed {
        in_seed[i] = true;
    }
    let mut rest: Vec<usize> = (0..n).filter(|&i| !in_seed[i]).collect();
    rest.sort_by(|&a, &b| {
        prep.prescores[b]
            .total_cmp(&prep.prescores[a])
            .then(a.cmp(&b))
    });
    let mut subset: Vec<usize> = prep
        .extreme_seed
        .iter()
        .copied()
        .chain(rest.into_iter().take(p - prep.m_hat))
        .collect();
    subset.sort_unstable();
    Ok(subset)
}

/// Non-seed DMUs by ascending prescore, ties by index.
pub fn ascending_prescore_order(prep: &PreprocessorOutput) -> Vec<usize> {
    let n = prep.prescores.len();
    let mut in_seed = vec![false; n];
    for &i in &prep.extreme_seed {
        in_seed[i] = true;
    }
    let mut order: Vec<usize> = (0..n).filter(|&i| !in_seed[i]).collect();
    order.sort_by(|&a, &b| {
        prep.prescores[a]
            .total_cmp(&prep.prescores[b])
            .then(a.cmp(&b))
    });
    order
}
