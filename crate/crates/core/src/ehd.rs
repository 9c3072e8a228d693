//! Boundary identification by hierarchical decomposition: classify a small
//! subset, use its boundary to filter the rest, then finish on the survivors.

use std::collections::HashMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::config::SolveConfig;
use crate::dea::{exterior_test, models, Dataset, HullPosition};
use crate::error::{DeaError, Result};
use crate::preprocess::{select_initial_subset, PreprocessorOutput};

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct StepMetrics {
    /// Lambda columns per LP; every LP in a step has the same size.
    pub lp_size: usize,
    pub lp_count: usize,
    /// Strict-dominance LPs solved to separate weak efficiency from interiority.
    pub aux_lp_count: usize,
    pub time: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct EhdOptions {
    /// Add the Step-3 points found on the partial boundary to the Step-4 pool.
    pub include_partial_boundary: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EhdResult {
    pub boundary: Vec<usize>,
    pub a_s: Vec<usize>,
    pub b_s: Vec<usize>,
    pub ext_b_s: Vec<usize>,
    pub discarded_step2: Vec<usize>,
    pub interior_found: Vec<usize>,
    pub partial_boundary_found: Vec<usize>,
    /// Interior points removed before Step 4.
    pub productivity: usize,
    pub m_hat: usize,
    pub step2: StepMetrics,
    pub step3: StepMetrics,
    pub step4: StepMetrics,
    pub total_lp_count: usize,
    pub wall_time: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Step2Output {
    pub b_s: Vec<usize>,
    pub discarded: Vec<usize>,
    pub metrics: StepMetrics,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Step3Output {
    pub ext_b_s: Vec<usize>,
    pub interior_found: Vec<usize>,
    pub partial_boundary_found: Vec<usize>,
    pub metrics: StepMetrics,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Step4Output {
    pub boundary: Vec<usize>,
    pub pool: Vec<usize>,
    pub metrics: StepMetrics,
}

/// Members of `set` with an identical point earlier in `set`.
fn later_twins(ds: &Dataset, set: &[usize]) -> Vec<bool> {
    let mut seen: HashMap<Vec<u64>, ()> = HashMap::with_capacity(set.len());
    set.iter()
        .map(|&i| {
            let key: Vec<u64> = ds.point(i).iter().map(|v| (v + 0.0).to_bits()).collect();
            seen.insert(key, ()).is_some()
        })
        .collect()
}

fn membership_mask(n: usize, set: &[usize]) -> Vec<bool> {
    let mut mask = vec![false; n];
    for &i in set {
        mask[i] = true;
    }
    mask
}

/// Boundary points of `vrs(reference)` among `reference` itself. Seeds are
/// boundary without an LP; a repeated point is never boundary.
fn boundary_within(
    ds: &Dataset,
    reference: &[usize],
    seed: &[bool],
    cfg: &SolveConfig,
) -> Result<(Vec<usize>, Vec<usize>, StepMetrics)> {
    let start = Instant::now();
    let twins = later_twins(ds, reference);
    let mut metrics = StepMetrics {
        lp_size: reference.len(),
        ..Default::default()
    };
    let (mut boundary, mut rest) = (Vec::new(), Vec::new());
    for (k, &i) in reference.iter().enumerate() {
        if seed[i] {
            boundary.push(i);
            continue;
        }
        let (on, aux) = models::on_boundary(reference, ds, i, cfg)?;
        metrics.lp_count += 1;
        metrics.aux_lp_count += aux as usize;
        if on && !twins[k] {
            boundary.push(i);
        } else {
            rest.push(i);
        }
    }
    metrics.time = start.elapsed().as_secs_f64();
    Ok((boundary, rest, metrics))
}

pub fn step2_boundary_of_subset(
    ds: &Dataset,
    a_s: &[usize],
    extreme_seed: &[usize],
    cfg: &SolveConfig,
) -> Result<Step2Output> {
    let seed = membership_mask(ds.n(), extreme_seed);
    let in_subset = membership_mask(ds.n(), a_s);
    if extreme_seed.iter().any(|&i| !in_subset[i]) {
        return Err(DeaError::Contract(
            "extreme seed must lie inside the initial subset".into(),
        ));
    }
    let (b_s, discarded, metrics) = boundary_within(ds, a_s, &seed, cfg)?;
    Ok(Step2Output {
        b_s,
        discarded,
        metrics,
    })
}

/// Deleted-domain classification of every DMU outside `a_s` against `vrs(b_s)`.
pub fn step3_exterior_partition(
    ds: &Dataset,
    a_s: &[usize],
    b_s: &[usize],
    cfg: &SolveConfig,
) -> Result<Step3Output> {
    if b_s.is_empty() {
        return Err(DeaError::Contract(
            "Step 3 needs a non-empty reference".into(),
        ));
    }
    let start = Instant::now();
    let in_subset = membership_mask(ds.n(), a_s);
    let mut out = Step3Output {
        ext_b_s: Vec::new(),
        interior_found: Vec::new(),
        partial_boundary_found: Vec::new(),
        metrics: StepMetrics {
            lp_size: b_s.len(),
            ..Default::default()
        },
    };
    for i in (0..ds.n()).filter(|&i| !in_subset[i]) {
        out.metrics.lp_count += 1;
        match exterior_test(b_s, ds, i, cfg)? {
            HullPosition::Exterior { .. } => out.ext_b_s.push(i),
            HullPosition::InHull { phi } if phi > 1.0 + cfg.member_tol() => {
                out.interior_found.push(i)
            }
            HullPosition::InHull { .. } => out.partial_boundary_found.push(i),
        }
    }
    out.metrics.time = start.elapsed().as_secs_f64();
    Ok(out)
}

pub fn step4_final_boundary(
    ds: &Dataset,
    b_s: &[usize],
    step3: &Step3Output,
    extreme_seed: &[usize],
    options: &EhdOptions,
    cfg: &SolveConfig,
) -> Result<Step4Output> {
    let mut pool: Vec<usize> = b_s.iter().chain(&step3.ext_b_s).copied().collect();
    if options.include_partial_boundary {
        pool.extend_from_slice(&step3.partial_boundary_found);
    }
    pool.sort_unstable();
    let seed = membership_mask(ds.n(), extreme_seed);
    let (boundary, _, metrics) = boundary_within(ds, &pool, &seed, cfg)?;
    Ok(Step4Output {
        boundary,
        pool,
        metrics,
    })
}

pub fn run_ehd(
    ds: &Dataset,
    p: usize,
    prep: &PreprocessorOutput,
    cfg: &SolveConfig,
) -> Result<EhdResult> {
    run_ehd_with(ds, p, prep, &EhdOptions::default(), cfg)
}

pub fn run_ehd_with(
    ds: &Dataset,
    p: usize,
    prep: &PreprocessorOutput,
    options: &EhdOptions,
    cfg: &SolveConfig,
) -> Result<EhdResult> {
    let start = Instant::now();
    let a_s = select_initial_subset(ds.n(), p, prep)?;
    let s2 = step2_boundary_of_subset(ds, &a_s, &prep.extreme_seed, cfg)?;
    let s3 = step3_exterior_partition(ds, &a_s, &s2.b_s, cfg)?;
    let s4 = step4_final_boundary(ds, &s2.b_s, &s3, &prep.extreme_seed, options, cfg)?;
    let total_lp_count = s2.metrics.lp_count + s3.metrics.lp_count + s4.metrics.lp_count;
    Ok(EhdResult {
        boundary: s4.boundary,
        productivity: s2.discarded.len() + s3.interior_found.len(),
        a_s,
        b_s: s2.b_s,
        ext_b_s: s3.ext_b_s,
        discarded_step2: s2.discarded,
        interior_found: s3.interior_found,
        partial_boundary_found: s3.partial_boundary_found,
        m_hat: prep.m_hat,
        step2: s2.metrics,
        step3: s3.metrics,
        step4: s4.metrics,
        total_lp_count,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dea::fixtures::{dea5, A, B, C, D, E};
    use crate::preprocess::preprocess;

    #[test]
    fn dea5_trace() {
        let ds = dea5();
        let prep = preprocess(&ds);
        let r = run_ehd(&ds, 3, &prep, &SolveConfig::default()).unwrap();
        assert_eq!(r.a_s, vec![A, B, C]);
        assert_eq!(r.b_s, vec![A, B, C]);
        assert!(r.ext_b_s.is_empty());
        assert_eq!(r.interior_found, vec![D, E]);
        assert_eq!(r.boundary, vec![A, B, C]);
        assert_eq!((r.step2.lp_count, r.step2.lp_size), (1, 3));
        assert_eq!((r.step3.lp_count, r.step3.lp_size), (2, 3));
        assert_eq!((r.step4.lp_count, r.step4.lp_size), (1, 3));
        assert_eq!(r.total_lp_count, 4);
        assert_eq!(r.productivity, 2);
    }

    #[test]
    fn dea5_small_subset_steps() {
        let ds = dea5();
        let cfg = SolveConfig::default();
        let seed = [A, C];
        let s2 = step2_boundary_of_subset(&ds, &[A, C, E], &seed, &cfg).unwrap();
        assert_eq!(s2.b_s, vec![A, C]);
        assert_eq!(s2.discarded, vec![E]);

        let s3 = step3_exterior_partition(&ds, &[A, C], &[A, C], &cfg).unwrap();
        assert_eq!(s3.ext_b_s, vec![B]);
        assert_eq!(s3.interior_found, vec![D, E]);
        let s4 =
            step4_final_boundary(&ds, &[A, C], &s3, &seed, &EhdOptions::default(), &cfg).unwrap();
        assert_eq!(s4.pool, vec![A, B, C]);
        assert_eq!(s4.boundary, vec![A, B, C]);
        assert_eq!(s4.metrics.lp_count, 1);
    }

    #[test]
    fn seed_only_subset() {
        let ds = dea5();
        let s2 = step2_boundary_of_subset(&ds, &[A, C], &[A, C], &SolveConfig::default()).unwrap();
        assert_eq!(s2.b_s, vec![A, C]);
        assert_eq!(s2.metrics.lp_count, 0);
        assert!(step2_boundary_of_subset(&ds, &[A], &[A, C], &SolveConfig::default()).is_err());
    }

    #[test]
    fn whole_set_as_subset() {
        let ds = dea5();
        let prep = preprocess(&ds);
        let r = run_ehd(&ds, 5, &prep, &SolveConfig::default()).unwrap();
        assert_eq!(r.step3.lp_count, 0);
        assert_eq!(r.b_s, vec![A, B, C]);
        assert_eq!(r.boundary, vec![A, B, C]);
    }

    #[test]
    fn partial_boundary_point() {
        // (2.5, 2.5) is the midpoint of A-C.
        let mut rows: Vec<Vec<f64>> = (0..5).map(|i| dea5().row(i)).collect();
        rows.push(vec![2.5, 2.5]);
        let ds = Dataset::from_rows("mid", 1, &rows).unwrap();
        let cfg = SolveConfig::default();
        let s3 = step3_exterior_partition(&ds, &[A, C], &[A, C], &cfg).unwrap();
        assert_eq!(s3.partial_boundary_found, vec![5]);
        let opts = EhdOptions {
            include_partial_boundary: true,
        };
        let s4 = step4_final_boundary(&ds, &[A, C], &s3, &[A, C], &opts, &cfg).unwrap();
        assert_eq!(s4.pool, vec![A, B, C, 5]);
        // Inside vrs({A, B, C}) the midpoint is strictly dominated.
        assert_eq!(s4.boundary, vec![A, B, C]);
    }

    #[test]
    fn repeated_point_is_not_boundary_twice() {
        let mut rows: Vec<Vec<f64>> = (0..5).map(|i| dea5().row(i)).collect();
        rows.push(vec![2.0, 3.0]);
        let ds = Dataset::from_rows("twin", 1, &rows).unwrap();
        let s2 =
            step2_boundary_of_subset(&ds, &[A, B, C, 5], &[A, C], &SolveConfig::default()).unwrap();
        assert_eq!(s2.b_s, vec![A, B, C]);
        assert_eq!(s2.discarded, vec![5]);
    }
}
