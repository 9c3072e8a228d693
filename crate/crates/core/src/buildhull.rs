//! Incremental frame construction by hull membership tests and hyperplane
//! translation.

use std::cmp::Ordering;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::config::SolveConfig;
use crate::dea::{membership_test, Dataset, MembershipResult};
use crate::error::{DeaError, Result};
use crate::lp::dot;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameResult {
    /// Extreme-efficient DMUs, ascending.
    pub frame: Vec<usize>,
    pub m_hat: usize,
    pub lp_count: usize,
    /// Lambda columns of each membership LP, in solve order.
    pub lp_sizes: Vec<usize>,
    pub avg_lp_size: f64,
    pub hyperplane_translations: usize,
    pub inner_products: u64,
    /// Seconds spent scanning candidates during translations.
    pub translation_time: f64,
    pub wall_time: f64,
}

/// What happened to the test point at the front of the queue.
#[derive(Debug)]
pub enum HullEvent<'a> {
    Member {
        test: usize,
        frame: &'a [usize],
    },
    /// `frame` already contains `admitted`.
    Exterior {
        test: usize,
        admitted: usize,
        certificate: &'a MembershipResult,
        frame: &'a [usize],
    },
}

/// Admits the candidate maximizing `pi · a`. Exact ties go to the
/// lexicographically larger point, then to the lower index.
pub fn translate_hyperplane(
    pi: &[f64],
    beta: f64,
    candidates: &[(usize, &[f64])],
) -> Result<usize> {
    let mut best: Option<(usize, &[f64], f64)> = None;
    for &(i, a) in candidates {
        let v = dot(pi, a);
        let better = match best {
            None => true,
            Some((bi, ba, bv)) => match v.total_cmp(&bv) {
                Ordering::Greater => true,
                Ordering::Less => false,
                Ordering::Equal => match lex_cmp(a, ba) {
                    Ordering::Greater => true,
                    Ordering::Less => false,
                    Ordering::Equal => i < bi,
                },
            },
        };
        if better {
            best = Some((i, a, v));
        }
    }
    match best {
        Some((i, _, v)) if v + beta > 0.0 => Ok(i),
        Some((_, _, v)) => Err(DeaError::Internal(format!(
            "separating hyperplane exposes no point (max {})",
            v + beta
        ))),
        None => Err(DeaError::Contract(
            "hyperplane translation without candidates".into(),
        )),
    }
}

fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

fn validate(ds: &Dataset, init_frame: &[usize], order: &[usize]) -> Result<()> {
    let n = ds.n();
    if init_frame.is_empty() {
        return Err(DeaError::Contract("initial frame is empty".into()));
    }
    let mut seen = vec![false; n];
    for &i in init_frame.iter().chain(order) {
        if i >= n || seen[i] {
            return Err(DeaError::Contract(format!(
                "DMU {i} repeated or out of range"
            )));
        }
        seen[i] = true;
    }
    if init_frame.len() + order.len() != n {
        return Err(DeaError::Contract(
            "order must cover every DMU outside the initial frame".into(),
        ));
    }
    Ok(())
}

/// Each initial frame point must be exterior to the hull of the other DMUs.
/// Costs `|init_frame|` full-size LPs, so it only runs in debug builds.
fn check_init_frame(ds: &Dataset, init_frame: &[usize], cfg: &SolveConfig) -> Result<()> {
    for &f in init_frame {
        let others: Vec<&[f64]> = (0..ds.n())
            .filter(|&j| ds.point(j) != ds.point(f))
            .map(|j| ds.point(j))
            .collect();
        if !others.is_empty()
            && membership_test(&others, ds.point(f), cfg)?.delta <= cfg.member_tol()
        {
            return Err(DeaError::Contract(format!(
                "initial frame DMU {f} is not extreme"
            )));
        }
    }
    Ok(())
}

pub fn build_hull(
    ds: &Dataset,
    init_frame: &[usize],
    order: &[usize],
    cfg: &SolveConfig,
) -> Result<FrameResult> {
    build_hull_observed(ds, init_frame, order, cfg, |_| {})
}

/// `build_hull` with a callback after every membership test.
pub fn build_hull_observed(
    ds: &Dataset,
    init_frame: &[usize],
    order: &[usize],
    cfg: &SolveConfig,
    mut observer: impl FnMut(&HullEvent<'_>),
) -> Result<FrameResult> {
    validate(ds, init_frame, order)?;
    if cfg!(debug_assertions) {
        check_init_frame(ds, init_frame, cfg)?;
    }

    let start = Instant::now();
    let mut frame: Vec<usize> = init_frame.to_vec();
    let mut generators: Vec<&[f64]> = ds.points(init_frame).collect();
    let mut removed = vec![false; order.len()];
    let mut front = 0;
    let mut lp_sizes = Vec::with_capacity(order.len());
    let mut translations = 0;
    let mut inner_products = 0u64;
    let mut translation_time = 0.0;
    let mut candidates: Vec<(usize, &[f64])> = Vec::new();
    let mut slot_of = vec![usize::MAX; ds.n()];
    for (k, &i) in order.iter().enumerate() {
        slot_of[i] = k;
    }

    while front < order.len() {
        if removed[front] {
            front += 1;
            continue;
        }
        let b = order[front];
        lp_sizes.push(generators.len());
        let cert = membership_test(&generators, ds.point(b), cfg)?;
        if cert.is_member {
            removed[front] = true;
            front += 1;
            observer(&HullEvent::Member {
                test: b,
                frame: &frame,
            });
            continue;
        }

        let t0 = Instant::now();
        candidates.clear();
        candidates.extend(
            (front..order.len())
                .filter(|&k| !removed[k])
                .map(|k| (order[k], ds.point(order[k]))),
        );
        inner_products += candidates.len() as u64;
        let admitted = translate_hyperplane(&cert.pi, cert.beta, &candidates)?;
        translation_time += t0.elapsed().as_secs_f64();

        removed[slot_of[admitted]] = true;
        frame.push(admitted);
        generators.push(ds.point(admitted));
        translations += 1;
        observer(&HullEvent::Exterior {
            test: b,
            admitted,
            certificate: &cert,
            frame: &frame,
        });
    }

    let lp_count = lp_sizes.len();
    let avg_lp_size = if lp_count == 0 {
        0.0
    } else {
        lp_sizes.iter().sum::<usize>() as f64 / lp_count as f64
    };
    frame.sort_unstable();
    Ok(FrameResult {
        frame,
        m_hat: init_frame.len(),
        lp_count,
        lp_sizes,
        avg_lp_size,
        hyperplane_translations: translations,
        inner_products,
        translation_time,
        wall_time: start.elapsed().as_secs_f64(),
    })
}
