//! The three envelopment LPs used by the frame procedures.
//!
//! * hull membership with a separation certificate (`min delta`),
//! * output-oriented VRS scoring, optionally deleted-domain (`max phi`),
//! * strict dominance (`max t`), the interiority test.

use crate::config::SolveConfig;
use crate::error::{DeaError, Result};
use crate::lp::{dot, DenseMatrix, LinearProgram, LpSolution, LpStatus, Relation, Sense};

use super::Dataset;

#[derive(Debug, Clone, PartialEq)]
pub struct MembershipResult {
    /// Uniform-direction distance from the partial hull to the test point.
    pub delta: f64,
    /// Convex weights over the generators, in generator order.
    pub lambda: Vec<f64>,
    /// Hyperplane normal: duals of the coverage rows.
    pub pi: Vec<f64>,
    /// Hyperplane offset: dual of the convexity row.
    pub beta: f64,
    pub is_member: bool,
}

impl MembershipResult {
    /// `pi · a + beta`.
    pub fn separation(&self, a: &[f64]) -> f64 {
        dot(&self.pi, a) + self.beta
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreResult {
    /// Output-oriented VRS score; `NaN` when infeasible.
    pub phi: f64,
    pub lambda: Vec<f64>,
    pub feasible: bool,
}

/// Step-3 style classification of a point against a reference hull.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HullPosition {
    /// Outside the hull. `phi` is `None` when the input vector is unreachable.
    Exterior { phi: Option<f64> },
    /// Inside or on the boundary; `phi > 1` interior, `phi = 1` boundary.
    InHull { phi: f64 },
}

impl HullPosition {
    pub fn is_exterior(&self) -> bool {
        matches!(self, HullPosition::Exterior { .. })
    }
}

/// `min delta  s.t.  sum a^i lambda_i + e delta >= b,  sum lambda = 1,  lambda, delta >= 0`.
///
/// Variables are the `lambda` columns in generator order followed by `delta`.
pub fn build_membership_lp(generators: &[&[f64]], b: &[f64]) -> LinearProgram {
    let m = b.len();
    let k = generators.len();
    let matrix = DenseMatrix::from_columns(m + 1, k + 1, |j, col| {
        if j < k {
            col[..m].copy_from_slice(generators[j]);
            col[m] = 1.0;
        } else {
            col[..m].iter_mut().for_each(|v| *v = 1.0);
            col[m] = 0.0;
        }
    });
    let mut objective = vec![0.0; k + 1];
    objective[k] = 1.0;
    let mut relations = vec![Relation::Ge; m];
    relations.push(Relation::Eq);
    let mut rhs = b.to_vec();
    rhs.push(1.0);
    LinearProgram::with_constraints(Sense::Min, objective, matrix, relations, rhs)
}

/// Tests whether `b` lies in the VRS hull of `generators` and returns the
/// separating hyperplane `(pi, beta)` read off the duals.
pub fn membership_test(
    generators: &[&[f64]],
    b: &[f64],
    cfg: &SolveConfig,
) -> Result<MembershipResult> {
    if generators.is_empty() {
        return Err(DeaError::Contract(
            "membership test needs at least one generator".into(),
        ));
    }
    let m = b.len();
    let lp = build_membership_lp(generators, b);
    let sol = cfg.solver().solve(&lp, cfg.algorithm)?;
    if sol.status != LpStatus::Optimal {
        return Err(DeaError::Internal(format!(
            "membership LP reported {:?}",
            sol.status
        )));
    }
    let k = generators.len();
    let delta = sol.objective_value.max(0.0);
    Ok(MembershipResult {
        delta,
        lambda: sol.primal[..k].to_vec(),
        pi: sol.dual[..m].to_vec(),
        beta: sol.dual[m],
        is_member: delta <= cfg.member_tol(),
    })
}

/// `max phi  s.t.  sum X_j lambda_j <= X_t,  sum Y_j lambda_j >= phi Y_t,  sum lambda = 1`.
///
/// With `deleted_domain = false` the target must be one of the reference
/// DMUs; with `true` it must not be.
pub fn build_output_oriented_vrs(
    reference: &[usize],
    ds: &Dataset,
    target: usize,
    deleted_domain: bool,
) -> Result<LinearProgram> {
    if reference.is_empty() {
        return Err(DeaError::Contract("reference set is empty".into()));
    }
    let contains = reference.contains(&target);
    if deleted_domain && contains {
        return Err(DeaError::Contract(format!(
            "deleted-domain model with DMU {target} in its own reference"
        )));
    }
    if !deleted_domain && !contains {
        return Err(DeaError::Contract(format!(
            "DMU {target} must be in the reference set"
        )));
    }
    let (m1, m2) = (ds.m1(), ds.m2());
    let k = reference.len();
    let yt = ds.output(target);
    let matrix = DenseMatrix::from_columns(m1 + m2 + 1, k + 1, |j, col| {
        if j < k {
            let r = reference[j];
            col[..m1].copy_from_slice(ds.input(r));
            col[m1..m1 + m2].copy_from_slice(ds.output(r));
            col[m1 + m2] = 1.0;
        } else {
            col[..m1].iter_mut().for_each(|v| *v = 0.0);
            for (c, y) in col[m1..m1 + m2].iter_mut().zip(yt) {
                *c = -y;
            }
            col[m1 + m2] = 0.0;
        }
    });
    let mut objective = vec![0.0; k + 1];
    objective[k] = 1.0;
    let relations: Vec<Relation> = std::iter::repeat_n(Relation::Le, m1)
        .chain(std::iter::repeat_n(Relation::Ge, m2))
        .chain([Relation::Eq])
        .collect();
    let rhs: Vec<f64> = ds
        .input(target)
        .iter()
        .copied()
        .chain(std::iter::repeat_n(0.0, m2))
        .chain([1.0])
        .collect();
    Ok(LinearProgram::with_constraints(
        Sense::Max,
        objective,
        matrix,
        relations,
        rhs,
    ))
}

pub fn output_oriented_score(
    reference: &[usize],
    ds: &Dataset,
    target: usize,
    deleted_domain: bool,
    cfg: &SolveConfig,
) -> Result<ScoreResult> {
    let lp = build_output_oriented_vrs(reference, ds, target, deleted_domain)?;
    let sol = cfg.solver().solve(&lp, cfg.algorithm)?;
    score_from(&sol, reference.len())
}

fn score_from(sol: &LpSolution, k: usize) -> Result<ScoreResult> {
    match sol.status {
        LpStatus::Optimal => Ok(ScoreResult {
            phi: sol.objective_value,
            lambda: sol.primal[..k].to_vec(),
            feasible: true,
        }),
        LpStatus::Infeasible => Ok(ScoreResult {
            phi: f64::NAN,
            lambda: vec![0.0; k],
            feasible: false,
        }),
        LpStatus::Unbounded => Err(DeaError::Internal(
            "output-oriented LP reported unbounded".into(),
        )),
    }
}

/// Classifies a DMU outside `reference` against `vrs(reference)` with the
/// deleted-domain output-oriented model. Infeasibility means exterior.
pub fn exterior_test(
    reference: &[usize],
    ds: &Dataset,
    target: usize,
    cfg: &SolveConfig,
) -> Result<HullPosition> {
    let score = output_oriented_score(reference, ds, target, true, cfg)?;
    Ok(if !score.feasible {
        HullPosition::Exterior { phi: None }
    } else if score.phi < 1.0 - cfg.tolerances.gap {
        HullPosition::Exterior {
            phi: Some(score.phi),
        }
    } else {
        HullPosition::InHull { phi: score.phi }
    })
}

/// `max t  s.t.  sum a^j lambda_j >= a_target + t e,  sum lambda = 1,  t free`.
pub fn build_strict_dominance_lp(reference: &[&[f64]], target: &[f64]) -> LinearProgram {
    let m = target.len();
    let k = reference.len();
    let matrix = DenseMatrix::from_columns(m + 1, k + 1, |j, col| {
        if j < k {
            col[..m].copy_from_slice(reference[j]);
            col[m] = 1.0;
        } else {
            col[..m].iter_mut().for_each(|v| *v = -1.0);
            col[m] = 0.0;
        }
    });
    let mut objective = vec![0.0; k + 1];
    objective[k] = 1.0;
    let mut relations = vec![Relation::Ge; m];
    relations.push(Relation::Eq);
    let mut rhs = target.to_vec();
    rhs.push(1.0);
    let mut lp = LinearProgram::with_constraints(Sense::Max, objective, matrix, relations, rhs);
    lp.set_bounds(k, f64::NEG_INFINITY, f64::INFINITY);
    lp
}

/// Largest uniform improvement `t*` of `target` inside `vrs(reference)`.
/// The target is interior exactly when `t* > member_tol`.
pub fn strict_dominance(reference: &[&[f64]], target: &[f64], cfg: &SolveConfig) -> Result<f64> {
    if reference.is_empty() {
        return Err(DeaError::Contract("reference set is empty".into()));
    }
    let lp = build_strict_dominance_lp(reference, target);
    let sol = cfg.solver().solve(&lp, cfg.algorithm)?;
    match sol.status {
        LpStatus::Optimal => Ok(sol.objective_value),
        // Without the target in the reference the LP never goes unbounded,
        // but it can be infeasible only if the reference is empty.
        status => Err(DeaError::Internal(format!(
            "strict-dominance LP reported {status:?}"
        ))),
    }
}

/// Boundary test used by the EHD steps: `phi* <= 1 + tol`, or failing that
/// no strictly dominating hull point. Returns `(on_boundary, ran_dominance_lp)`.
pub fn on_boundary(
    reference: &[usize],
    ds: &Dataset,
    target: usize,
    cfg: &SolveConfig,
) -> Result<(bool, bool)> {
    let score = output_oriented_score(reference, ds, target, false, cfg)?;
    if !score.feasible {
        return Err(DeaError::Internal(format!(
            "self-evaluation of DMU {target} infeasible"
        )));
    }
    if score.phi <= 1.0 + cfg.member_tol() {
        return Ok((true, false));
    }
    let points: Vec<&[f64]> = ds.points(reference).collect();
    let t = strict_dominance(&points, ds.point(target), cfg)?;
    Ok((t <= cfg.member_tol(), true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dea::fixtures::{dea5, A, B, C, D, E};
    use crate::lp::Algorithm;

    fn cfgs() -> [SolveConfig; 2] {
        [
            SolveConfig::with_algorithm(Algorithm::Primal),
            SolveConfig::with_algorithm(Algorithm::Dual),
        ]
    }

    /// delta* for generators {A, C} and b = B by direct line search: with
    /// lambda_C = s, the combination is (-1 - 3s, 1 + 3s), so
    /// delta(s) = max(3s - 1, 2 - 3s, 0). Minimized on a fine grid.
    fn delta_line_search() -> f64 {
        (0..=30_000)
            .map(|k| {
                let s = k as f64 / 30_000.0;
                (3.0 * s - 1.0).max(2.0 - 3.0 * s).max(0.0)
            })
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn membership_point_against_itself() {
        for cfg in cfgs() {
            let p = [-1.0, 1.0];
            let r = membership_test(&[&p], &p, &cfg).unwrap();
            assert!(r.is_member);
            assert!(r.delta.abs() < 1e-12);
            let lp = build_membership_lp(&[&p], &p);
            assert_eq!(lp.num_vars(), 2);
        }
    }

    #[test]
    fn membership_segment_gap() {
        let ds = dea5();
        let expected = delta_line_search();
        assert!((expected - 0.5).abs() < 1e-9);
        for cfg in cfgs() {
            let gens = [ds.point(A), ds.point(C)];
            let r = membership_test(&gens, ds.point(B), &cfg).unwrap();
            assert!(!r.is_member);
            assert!((r.delta - expected).abs() < 1e-9, "{}", r.delta);
            assert!(r.separation(ds.point(A)) <= 1e-9);
            assert!(r.separation(ds.point(C)) <= 1e-9);
            assert!((r.separation(ds.point(B)) - 0.5).abs() < 1e-9);
            assert!(r.pi.iter().all(|&p| p >= -1e-12));
        }
    }

    #[test]
    fn membership_of_dominated_points() {
        let ds = dea5();
        for cfg in cfgs() {
            let gens = [ds.point(A), ds.point(B), ds.point(C)];
            for t in [D, E] {
                let r = membership_test(&gens, ds.point(t), &cfg).unwrap();
                assert!(r.is_member, "DMU {t}");
                assert!((r.lambda.iter().sum::<f64>() - 1.0).abs() < 1e-9);
                assert!(r.lambda.iter().all(|&l| l >= -1e-12));
            }
        }
    }

    #[test]
    fn membership_needs_generators() {
        let cfg = SolveConfig::default();
        assert!(matches!(
            membership_test(&[], &[1.0], &cfg),
            Err(DeaError::Contract(_))
        ));
    }

    #[test]
    fn output_oriented_scores() {
        let ds = dea5();
        for cfg in cfgs() {
            let s = output_oriented_score(&[D], &ds, D, false, &cfg).unwrap();
            assert!((s.phi - 1.0).abs() < 1e-9);
            // Frontier B-C at x = 3 is y = 3.5; at x = 2 it is y = 3.
            let s = output_oriented_score(&[A, B, C, D], &ds, D, false, &cfg).unwrap();
            assert!((s.phi - 1.75).abs() < 1e-9);
            let s = output_oriented_score(&[A, B, C], &ds, E, true, &cfg).unwrap();
            assert!((s.phi - 3.0).abs() < 1e-9);
            assert!((s.lambda.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            let lp = build_output_oriented_vrs(&[A, B, C], &ds, D, true).unwrap();
            assert_eq!(lp.num_vars(), 4);
        }
    }

    #[test]
    fn output_oriented_contracts() {
        let ds = dea5();
        assert!(matches!(
            build_output_oriented_vrs(&[A, B], &ds, A, true),
            Err(DeaError::Contract(_))
        ));
        assert!(matches!(
            build_output_oriented_vrs(&[A, B], &ds, C, false),
            Err(DeaError::Contract(_))
        ));
        assert!(matches!(
            build_output_oriented_vrs(&[], &ds, C, true),
            Err(DeaError::Contract(_))
        ));
    }

    #[test]
    fn exterior_classification() {
        let ds = dea5();
        for cfg in cfgs() {
            // At x = 2 the segment A-C reaches y = 2 < 3, so phi = 2/3.
            match exterior_test(&[A, C], &ds, B, &cfg).unwrap() {
                HullPosition::Exterior { phi: Some(phi) } => {
                    assert!((phi - 2.0 / 3.0).abs() < 1e-9)
                }
                other => panic!("expected exterior, got {other:?}"),
            }
            match exterior_test(&[A, B, C], &ds, E, &cfg).unwrap() {
                HullPosition::InHull { phi } => assert!((phi - 3.0).abs() < 1e-9),
                other => panic!("{other:?}"),
            }
            match exterior_test(&[B], &ds, E, &cfg).unwrap() {
                HullPosition::InHull { phi } => assert!(phi > 1.0),
                other => panic!("{other:?}"),
            }
            // A uses less input than anything in {B, C}: the input row is unreachable.
            assert_eq!(
                exterior_test(&[B, C], &ds, A, &cfg).unwrap(),
                HullPosition::Exterior { phi: None }
            );
        }
    }

    #[test]
    fn strict_dominance_values() {
        let ds = dea5();
        let all: Vec<&[f64]> = ds.points(&[A, B, C, D, E]).collect();
        for cfg in cfgs() {
            for f in [A, B, C] {
                let t = strict_dominance(&all, ds.point(f), &cfg).unwrap();
                assert!(t.abs() < 1e-9, "frame DMU {f}: t = {t}");
            }
            for i in [D, E] {
                assert!(strict_dominance(&all, ds.point(i), &cfg).unwrap() > 0.1);
            }
            let (boundary, _) = on_boundary(&[A, C, E], &ds, E, &cfg).unwrap();
            assert!(!boundary);
        }
    }

    #[test]
    fn weakly_efficient_point_is_boundary() {
        // (1, 0.5) sits on the vertical ray below A: phi = 2 but it is not
        // strictly dominated because no hull point uses less input.
        let mut rows: Vec<Vec<f64>> = (0..5).map(|i| dea5().row(i)).collect();
        rows.push(vec![1.0, 0.5]);
        let ds = Dataset::from_rows("weak", 1, &rows).unwrap();
        let cfg = SolveConfig::default();
        let all: Vec<usize> = (0..6).collect();
        let s = output_oriented_score(&all, &ds, 5, false, &cfg).unwrap();
        assert!((s.phi - 2.0).abs() < 1e-9);
        assert_eq!(on_boundary(&all, &ds, 5, &cfg).unwrap(), (true, true));
    }
}
