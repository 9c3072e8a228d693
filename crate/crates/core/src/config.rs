use serde::{Deserialize, Serialize};

use crate::lp::{self, Algorithm, PivotRule, Solver, SolverOptions};

/// Numerical thresholds shared by the solver and the classification rules.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub feas: f64,
    pub gap: f64,
    pub pivot: f64,
    /// Threshold on `delta`, `phi - 1` and `t` for membership and boundary labels.
    pub member: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            feas: lp::FEAS_TOL,
            gap: lp::GAP_TOL,
            pivot: lp::PIVOT_TOL,
            member: 1e-6,
        }
    }
}

/// How every LP in a procedure run is solved.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct SolveConfig {
    pub tolerances: Tolerances,
    pub algorithm: Algorithm,
    pub pivot_rule: PivotRule,
}

impl SolveConfig {
    pub fn with_algorithm(algorithm: Algorithm) -> Self {
        Self {
            algorithm,
            ..Default::default()
        }
    }

    pub fn solver(&self) -> Solver {
        Solver::new(SolverOptions {
            feas_tol: self.tolerances.feas,
            gap_tol: self.tolerances.gap,
            pivot_tol: self.tolerances.pivot,
            pivot_rule: self.pivot_rule,
            ..Default::default()
        })
    }

    pub fn member_tol(&self) -> f64 {
        self.tolerances.member
    }
}
