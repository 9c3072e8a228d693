#![allow(clippy::needless_range_loop)]

//! Dense bounded-variable simplex solver.
//!
//! The LPs produced by the frame procedures have few rows (one per
//! dimension plus a convexity row) and up to a few thousand columns, so the
//! solver keeps an explicit dense basis inverse and prices every column on
//! each iteration. Both a primal and a dual simplex are provided.

mod basis;
mod simplex;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use simplex::Basis;

/// Primal feasibility tolerance.
pub const FEAS_TOL: f64 = 1e-7;
/// Tolerance on the primal/dual objective gap.
pub const GAP_TOL: f64 = 1e-6;
/// Smallest pivot magnitude accepted in a ratio test.
pub const PIVOT_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("malformed linear program: {0}")]
    Malformed(String),
    #[error("iteration limit of {0} reached")]
    IterationLimit(usize),
    #[error("numerical instability: {0}")]
    NumericalInstability(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "=")]
    Eq,
}

/// Which simplex variant drives the solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    #[default]
    Primal,
    Dual,
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Algorithm::Primal => f.write_str("primal"),
            Algorithm::Dual => f.write_str("dual"),
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "primal" | "primal_simplex" => Ok(Algorithm::Primal),
            "dual" | "dual_simplex" => Ok(Algorithm::Dual),
            other => Err(format!("unknown simplex algorithm `{other}`")),
        }
    }
}

/// Entering/leaving selection rule.
///
/// `Dantzig` switches to `Bland` on its own once the stall counter passes
/// [`SolverOptions::stall_limit`] consecutive degenerate pivots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PivotRule {
    #[default]
    Dantzig,
    Bland,
}

impl std::fmt::Display for PivotRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PivotRule::Dantzig => f.write_str("dantzig"),
            PivotRule::Bland => f.write_str("bland"),
        }
    }
}

impl std::str::FromStr for PivotRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dantzig" => Ok(PivotRule::Dantzig),
            "bland" => Ok(PivotRule::Bland),
            other => Err(format!("unknown pivot rule `{other}`")),
        }
    }
}

/// Column-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, LpError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(LpError::Malformed("ragged constraint rows".into()));
        }
        let mut m = Self::zeros(nrows, ncols);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    /// Builds a matrix column by column; `column(j, out)` fills column `j`.
    pub fn from_columns(
        rows: usize,
        cols: usize,
        mut column: impl FnMut(usize, &mut [f64]),
    ) -> Self {
        let mut m = Self::zeros(rows, cols);
        for j in 0..cols {
            column(j, &mut m.data[j * rows..(j + 1) * rows]);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[col * self.rows + row]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        self.data[col * self.rows + row] = value;
    }

    #[inline]
    pub fn column(&self, col: usize) -> &[f64] {
        &self.data[col * self.rows..(col + 1) * self.rows]
    }

    pub fn row(&self, row: usize) -> Vec<f64> {
        (0..self.cols).map(|j| self.get(row, j)).collect()
    }

    /// `y^T A_j` for every column.
    pub fn transpose_mul(&self, y: &[f64]) -> Vec<f64> {
        (0..self.cols).map(|j| dot(self.column(j), y)).collect()
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// A dense LP: optimize `objective · x` subject to `A x (rel) rhs` and
/// `lower <= x <= upper`. Bounds may be infinite.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<f64>,
    pub constraints: DenseMatrix,
    pub relations: Vec<Relation>,
    pub rhs: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl LinearProgram {
    /// New LP with the given objective, no rows, and `x >= 0`.
    pub fn new(sense: Sense, objective: Vec<f64>) -> Self {
        let n = objective.len();
        Self {
            sense,
            objective,
            constraints: DenseMatrix::zeros(0, n),
            relations: Vec::new(),
            rhs: Vec::new(),
            lower: vec![0.0; n],
            upper: vec![f64::INFINITY; n],
        }
    }

    /// LP from a prebuilt constraint matrix with `x >= 0`.
    pub fn with_constraints(
        sense: Sense,
        objective: Vec<f64>,
        constraints: DenseMatrix,
        relations: Vec<Relation>,
        rhs: Vec<f64>,
    ) -> Self {
        let n = objective.len();
        Self {
            sense,
            objective,
            constraints,
            relations,
            rhs,
            lower: vec![0.0; n],
            upper: vec![f64::INFINITY; n],
        }
    }

    /// Appends a row. Intended for small hand-built LPs; the DEA builders
    /// construct the matrix column-wise instead.
    pub fn add_row(&mut self, coeffs: &[f64], relation: Relation, rhs: f64) -> Result<(), LpError> {
        if coeffs.len() != self.num_vars() {
            return Err(LpError::Malformed(format!(
                "row has {} coefficients, expected {}",
                coeffs.len(),
                self.num_vars()
            )));
        }
        let old = &self.constraints;
        let rows = old.rows() + 1;
        self.constraints = DenseMatrix::from_columns(rows, self.num_vars(), |j, col| {
            col[..rows - 1].copy_from_slice(old.column(j));
            col[rows - 1] = coeffs[j];
        });
        self.relations.push(relation);
        self.rhs.push(rhs);
        Ok(())
    }

    pub fn set_bounds(&mut self, var: usize, lower: f64, upper: f64) {
        self.lower[var] = lower;
        self.upper[var] = upper;
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rhs.len()
    }

    pub fn validate(&self) -> Result<(), LpError> {
        let n = self.num_vars();
        let m = self.num_rows();
        if self.constraints.cols() != n || self.constraints.rows() != m {
            return Err(LpError::Malformed(format!(
                "matrix is {}x{}, expected {m}x{n}",
                self.constraints.rows(),
                self.constraints.cols()
            )));
        }
        if self.relations.len() != m {
            return Err(LpError::Malformed("one relation per row required".into()));
        }
        if self.lower.len() != n || self.upper.len() != n {
            return Err(LpError::Malformed(
                "one bound pair per variable required".into(),
            ));
        }
        if self
            .objective
            .iter()
            .chain(&self.rhs)
            .chain(&self.constraints.data)
            .any(|v| !v.is_finite())
        {
            return Err(LpError::Malformed("non-finite coefficient".into()));
        }
        for j in 0..n {
            let (l, u) = (self.lower[j], self.upper[j]);
            if l.is_nan() || u.is_nan() || l == f64::INFINITY || u == f64::NEG_INFINITY || l > u {
                return Err(LpError::Malformed(format!(
                    "invalid bounds [{l}, {u}] on variable {j}"
                )));
            }
        }
        Ok(())
    }

    /// Explicit dual of `min c x, A x >= b (or <=, =), x >= 0` in the same
    /// representation. Only defined for min problems with default bounds.
    pub fn dual(&self) -> Result<LinearProgram, LpError> {
        self.validate()?;
        if self.sense != Sense::Min
            || self.lower.iter().any(|&l| l != 0.0)
            || self.upper.iter().any(|u| u.is_finite())
        {
            return Err(LpError::Malformed(
                "dual() needs a min LP with x >= 0".into(),
            ));
        }
        let (m, n) = (self.num_rows(), self.num_vars());
        // max b y  s.t.  A^T y <= c, y_i >= 0 for >= rows, <= 0 for <= rows, free for =.
        let at = DenseMatrix::from_columns(n, m, |i, col| {
            for (j, c) in col.iter_mut().enumerate() {
                *c = self.constraints.get(i, j);
            }
        });
        let mut dual = LinearProgram::with_constraints(
            Sense::Max,
            self.rhs.clone(),
            at,
            vec![Relation::Le; n],
            self.objective.clone(),
        );
        for (i, rel) in self.relations.iter().enumerate() {
            match rel {
                Relation::Ge => dual.set_bounds(i, 0.0, f64::INFINITY),
                Relation::Le => dual.set_bounds(i, f64::NEG_INFINITY, 0.0),
                Relation::Eq => dual.set_bounds(i, f64::NEG_INFINITY, f64::INFINITY),
            }
        }
        Ok(dual)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub objective_value: f64,
    pub primal: Vec<f64>,
    /// Shadow prices, `d objective / d rhs_i`, one per row.
    pub dual: Vec<f64>,
    pub iterations: usize,
    pub algorithm: Algorithm,
    /// Final basis, reusable as a warm-start hint.
    pub basis: Option<Basis>,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub feas_tol: f64,
    pub gap_tol: f64,
    pub pivot_tol: f64,
    pub pivot_rule: PivotRule,
    /// Consecutive degenerate pivots tolerated before falling back to Bland.
    pub stall_limit: usize,
    /// Consecutive degenerate primal pivots after which bounds are perturbed.
    /// `None` disables perturbation.
    pub perturb_after: Option<usize>,
    /// `None` picks a limit from the problem size.
    pub max_iterations: Option<usize>,
    /// Pivots between refactorizations of the basis inverse.
    pub refactor_every: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            feas_tol: FEAS_TOL,
            gap_tol: GAP_TOL,
            pivot_tol: PIVOT_TOL,
            pivot_rule: PivotRule::Dantzig,
            stall_limit: 1000,
            perturb_after: Some(10),
            max_iterations: None,
            refactor_every: 64,
        }
    }
}

/// Simplex solver. Cheap to construct; holds no state between solves.
#[derive(Debug, Clone, Copy, Default)]
pub struct Solver {
    pub options: SolverOptions,
}

impl Solver {
    pub fn new(options: SolverOptions) -> Self {
        Self { options }
    }

    pub fn solve(&self, lp: &LinearProgram, algorithm: Algorithm) -> Result<LpSolution, LpError> {
        lp.validate()?;
        simplex::solve(lp, algorithm, &self.options, None)
    }

    /// Like [`Solver::solve`], starting from `hint` when it gives a primal or
    /// dual feasible basis for `lp`. Falls back to a cold start otherwise.
    pub fn solve_warm(
        &self,
        lp: &LinearProgram,
        algorithm: Algorithm,
        hint: &Basis,
    ) -> Result<LpSolution, LpError> {
        lp.validate()?;
        simplex::solve(lp, algorithm, &self.options, Some(hint))
    }
}

/// Optimality residuals of a solution, measured on the original LP.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residuals {
    pub primal: f64,
    pub dual: f64,
    pub gap: f64,
}

/// Computes primal infeasibility, dual infeasibility and the duality gap of
/// `sol` with respect to `lp`.
pub fn residuals(lp: &LinearProgram, sol: &LpSolution) -> Residuals {
    let (m, n) = (lp.num_rows(), lp.num_vars());
    let a = &lp.constraints;
    let x = &sol.primal;
    let mut primal: f64 = 0.0;
    for i in 0..m {
        let ax: f64 = (0..n).map(|j| a.get(i, j) * x[j]).sum();
        let viol = match lp.relations[i] {
            Relation::Le => ax - lp.rhs[i],
            Relation::Ge => lp.rhs[i] - ax,
            Relation::Eq => (ax - lp.rhs[i]).abs(),
        };
        primal = primal.max(viol);
    }
    for j in 0..n {
        primal = primal.max(lp.lower[j] - x[j]).max(x[j] - lp.upper[j]);
    }

    // Work in minimization form: sign flips objective and shadow prices.
    let s = if lp.sense == Sense::Min { 1.0 } else { -1.0 };
    let y: Vec<f64> = sol.dual.iter().map(|v| s * v).collect();
    let mut dual: f64 = 0.0;
    for (i, rel) in lp.relations.iter().enumerate() {
        let viol = match rel {
            Relation::Ge => -y[i],
            Relation::Le => y[i],
            Relation::Eq => 0.0,
        };
        dual = dual.max(viol);
    }
    let aty = a.transpose_mul(&y);
    let mut dual_obj: f64 = dot(&lp.rhs, &y);
    for j in 0..n {
        let d = s * lp.objective[j] - aty[j];
        let (l, u) = (lp.lower[j], lp.upper[j]);
        // A reduced cost is paid for by whichever bound it pushes against.
        if d > 0.0 {
            if l.is_finite() {
                dual_obj += d * l;
            } else {
                dual = dual.max(d);
            }
        } else if d < 0.0 {
            if u.is_finite() {
                dual_obj += d * u;
            } else {
                dual = dual.max(-d);
            }
        }
    }
    let primal_obj = s * dot(&lp.objective, x);
    let gap = (primal_obj - dual_obj).abs();
    Residuals { primal, dual, gap }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn beale() -> LinearProgram {
        let mut lp = LinearProgram::new(Sense::Min, vec![-0.75, 20.0, -0.5, 6.0]);
        lp.add_row(&[0.25, -8.0, -1.0, 9.0], Relation::Le, 0.0)
            .unwrap();
        lp.add_row(&[0.5, -12.0, -0.5, 3.0], Relation::Le, 0.0)
            .unwrap();
        lp.add_row(&[0.0, 0.0, 1.0, 0.0], Relation::Le, 1.0)
            .unwrap();
        lp
    }

    #[test]
    fn single_constraint_identity() {
        let mut lp = LinearProgram::new(Sense::Min, vec![1.0]);
        lp.add_row(&[1.0], Relation::Ge, 1.0).unwrap();
        for alg in [Algorithm::Primal, Algorithm::Dual] {
            let sol = Solver::default().solve(&lp, alg).unwrap();
            assert_eq!(sol.status, LpStatus::Optimal);
            assert!((sol.objective_value - 1.0).abs() < 1e-12);
            assert!((sol.dual[0] - 1.0).abs() < 1e-12);
            assert_eq!(sol.algorithm, alg);
        }
    }

    #[test]
    fn empty_feasible_region() {
        // -x >= 1 with x >= 0.
        let mut lp = LinearProgram::new(Sense::Max, vec![1.0]);
        lp.add_row(&[-1.0], Relation::Ge, 1.0).unwrap();
        for alg in [Algorithm::Primal, Algorithm::Dual] {
            let sol = Solver::default().solve(&lp, alg).unwrap();
            assert_eq!(sol.status, LpStatus::Infeasible, "{alg}");
        }
    }

    #[test]
    fn unbounded_ray() {
        let mut lp = LinearProgram::new(Sense::Max, vec![1.0, 1.0]);
        lp.add_row(&[1.0, -1.0], Relation::Le, 1.0).unwrap();
        for alg in [Algorithm::Primal, Algorithm::Dual] {
            let sol = Solver::default().solve(&lp, alg).unwrap();
            assert_eq!(sol.status, LpStatus::Unbounded, "{alg}");
        }
    }

    #[test]
    fn beale_terminates_with_bland() {
        let lp = beale();
        for rule in [PivotRule::Bland, PivotRule::Dantzig] {
            let solver = Solver::new(SolverOptions {
                pivot_rule: rule,
                ..Default::default()
            });
            for alg in [Algorithm::Primal, Algorithm::Dual] {
                let sol = solver.solve(&lp, alg).unwrap();
                assert_eq!(sol.status, LpStatus::Optimal);
                assert!(
                    (sol.objective_value + 1.25).abs() < 1e-9,
                    "{rule:?} {alg}: {}",
                    sol.objective_value
                );
            }
        }
    }

    #[test]
    fn bounded_and_free_variables() {
        // max x + y, x in [-inf, 2], y in [1, 3], x + y <= 4 -> 4, with x free below.
        let mut lp = LinearProgram::new(Sense::Max, vec![1.0, 2.0]);
        lp.add_row(&[1.0, 1.0], Relation::Le, 4.0).unwrap();
        lp.set_bounds(0, f64::NEG_INFINITY, 2.0);
        lp.set_bounds(1, 1.0, 3.0);
        for alg in [Algorithm::Primal, Algorithm::Dual] {
            let sol = Solver::default().solve(&lp, alg).unwrap();
            assert_eq!(sol.status, LpStatus::Optimal);
            assert!((sol.objective_value - 7.0).abs() < 1e-9, "{alg}");
            let r = residuals(&lp, &sol);
            assert!(r.primal < 1e-9 && r.dual < 1e-9 && r.gap < 1e-9, "{r:?}");
        }
    }

    #[test]
    fn equality_rows_and_duals() {
        // min 2a + 3b  s.t. a + b = 4, a - b <= 1 -> a = 2.5, b = 1.5.
        let mut lp = LinearProgram::new(Sense::Min, vec![2.0, 3.0]);
        lp.add_row(&[1.0, 1.0], Relation::Eq, 4.0).unwrap();
        lp.add_row(&[1.0, -1.0], Relation::Le, 1.0).unwrap();
        for alg in [Algorithm::Primal, Algorithm::Dual] {
            let sol = Solver::default().solve(&lp, alg).unwrap();
            assert!((sol.objective_value - 9.5).abs() < 1e-9);
            assert!((sol.primal[0] - 2.5).abs() < 1e-9);
            assert!((sol.dual[0] - 2.5).abs() < 1e-9);
            assert!((sol.dual[1] + 0.5).abs() < 1e-9);
        }
    }

    #[test]
    fn rejects_malformed() {
        let mut lp = LinearProgram::new(Sense::Min, vec![1.0, f64::NAN]);
        lp.add_row(&[1.0, 1.0], Relation::Ge, 1.0).unwrap();
        assert!(matches!(
            Solver::default().solve(&lp, Algorithm::Primal),
            Err(LpError::Malformed(_))
        ));
        let mut lp = LinearProgram::new(Sense::Min, vec![1.0]);
        assert!(lp.add_row(&[1.0, 2.0], Relation::Ge, 1.0).is_err());
        lp.rhs.push(1.0);
        assert!(Solver::default().solve(&lp, Algorithm::Primal).is_err());
    }

    #[test]
    fn iteration_limit_is_reported() {
        let lp = beale();
        let solver = Solver::new(SolverOptions {
            max_iterations: Some(1),
            ..Default::default()
        });
        assert_eq!(
            solver.solve(&lp, Algorithm::Primal),
            Err(LpError::IterationLimit(1))
        );
    }

    #[test]
    fn warm_start_reuses_basis() {
        let mut lp = LinearProgram::new(Sense::Min, vec![1.0, 1.0, 3.0]);
        lp.add_row(&[1.0, 2.0, 1.0], Relation::Ge, 4.0).unwrap();
        lp.add_row(&[3.0, 1.0, 1.0], Relation::Ge, 3.0).unwrap();
        let solver = Solver::default();
        let cold = solver.solve(&lp, Algorithm::Primal).unwrap();
        let warm = solver
            .solve_warm(&lp, Algorithm::Primal, cold.basis.as_ref().unwrap())
            .unwrap();
        assert!((cold.objective_value - warm.objective_value).abs() < 1e-12);
        assert_eq!(warm.iterations, 0);
        // A hint of the wrong shape is ignored.
        let bogus = Basis::from_columns(vec![7, 9, 11]);
        let fallback = solver.solve_warm(&lp, Algorithm::Dual, &bogus).unwrap();
        assert!((fallback.objective_value - cold.objective_value).abs() < 1e-9);
    }
}
