use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::basis::BasisInverse;
use super::{
    dot, Algorithm, LinearProgram, LpError, LpSolution, LpStatus, PivotRule, Relation, Sense,
    SolverOptions,
};

/// Basic variables of a solved LP, indexed in the standardized space:
/// `0..n` are structural variables, `n + i` is the logical (slack) of row `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Basis {
    columns: Vec<usize>,
}

impl Basis {
    pub fn from_columns(columns: Vec<usize>) -> Self {
        Self { columns }
    }

    pub fn columns(&self) -> &[usize] {
        &self.columns
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum VarState {
    Basic,
    AtLower,
    AtUpper,
    /// Nonbasic with no finite bound, held at zero.
    Free,
}

enum Outcome {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Working state of one solve. Variables are structural (`0..n`), logical
/// (`n..n+m`, column `e_i`) and phase-one artificials (column `±e_row`).
struct Simplex<'a> {
    lp: &'a LinearProgram,
    opts: &'a SolverOptions,
    m: usize,
    n: usize,
    art_row: Vec<usize>,
    art_sign: Vec<f64>,
    cost: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    x: Vec<f64>,
    state: Vec<VarState>,
    basis: Vec<usize>,
    binv: BasisInverse,
    rule: PivotRule,
    iterations: usize,
    limit: usize,
    since_refactor: usize,
    degenerate_streak: usize,
    small_pivots: usize,
    /// Original bounds of structural and logical variables while perturbed.
    saved_bounds: Option<(Vec<f64>, Vec<f64>)>,
    expanded: Vec<bool>,
    perturb_allowed: bool,
    rng: ChaCha8Rng,
}

const SMALL_PIVOT_LIMIT: usize = 50;
/// Relative size of a bound perturbation; each shift is scaled by `1 + U(0, 1)`.
const PERTURB_SCALE: f64 = 1e-6;

pub(super) fn solve(
    lp: &LinearProgram,
    algorithm: Algorithm,
    opts: &SolverOptions,
    hint: Option<&Basis>,
) -> Result<LpSolution, LpError> {
    if let Some(hint) = hint {
        let mut s = Simplex::new(lp, opts);
        if let Some(outcome) = s.try_warm_start(hint) {
            let outcome = s.settle(outcome?)?;
            return Ok(s.finish(outcome, algorithm));
        }
    }
    let mut s = Simplex::new(lp, opts);
    let outcome = match algorithm {
        Algorithm::Primal => s.run_primal_two_phase()?,
        Algorithm::Dual => s.run_dual()?,
    };
    let outcome = s.settle(outcome)?;
    Ok(s.finish(outcome, algorithm))
}

impl<'a> Simplex<'a> {
    fn new(lp: &'a LinearProgram, opts: &'a SolverOptions) -> Self {
        let (m, n) = (lp.num_rows(), lp.num_vars());
        let sign = if lp.sense == Sense::Min { 1.0 } else { -1.0 };
        let mut cost: Vec<f64> = lp.objective.iter().map(|c| sign * c).collect();
        cost.resize(n + m, 0.0);
        let mut lower = lp.lower.clone();
        let mut upper = lp.upper.clone();
        for rel in &lp.relations {
            let (l, u) = match rel {
                Relation::Le => (0.0, f64::INFINITY),
                Relation::Ge => (f64::NEG_INFINITY, 0.0),
                Relation::Eq => (0.0, 0.0),
            };
            lower.push(l);
            upper.push(u);
        }
        let limit = opts.max_iterations.unwrap_or(10_000 + 50 * (m + n));
        Self {
            lp,
            opts,
            m,
            n,
            art_row: Vec::new(),
            art_sign: Vec::new(),
            cost,
            lower,
            upper,
            x: vec![0.0; n + m],
            state: vec![VarState::AtLower; n + m],
            basis: (n..n + m).collect(),
            binv: BasisInverse::identity(m),
            rule: opts.pivot_rule,
            iterations: 0,
            limit,
            since_refactor: 0,
            degenerate_streak: 0,
            small_pivots: 0,
            saved_bounds: None,
            expanded: vec![false; n + m],
            perturb_allowed: opts.perturb_after.is_some(),
            rng: ChaCha8Rng::seed_from_u64(0x9e37_79b9_7f4a_7c15),
        }
    }

    /// Pushes the finite bounds of variable `j` outward by a small random amount.
    fn expand_bounds(&mut self, j: usize) {
        if self.saved_bounds.is_none() || j >= self.expanded.len() || self.expanded[j] {
            return;
        }
        self.expanded[j] = true;
        if self.lower[j].is_finite() {
            self.lower[j] -=
                PERTURB_SCALE * (1.0 + self.lower[j].abs()) * (1.0 + self.rng.random::<f64>());
        }
        if self.upper[j].is_finite() {
            self.upper[j] +=
                PERTURB_SCALE * (1.0 + self.upper[j].abs()) * (1.0 + self.rng.random::<f64>());
        }
    }

    /// Starts perturbing: every basic variable now sits strictly inside its
    /// bounds, and every entering variable is expanded as it enters.
    fn start_perturbation(&mut self) {
        if !self.perturb_allowed || self.saved_bounds.is_some() {
            return;
        }
        let k = self.n + self.m;
        self.saved_bounds = Some((self.lower[..k].to_vec(), self.upper[..k].to_vec()));
        for i in 0..self.m {
            self.expand_bounds(self.basis[i]);
        }
    }

    /// Restores the original bounds and, from an optimal perturbed basis,
    /// reoptimizes the original problem.
    fn settle(&mut self, outcome: Outcome) -> Result<Outcome, LpError> {
        let Some((lower, upper)) = self.saved_bounds.take() else {
            return Ok(outcome);
        };
        let k = lower.len();
        self.lower[..k].copy_from_slice(&lower);
        self.upper[..k].copy_from_slice(&upper);
        self.perturb_allowed = false;
        if !matches!(outcome, Outcome::Optimal) {
            return Ok(outcome);
        }
        for j in 0..self.num_vars() {
            match self.state[j] {
                VarState::AtLower => self.x[j] = self.lower[j],
                VarState::AtUpper => self.x[j] = self.upper[j],
                _ => {}
            }
        }
        self.refactor()?;
        let tol = self.opts.feas_tol;
        let infeasible = self
            .basis
            .iter()
            .any(|&v| self.x[v] < self.lower[v] - tol || self.x[v] > self.upper[v] + tol);
        if infeasible {
            if let Outcome::Infeasible = self.dual_loop()? {
                return Ok(Outcome::Infeasible);
            }
        }
        self.primal_loop()
    }

    fn num_vars(&self) -> usize {
        self.cost.len()
    }

    /// `B^{-1} a_j`.
    fn ftran_var(&self, j: usize, out: &mut [f64]) {
        if j < self.n {
            self.binv.ftran(self.lp.constraints.column(j), out);
        } else if j < self.n + self.m {
            self.binv.ftran_unit(j - self.n, out);
        } else {
            let k = j - self.n - self.m;
            self.binv.ftran_unit(self.art_row[k], out);
            out.iter_mut().for_each(|v| *v *= self.art_sign[k]);
        }
    }

    /// `y · a_j`.
    #[inline]
    fn col_dot(&self, j: usize, y: &[f64]) -> f64 {
        if j < self.n {
            dot(self.lp.constraints.column(j), y)
        } else if j < self.n + self.m {
            y[j - self.n]
        } else {
            let k = j - self.n - self.m;
            self.art_sign[k] * y[self.art_row[k]]
        }
    }

    fn column_dense(&self, j: usize, out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        if j < self.n {
            out.copy_from_slice(self.lp.constraints.column(j));
        } else if j < self.n + self.m {
            out[j - self.n] = 1.0;
        } else {
            let k = j - self.n - self.m;
            out[self.art_row[k]] = self.art_sign[k];
        }
    }

    fn is_fixed(&self, j: usize) -> bool {
        self.lower[j] == self.upper[j]
    }

    /// Places a nonbasic variable at its preferred finite bound.
    fn place_nonbasic(&mut self, j: usize, prefer_upper: bool) {
        let (l, u) = (self.lower[j], self.upper[j]);
        let (state, value) = match (l.is_finite(), u.is_finite()) {
            (true, true) if prefer_upper => (VarState::AtUpper, u),
            (true, _) => (VarState::AtLower, l),
            (false, true) => (VarState::AtUpper, u),
            (false, false) => (VarState::Free, 0.0),
        };
        self.state[j] = state;
        self.x[j] = value;
    }

    /// `b - N x_N`, the right-hand side seen by the basic variables.
    fn reduced_rhs(&self) -> Vec<f64> {
        let mut r = self.lp.rhs.clone();
        let mut col = vec![0.0; self.m];
        for j in 0..self.num_vars() {
            if self.state[j] != VarState::Basic && self.x[j] != 0.0 {
                self.column_dense(j, &mut col);
                for (ri, ci) in r.iter_mut().zip(&col) {
                    *ri -= ci * self.x[j];
                }
            }
        }
        r
    }

    fn recompute_basics(&mut self) {
        let r = self.reduced_rhs();
        let mut xb = vec![0.0; self.m];
        self.binv.ftran(&r, &mut xb);
        for (i, &v) in self.basis.iter().enumerate() {
            self.x[v] = xb[i];
        }
    }

    fn refactor(&mut self) -> Result<(), LpError> {
        let basis = self.basis.clone();
        let inv = BasisInverse::factor(self.m, self.opts.pivot_tol, |k, out| {
            self.column_dense(basis[k], out)
        });
        match inv {
            Some(inv) => {
                self.binv = inv;
                self.since_refactor = 0;
                self.recompute_basics();
                Ok(())
            }
            None => Err(LpError::NumericalInstability(
                "basis became singular on refactorization".into(),
            )),
        }
    }

    fn duals(&self) -> Vec<f64> {
        let cb: Vec<f64> = self.basis.iter().map(|&v| self.cost[v]).collect();
        let mut y = vec![0.0; self.m];
        self.binv.btran(&cb, &mut y);
        y
    }

    fn tick(&mut self) -> Result<(), LpError> {
        if self.iterations >= self.limit {
            return Err(LpError::IterationLimit(self.limit));
        }
        self.iterations += 1;
        Ok(())
    }

    fn note_step(&mut self, degenerate: bool, pivot_abs: f64) -> Result<(), LpError> {
        if degenerate {
            self.degenerate_streak += 1;
            if self.degenerate_streak > self.opts.stall_limit {
                self.rule = PivotRule::Bland;
            }
        } else {
            self.degenerate_streak = 0;
        }
        if pivot_abs < self.opts.pivot_tol * 1e3 {
            self.small_pivots += 1;
            if self.small_pivots > SMALL_PIVOT_LIMIT {
                return Err(LpError::NumericalInstability(format!(
                    "{} pivots below {:e}",
                    self.small_pivots,
                    self.opts.pivot_tol * 1e3
                )));
            }
        }
        Ok(())
    }

    fn pivot(&mut self, r: usize, q: usize, alpha: &[f64]) -> Result<(), LpError> {
        self.basis[r] = q;
        self.state[q] = VarState::Basic;
        self.binv.update(r, alpha);
        self.since_refactor += 1;
        if self.since_refactor >= self.opts.refactor_every {
            self.refactor()?;
        }
        Ok(())
    }

    // ---------------------------------------------------------------- primal

    fn run_primal_two_phase(&mut self) -> Result<Outcome, LpError> {
        for j in 0..self.n {
            self.place_nonbasic(j, false);
        }
        let r = self.reduced_rhs();
        let tol = self.opts.feas_tol;
        for i in 0..self.m {
            let s = self.n + i;
            let clamped = r[i].clamp(self.lower[s], self.upper[s]);
            if (r[i] - clamped).abs() <= tol {
                self.state[s] = VarState::Basic;
                self.x[s] = r[i];
                continue;
            }
            self.state[s] = if clamped == self.lower[s] {
                VarState::AtLower
            } else {
                VarState::AtUpper
            };
            self.x[s] = clamped;
            let excess = r[i] - clamped;
            let a = self.num_vars();
            self.art_row.push(i);
            self.art_sign.push(excess.signum());
            self.cost.push(0.0);
            self.lower.push(0.0);
            self.upper.push(f64::INFINITY);
            self.x.push(excess.abs());
            self.state.push(VarState::Basic);
            self.basis[i] = a;
        }
        if !self.art_row.is_empty() {
            self.refactor()?;
            let true_cost = self.cost.clone();
            let first_art = self.n + self.m;
            for (j, c) in self.cost.iter_mut().enumerate() {
                *c = if j >= first_art { 1.0 } else { 0.0 };
            }
            match self.primal_loop()? {
                Outcome::Optimal => {}
                _ => {
                    return Err(LpError::NumericalInstability(
                        "phase one did not converge".into(),
                    ))
                }
            }
            let infeasibility: f64 = (first_art..self.num_vars())
                .map(|j| self.x[j].max(0.0))
                .sum();
            let scale = 1.0 + self.lp.rhs.iter().fold(0.0f64, |a, b| a.max(b.abs()));
            self.cost = true_cost;
            for j in first_art..self.num_vars() {
                self.upper[j] = 0.0;
                if self.state[j] != VarState::Basic {
                    self.state[j] = VarState::AtLower;
                    self.x[j] = 0.0;
                }
            }
            if infeasibility > tol * scale {
                return Ok(Outcome::Infeasible);
            }
        }
        self.primal_loop()
    }

    fn primal_loop(&mut self) -> Result<Outcome, LpError> {
        let m = self.m;
        let tol = self.opts.feas_tol;
        let ptol = self.opts.pivot_tol;
        let mut alpha = vec![0.0; m];
        loop {
            let y = self.duals();
            // Pricing.
            let mut entering: Option<(usize, f64, f64)> = None;
            for j in 0..self.num_vars() {
                let st = self.state[j];
                if st == VarState::Basic || self.is_fixed(j) {
                    continue;
                }
                let d = self.cost[j] - self.col_dot(j, &y);
                let dir = match st {
                    VarState::AtLower if d < -tol => 1.0,
                    VarState::AtUpper if d > tol => -1.0,
                    VarState::Free if d.abs() > tol => -d.signum(),
                    _ => continue,
                };
                match self.rule {
                    PivotRule::Bland => {
                        entering = Some((j, dir, d));
                        break;
                    }
                    PivotRule::Dantzig => {
                        if entering.is_none_or(|(_, _, best)| d.abs() > best.abs()) {
                            entering = Some((j, dir, d));
                        }
                    }
                }
            }
            let Some((q, dir, _)) = entering else {
                return Ok(Outcome::Optimal);
            };
            self.tick()?;
            self.expand_bounds(q);
            self.ftran_var(q, &mut alpha);

            // Ratio test, Harris two-pass in Dantzig mode.
            let flip = if dir > 0.0 {
                self.upper[q] - self.x[q]
            } else {
                self.x[q] - self.lower[q]
            };
            let ratio = |i: usize, slack: f64| -> Option<f64> {
                let rate = dir * alpha[i];
                if rate.abs() <= ptol {
                    return None;
                }
                let v = self.basis[i];
                if rate > 0.0 {
                    let l = self.lower[v];
                    l.is_finite()
                        .then(|| (self.x[v] - l + slack).max(0.0) / rate)
                } else {
                    let u = self.upper[v];
                    u.is_finite()
                        .then(|| (u - self.x[v] + slack).max(0.0) / -rate)
                }
            };
            let mut leave: Option<(usize, f64)> = None;
            match self.rule {
                PivotRule::Dantzig => {
                    let bound = (0..m)
                        .filter_map(|i| ratio(i, tol))
                        .fold(f64::INFINITY, f64::min);
                    if bound.is_finite() {
                        let mut best_abs = -1.0;
                        for i in 0..m {
                            if let Some(t) = ratio(i, 0.0) {
                                if t <= bound && alpha[i].abs() > best_abs {
                                    best_abs = alpha[i].abs();
                                    leave = Some((i, t));
                                }
                            }
                        }
                    }
                }
                PivotRule::Bland => {
                    for i in 0..m {
                        if let Some(t) = ratio(i, 0.0) {
                            let better = match leave {
                                None => true,
                                Some((bi, bt)) => {
                                    t < bt || (t == bt && self.basis[i] < self.basis[bi])
                                }
                            };
                            if better {
                                leave = Some((i, t));
                            }
                        }
                    }
                }
            }

            let step_row = leave.map_or(f64::INFINITY, |(_, t)| t);
            if flip <= step_row {
                if !flip.is_finite() {
                    return Ok(Outcome::Unbounded);
                }
                // Bound flip: no basis change.
                for i in 0..m {
                    let v = self.basis[i];
                    self.x[v] -= flip * dir * alpha[i];
                }
                if dir > 0.0 {
                    self.state[q] = VarState::AtUpper;
                    self.x[q] = self.upper[q];
                } else {
                    self.state[q] = VarState::AtLower;
                    self.x[q] = self.lower[q];
                }
                self.note_step(false, 1.0)?;
                continue;
            }
            let (r, t) = leave.expect("finite step implies a leaving row");
            for i in 0..m {
                let v = self.basis[i];
                self.x[v] -= t * dir * alpha[i];
            }
            self.x[q] += dir * t;
            let v = self.basis[r];
            if dir * alpha[r] > 0.0 {
                self.state[v] = VarState::AtLower;
                self.x[v] = self.lower[v];
            } else {
                self.state[v] = VarState::AtUpper;
                self.x[v] = self.upper[v];
            }
            let pivot_abs = alpha[r].abs();
            self.pivot(r, q, &alpha)?;
            self.note_step(t <= tol, pivot_abs)?;
            if self
                .opts
                .perturb_after
                .is_some_and(|k| self.degenerate_streak >= k)
            {
                self.start_perturbation();
            }
        }
    }

    // ------------------------------------------------------------------ dual

    /// Dual simplex from the slack basis. Costs that prevent a dual feasible
    /// start are zeroed for the dual phase and restored for a primal cleanup.
    fn run_dual(&mut self) -> Result<Outcome, LpError> {
        let true_cost = self.cost.clone();
        for j in 0..self.n {
            let c = self.cost[j];
            let (lf, uf) = (self.lower[j].is_finite(), self.upper[j].is_finite());
            if c > 0.0 && !lf || c < 0.0 && !uf {
                self.cost[j] = 0.0;
            }
            self.place_nonbasic(j, self.cost[j] < 0.0);
        }
        for i in 0..self.m {
            self.state[self.n + i] = VarState::Basic;
        }
        self.recompute_basics();
        if let Outcome::Infeasible = self.dual_loop()? {
            return Ok(Outcome::Infeasible);
        }
        self.cost = true_cost;
        self.primal_loop()
    }

    fn dual_loop(&mut self) -> Result<Outcome, LpError> {
        let m = self.m;
        let tol = self.opts.feas_tol;
        let ptol = self.opts.pivot_tol;
        let mut alpha = vec![0.0; m];
        let mut row = vec![0.0; m];
        loop {
            // Leaving row: largest bound violation.
            let mut leave: Option<(usize, f64, bool)> = None;
            for i in 0..m {
                let v = self.basis[i];
                let (below, above) = (self.lower[v] - self.x[v], self.x[v] - self.upper[v]);
                let (infeas, to_lower) = if below > tol {
                    (below, true)
                } else if above > tol {
                    (above, false)
                } else {
                    continue;
                };
                let better = match (self.rule, leave) {
                    (_, None) => true,
                    (PivotRule::Dantzig, Some((_, best, _))) => infeas > best,
                    (PivotRule::Bland, Some((bi, _, _))) => v < self.basis[bi],
                };
                if better {
                    leave = Some((i, infeas, to_lower));
                }
            }
            let Some((r, _, to_lower)) = leave else {
                return Ok(Outcome::Optimal);
            };
            self.tick()?;
            row.copy_from_slice(self.binv.row(r));
            let y = self.duals();

            // Entering column: dual ratio test over eligible nonbasics.
            // `sgn` orients alpha so eligible entries are positive.
            let sgn = if to_lower { -1.0 } else { 1.0 };
            let mut cands: Vec<(usize, f64, f64)> = Vec::new();
            for j in 0..self.num_vars() {
                let st = self.state[j];
                if st == VarState::Basic || self.is_fixed(j) {
                    continue;
                }
                let a = self.col_dot(j, &row);
                if a.abs() <= ptol {
                    continue;
                }
                let d = self.cost[j] - self.col_dot(j, &y);
                let oa = sgn * a;
                let eligible = match st {
                    VarState::AtLower => oa > 0.0,
                    VarState::AtUpper => oa < 0.0,
                    VarState::Free => true,
                    VarState::Basic => false,
                };
                if eligible {
                    let dd = match st {
                        VarState::AtLower => d.max(0.0),
                        VarState::AtUpper => (-d).max(0.0),
                        _ => d.abs(),
                    };
                    cands.push((j, dd, a));
                }
            }
            if cands.is_empty() {
                return Ok(Outcome::Infeasible);
            }
            let q = match self.rule {
                PivotRule::Dantzig => {
                    let bound = cands
                        .iter()
                        .map(|&(_, d, a)| (d + tol) / a.abs())
                        .fold(f64::INFINITY, f64::min);
                    cands
                        .iter()
                        .filter(|&&(_, d, a)| d / a.abs() <= bound)
                        .max_by(|x, y| x.2.abs().total_cmp(&y.2.abs()))
                        .map(|c| c.0)
                        .expect("bound is attained")
                }
                PivotRule::Bland => {
                    let best = cands
                        .iter()
                        .map(|&(_, d, a)| d / a.abs())
                        .fold(f64::INFINITY, f64::min);
                    cands
                        .iter()
                        .find(|&&(_, d, a)| d / a.abs() == best)
                        .map(|c| c.0)
                        .expect("minimum exists")
                }
            };
            let dq = cands.iter().find(|c| c.0 == q).map_or(0.0, |c| c.1);

            self.ftran_var(q, &mut alpha);
            if alpha[r].abs() <= ptol {
                self.refactor()?;
                continue;
            }
            let v = self.basis[r];
            let target = if to_lower {
                self.lower[v]
            } else {
                self.upper[v]
            };
            let delta = (self.x[v] - target) / alpha[r];
            for i in 0..m {
                let b = self.basis[i];
                self.x[b] -= delta * alpha[i];
            }
            self.x[q] += delta;
            self.x[v] = target;
            self.state[v] = if to_lower {
                VarState::AtLower
            } else {
                VarState::AtUpper
            };
            let pivot_abs = alpha[r].abs();
            self.pivot(r, q, &alpha)?;
            self.note_step(dq <= tol, pivot_abs)?;
        }
    }

    // ------------------------------------------------------------ warm start

    fn try_warm_start(&mut self, hint: &Basis) -> Option<Result<Outcome, LpError>> {
        let cols = hint.columns();
        let total = self.n + self.m;
        if cols.len() != self.m || cols.iter().any(|&c| c >= total) {
            return None;
        }
        let mut seen = vec![false; total];
        for &c in cols {
            if std::mem::replace(&mut seen[c], true) {
                return None;
            }
        }
        self.basis = cols.to_vec();
        for j in 0..total {
            if seen[j] {
                self.state[j] = VarState::Basic;
            } else {
                self.place_nonbasic(j, false);
            }
        }
        if self.refactor().is_err() {
            return None;
        }
        let tol = self.opts.feas_tol;
        let primal_feasible = self
            .basis
            .iter()
            .all(|&v| self.x[v] >= self.lower[v] - tol && self.x[v] <= self.upper[v] + tol);
        if primal_feasible {
            return Some(self.primal_loop());
        }
        // Dual feasible if every nonbasic can sit at the bound its reduced cost asks for.
        let y = self.duals();
        for j in 0..total {
            if self.state[j] == VarState::Basic || self.is_fixed(j) {
                continue;
            }
            let d = self.cost[j] - self.col_dot(j, &y);
            if d > tol && !self.lower[j].is_finite() || d < -tol && !self.upper[j].is_finite() {
                return None;
            }
            self.place_nonbasic(j, d < 0.0);
        }
        self.recompute_basics();
        Some(self.dual_loop().and_then(|o| match o {
            Outcome::Infeasible => Ok(Outcome::Infeasible),
            _ => self.primal_loop(),
        }))
    }

    // ----------------------------------------------------------------- output

    fn finish(mut self, outcome: Outcome, algorithm: Algorithm) -> LpSolution {
        // A final refactorization cleans accumulated drift from the values.
        if !self.art_row.is_empty() || self.since_refactor > 0 {
            let _ = self.refactor();
        }
        let n = self.n;
        let primal: Vec<f64> = self.x[..n].to_vec();
        let sign = if self.lp.sense == Sense::Min {
            1.0
        } else {
            -1.0
        };
        let (status, objective_value, dual) = match outcome {
            Outcome::Optimal => {
                let dual = self.duals().into_iter().map(|y| sign * y).collect();
                (LpStatus::Optimal, dot(&self.lp.objective, &primal), dual)
            }
            Outcome::Infeasible => (LpStatus::Infeasible, f64::NAN, vec![0.0; self.m]),
            Outcome::Unbounded => (
                LpStatus::Unbounded,
                -sign * f64::INFINITY,
                vec![0.0; self.m],
            ),
        };
        let basis = (status == LpStatus::Optimal && self.basis.iter().all(|&v| v < n + self.m))
            .then(|| Basis::from_columns(self.basis.clone()));
        LpSolution {
            status,
            objective_value,
            primal,
            dual,
            iterations: self.iterations,
            algorithm,
            basis,
        }
    }
}
