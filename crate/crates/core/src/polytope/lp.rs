//! Dense two-phase primal simplex with Bland's rule.
//!
//! Sized for the rate systems in this crate (tens of variables, around a
//! hundred rows). All variables are nonnegative; constraints are `row . x <=
//! bound` or `row . x = bound` with bounds of either sign.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Feasibility tolerance on the phase-one objective and constraint slack.
pub const FEASIBILITY_TOL: f64 = 1e-9;
const REDUCED_COST_TOL: f64 = 1e-11;
const PIVOT_TOL: f64 = 1e-12;
const MAX_PIVOTS: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub coefficients: Vec<f64>,
    pub bound: f64,
}

impl Constraint {
    pub fn new(coefficients: Vec<f64>, bound: f64) -> Self {
        Constraint {
            coefficients,
            bound,
        }
    }

    pub fn evaluate(&self, point: &[f64]) -> f64 {
        dot(&self.coefficients, point)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Linear system over nonnegative variables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateSystem {
    dim: usize,
    inequalities: Vec<Constraint>,
    equalities: Vec<Constraint>,
}

impl RateSystem {
    pub fn new(dim: usize) -> Self {
        RateSystem {
            dim,
            inequalities: Vec::new(),
            equalities: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn inequalities(&self) -> &[Constraint] {
        &self.inequalities
    }

    pub fn equalities(&self) -> &[Constraint] {
        &self.equalities
    }

    /// Adds `row . x <= bound`.
    pub fn add_inequality(&mut self, coefficients: Vec<f64>, bound: f64) {
        assert_eq!(
            coefficients.len(),
            self.dim,
            "row length must match dimension"
        );
        self.inequalities.push(Constraint::new(coefficients, bound));
    }

    /// Adds `row . x = value`.
    pub fn add_equality(&mut self, coefficients: Vec<f64>, value: f64) {
        assert_eq!(
            coefficients.len(),
            self.dim,
            "row length must match dimension"
        );
        self.equalities.push(Constraint::new(coefficients, value));
    }

    /// Smallest slack over all constraints (including nonnegativity) at
    /// `point`; equalities count with the negated absolute residual.
    pub fn min_slack(&self, point: &[f64]) -> f64 {
        let mut slack = point.iter().copied().fold(f64::INFINITY, f64::min);
        for c in &self.inequalities {
            slack = slack.min(c.bound - c.evaluate(point));
        }
        for c in &self.equalities {
            slack = slack.min(-(c.bound - c.evaluate(point)).abs());
        }
        slack
    }

    pub fn is_feasible_point(&self, point: &[f64], tol: f64) -> bool {
        point.len() == self.dim && self.min_slack(point) >= -tol
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { value: f64, point: Vec<f64> },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn is_optimal(&self) -> bool {
        matches!(self, LpOutcome::Optimal { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LpError {
    #[error("simplex stalled after {pivots} pivots in phase {phase}")]
    Stalled { phase: u8, pivots: usize },
    #[error("objective has {got} coefficients, system has {expected} variables")]
    ObjectiveLength { expected: usize, got: usize },
}

/// Maximizes `objective . x` over the system.
pub fn lp_solve(system: &RateSystem, objective: &[f64]) -> Result<LpOutcome, LpError> {
    match FeasibleBasis::find(system)? {
        Some(basis) => basis.maximize(objective),
        None => Ok(LpOutcome::Infeasible),
    }
}

#[derive(Debug, Clone)]
struct Tableau {
    /// `m` rows of width `cols + 1`; the last entry is the right-hand side.
    rows: Vec<Vec<f64>>,
    basis: Vec<usize>,
    /// Reduced costs (maximization) with the negated objective value last.
    costs: Vec<f64>,
    cols: usize,
    dim: usize,
    /// Columns at or past this index are artificial.
    artificial_start: usize,
}

enum Step {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn build(system: &RateSystem) -> Tableau {
        let dim = system.dim;
        let n_ineq = system.inequalities.len();
        let needs_artificial =
            system.inequalities.iter().filter(|c| c.bound < 0.0).count() + system.equalities.len();
        let artificial_start = dim + n_ineq;
        let cols = artificial_start + needs_artificial;
        let width = cols + 1;

        let mut rows = Vec::with_capacity(n_ineq + system.equalities.len());
        let mut basis = Vec::with_capacity(rows.capacity());
        let mut next_artificial = artificial_start;

        for (i, c) in system.inequalities.iter().enumerate() {
            let mut row = vec![0.0; width];
            let sign = if c.bound < 0.0 { -1.0 } else { 1.0 };
            for (j, &a) in c.coefficients.iter().enumerate() {
                row[j] = sign * a;
            }
            row[dim + i] = sign;
            row[cols] = sign * c.bound;
            if c.bound < 0.0 {
                row[next_artificial] = 1.0;
                basis.push(next_artificial);
                next_artificial += 1;
            } else {
                basis.push(dim + i);
            }
            rows.push(row);
        }
        for c in &system.equalities {
            let mut row = vec![0.0; width];
            let sign = if c.bound < 0.0 { -1.0 } else { 1.0 };
            for (j, &a) in c.coefficients.iter().enumerate() {
                row[j] = sign * a;
            }
            row[cols] = sign * c.bound;
            row[next_artificial] = 1.0;
            basis.push(next_artificial);
            next_artificial += 1;
            rows.push(row);
        }

        Tableau {
            rows,
            basis,
            costs: vec![0.0; width],
            cols,
            dim,
            artificial_start,
        }
    }

    /// Loads a maximization objective given per-column costs.
    fn load_objective(&mut self, column_cost: impl Fn(usize) -> f64) {
        let width = self.cols + 1;
        let mut costs: Vec<f64> = (0..self.cols).map(&column_cost).collect();
        costs.push(0.0);
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = column_cost(b);
            if cb != 0.0 {
                for j in 0..width {
                    costs[j] -= cb * row[j];
                }
            }
        }
        self.costs = costs;
    }

    fn objective_value(&self) -> f64 {
        -self.costs[self.cols]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let width = self.cols + 1;
        let p = self.rows[r][c];
        {
            let row = &mut self.rows[r];
            for v in row.iter_mut() {
                *v /= p;
            }
            row[c] = 1.0;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c];
            if f != 0.0 {
                for j in 0..width {
                    row[j] -= f * pivot_row[j];
                }
                row[c] = 0.0;
                if row[self.cols].abs() < PIVOT_TOL {
                    row[self.cols] = 0.0;
                }
            }
        }
        let f = self.costs[c];
        if f != 0.0 {
            for (cost, &a) in self.costs.iter_mut().zip(&pivot_row) {
                *cost -= f * a;
            }
            self.costs[c] = 0.0;
        }
        self.basis[r] = c;
    }

    /// Runs Bland-rule pivots over columns `< limit` until optimal.
    fn optimize(&mut self, limit: usize, phase: u8) -> Result<Step, LpError> {
        for _ in 0..MAX_PIVOTS {
            let entering = (0..limit).find(|&j| self.costs[j] > REDUCED_COST_TOL);
            let Some(c) = entering else {
                return Ok(Step::Optimal);
            };
            let mut leaving: Option<(usize, f64)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                let a = row[c];
                if a <= PIVOT_TOL {
                    continue;
                }
                let ratio = row[self.cols].max(0.0) / a;
                leaving = match leaving {
                    None => Some((i, ratio)),
                    Some((bi, br)) => {
                        let tie = (ratio - br).abs() <= PIVOT_TOL * (1.0 + br.abs());
                        if ratio < br && !tie || tie && self.basis[i] < self.basis[bi] {
                            Some((i, ratio))
                        } else {
                            Some((bi, br))
                        }
                    }
                };
            }
            match leaving {
                Some((r, _)) => self.pivot(r, c),
                None => return Ok(Step::Unbounded),
            }
        }
        Err(LpError::Stalled {
            phase,
            pivots: MAX_PIVOTS,
        })
    }

    fn solution(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.dim];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            if b < self.dim {
                x[b] = row[self.cols].max(0.0);
            }
        }
        x
    }
}

/// A tableau whose basis is primal feasible, reusable across objectives.
#[derive(Debug, Clone)]
pub struct FeasibleBasis {
    tableau: Tableau,
}

impl FeasibleBasis {
    /// Phase one. `Ok(None)` when the system is infeasible.
    pub fn find(system: &RateSystem) -> Result<Option<FeasibleBasis>, LpError> {
        let mut t = Tableau::build(system);
        let start = t.artificial_start;
        if t.cols > start {
            t.load_objective(|j| if j >= start { -1.0 } else { 0.0 });
            let limit = t.cols;
            match t.optimize(limit, 1)? {
                Step::Optimal => {}
                // phase one is bounded above by zero
                Step::Unbounded => unreachable!("phase one objective is bounded"),
            }
            if t.objective_value() < -FEASIBILITY_TOL {
                return Ok(None);
            }
            // pivot remaining (degenerate) artificials out of the basis
            let mut r = 0;
            while r < t.rows.len() {
                if t.basis[r] >= start {
                    let col = (0..start).find(|&j| t.rows[r][j].abs() > FEASIBILITY_TOL);
                    match col {
                        Some(c) => {
                            t.pivot(r, c);
                            r += 1;
                        }
                        None => {
                            // redundant row
                            t.rows.remove(r);
                            t.basis.remove(r);
                        }
                    }
                } else {
                    r += 1;
                }
            }
        }
        Ok(Some(FeasibleBasis { tableau: t }))
    }

    /// Any feasible point (the phase-one vertex).
    pub fn point(&self) -> Vec<f64> {
        self.tableau.solution()
    }

    /// Phase two for `objective`, starting from this basis.
    pub fn maximize(&self, objective: &[f64]) -> Result<LpOutcome, LpError> {
        let t0 = &self.tableau;
        if objective.len() != t0.dim {
            return Err(LpError::ObjectiveLength {
                expected: t0.dim,
                got: objective.len(),
            });
        }
        let mut t = t0.clone();
        let dim = t.dim;
        t.load_objective(|j| if j < dim { objective[j] } else { 0.0 });
        let limit = t.artificial_start;
        match t.optimize(limit, 2)? {
            Step::Unbounded => Ok(LpOutcome::Unbounded),
            Step::Optimal => {
                let point = t.solution();
                let value = dot(objective, &point);
                Ok(LpOutcome::Optimal { value, point })
            }
        }
    }
}
