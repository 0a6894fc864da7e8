//! Exact rational linear programming.
//!
//! Two-phase primal simplex over arbitrary-precision rationals with Bland's
//! least-index pivot rule, so every run terminates and every verdict is exact.
//! Free variables are handled by sign-splitting. Before an outcome is
//! returned, the point is substituted back into every original constraint;
//! an outcome never carries an unverified point.
//!
//! This is a dense desk-scale solver. Games here have at most a few dozen
//! strategies, and exactness on degenerate boundaries is the entire point;
//! speed is not.

use crate::error::DimensionError;
use crate::rational::{dot, Rat};
use thiserror::Error;

/// Maximization problem over rationals.
///
/// Variables with `nonneg[j] = true` are constrained to be nonnegative;
/// the rest are free.
#[derive(Debug, Clone)]
pub struct LpProblem {
    pub num_vars: usize,
    /// Objective coefficients (maximize). Empty means the zero objective.
    pub objective: Vec<Rat>,
    /// Equality constraints `row . x = rhs`.
    pub eq: Vec<(Vec<Rat>, Rat)>,
    /// Inequality constraints `row . x <= rhs`.
    pub ineq: Vec<(Vec<Rat>, Rat)>,
    pub nonneg: Vec<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Feasible,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct LpOutcome {
    pub status: LpStatus,
    /// Present when status is Optimal or Feasible; exactly satisfies every
    /// constraint of the problem it was produced for.
    pub point: Option<Vec<Rat>>,
    /// Present when status is Optimal.
    pub objective_value: Option<Rat>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("lp shape error: {0}")]
    Dimension(#[from] DimensionError),
    #[error("lp internal error: {0}")]
    Internal(String),
}

impl LpProblem {
    fn check_shape(&self) -> Result<(), LpError> {
        if self.nonneg.len() != self.num_vars {
            return Err(DimensionError::Length {
                expected: self.num_vars,
                got: self.nonneg.len(),
            }
            .into());
        }
        if !self.objective.is_empty() && self.objective.len() != self.num_vars {
            return Err(DimensionError::Length {
                expected: self.num_vars,
                got: self.objective.len(),
            }
            .into());
        }
        for (row, _) in self.eq.iter().chain(self.ineq.iter()) {
            if row.len() != self.num_vars {
                return Err(
                    DimensionError::Length { expected: self.num_vars, got: row.len() }.into()
                );
            }
        }
        Ok(())
    }

    fn objective_or_zero(&self) -> Vec<Rat> {
        if self.objective.is_empty() {
            vec![Rat::zero(); self.num_vars]
        } else {
            self.objective.clone()
        }
    }

    /// Exact substitution check of a candidate point.
    pub fn is_satisfied_by(&self, x: &[Rat]) -> bool {
        if x.len() != self.num_vars {
            return false;
        }
        for (j, &nn) in self.nonneg.iter().enumerate() {
            if nn && x[j].is_negative() {
                return false;
            }
        }
        for (row, rhs) in &self.eq {
            if &dot(row, x) != rhs {
                return false;
            }
        }
        for (row, rhs) in &self.ineq {
            if &dot(row, x) > rhs {
                return false;
            }
        }
        true
    }
}

/// Solve the problem, maximizing its objective.
pub fn lp_solve(problem: &LpProblem) -> Result<LpOutcome, LpError> {
    problem.check_shape()?;
    let objective = problem.objective_or_zero();

    let mut std = Standardized::build(problem);
    match std.phase_one() {
        PhaseOne::Infeasible => {
            return Ok(LpOutcome { status: LpStatus::Infeasible, point: None, objective_value: None })
        }
        PhaseOne::Feasible => {}
    }
    let status = std.phase_two(&objective);
    match status {
        Phase::Unbounded => {
            Ok(LpOutcome { status: LpStatus::Unbounded, point: None, objective_value: None })
        }
        Phase::Optimal => {
            let x = std.extract_point();
            if !problem.is_satisfied_by(&x) {
                return Err(LpError::Internal(
                    "solver produced a point violating its constraints".into(),
                ));
            }
            let value = dot(&objective, &x);
            Ok(LpOutcome { status: LpStatus::Optimal, point: Some(x), objective_value: Some(value) })
        }
    }
}

/// Feasibility query: `lp_solve` with the zero objective. A satisfiable
/// system reports `Feasible` with a verified point.
pub fn lp_feasible_point(
    eq: Vec<(Vec<Rat>, Rat)>,
    ineq: Vec<(Vec<Rat>, Rat)>,
    nonneg: Vec<bool>,
) -> Result<LpOutcome, LpError> {
    let problem =
        LpProblem { num_vars: nonneg.len(), objective: Vec::new(), eq, ineq, nonneg };
    let outcome = lp_solve(&problem)?;
    Ok(match outcome.status {
        LpStatus::Optimal => {
            LpOutcome { status: LpStatus::Feasible, point: outcome.point, objective_value: None }
        }
        _ => outcome,
    })
}

enum PhaseOne {
    Feasible,
    Infeasible,
}

enum Phase {
    Optimal,
    Unbounded,
}

/// Column bookkeeping for one original variable.
enum VarCols {
    Nonneg(usize),
    /// Split free variable `x = plus - minus`.
    Free { plus: usize, minus: usize },
}

/// The problem in computational standard form `A z = b, z >= 0` plus the
/// simplex tableau state.
struct Standardized {
    var_cols: Vec<VarCols>,
    struct_cols: usize,
    art_start: usize,
    total_cols: usize,
    rows: Vec<Vec<Rat>>,
    rhs: Vec<Rat>,
    basis: Vec<usize>,
    reduced: Vec<Rat>,
}

impl Standardized {
    fn build(p: &LpProblem) -> Self {
        let mut var_cols = Vec::with_capacity(p.num_vars);
        let mut next = 0usize;
        for &nn in &p.nonneg {
            if nn {
                var_cols.push(VarCols::Nonneg(next));
                next += 1;
            } else {
                var_cols.push(VarCols::Free { plus: next, minus: next + 1 });
                next += 2;
            }
        }
        let num_slacks = p.ineq.len();
        let struct_cols = next + num_slacks;
        let num_rows = p.eq.len() + p.ineq.len();
        let art_start = struct_cols;
        let total_cols = struct_cols + num_rows;

        let expand = |row: &[Rat], out: &mut Vec<Rat>| {
            for (j, cols) in var_cols.iter().enumerate() {
                match cols {
                    VarCols::Nonneg(c) => out[*c] = row[j].clone(),
                    VarCols::Free { plus, minus } => {
                        out[*plus] = row[j].clone();
                        out[*minus] = -&row[j];
                    }
                }
            }
        };

        let mut rows = Vec::with_capacity(num_rows);
        let mut rhs = Vec::with_capacity(num_rows);
        let mut basis = Vec::with_capacity(num_rows);
        let mut row_index = 0usize;
        let eq_rows = p.eq.iter().map(|(r, b)| (r, b, None));
        let ineq_rows =
            p.ineq.iter().enumerate().map(|(k, (r, b))| (r, b, Some(next + k)));
        for (row, b, slack_col) in eq_rows.chain(ineq_rows) {
            let mut full = vec![Rat::zero(); total_cols];
            expand(row, &mut full);
            if let Some(s) = slack_col {
                full[s] = Rat::one();
            }
            let mut b = b.clone();
            if b.is_negative() {
                for v in full.iter_mut() {
                    *v = -&*v;
                }
                b = -b;
            }
            full[art_start + row_index] = Rat::one();
            rows.push(full);
            rhs.push(b);
            basis.push(art_start + row_index);
            row_index += 1;
        }

        Standardized {
            var_cols,
            struct_cols,
            art_start,
            total_cols,
            rows,
            rhs,
            basis,
            reduced: Vec::new(),
        }
    }

    /// Reduced costs and objective value for cost vector `c` under the
    /// current basis (tableau rows are kept canonical throughout).
    fn load_costs(&mut self, c: &[Rat]) {
        let mut reduced = c.to_vec();
        for (i, row) in self.rows.iter().enumerate() {
            let cb = &c[self.basis[i]];
            if cb.is_zero() {
                continue;
            }
            for j in 0..self.total_cols {
                if !row[j].is_zero() {
                    let adj = cb * &row[j];
                    reduced[j] = &reduced[j] - &adj;
                }
            }
        }
        self.reduced = reduced;
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let pivot = self.rows[r][j].clone();
        let inv = pivot.recip();
        for v in self.rows[r].iter_mut() {
            *v = &*v * &inv;
        }
        self.rhs[r] = &self.rhs[r] * &inv;
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][j].is_zero() {
                continue;
            }
            let factor = self.rows[i][j].clone();
            for (v, pv) in self.rows[i].iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v = &*v - &(&factor * pv);
                }
            }
            self.rhs[i] = &self.rhs[i] - &(&factor * &pivot_rhs);
        }
        if !self.reduced[j].is_zero() {
            let factor = self.reduced[j].clone();
            for (v, pv) in self.reduced.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v = &*v - &(&factor * pv);
                }
            }
        }
        self.basis[r] = j;
    }

    /// Bland's rule loop: entering column is the least index with positive
    /// reduced cost; leaving row is the minimum-ratio row, ties broken by
    /// least basic-variable index. `allowed_cols` bounds the eligible columns.
    fn run_simplex(&mut self, allowed_cols: usize) -> Phase {
        loop {
            let entering = (0..allowed_cols).find(|&j| self.reduced[j].is_positive());
            let Some(j) = entering else { return Phase::Optimal };
            let mut leave: Option<(usize, Rat)> = None;
            for i in 0..self.rows.len() {
                if !self.rows[i][j].is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / &self.rows[i][j];
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((best_i, best)) => {
                        if ratio < best
                            || (ratio == best && self.basis[i] < self.basis[best_i])
                        {
                            Some((i, ratio))
                        } else {
                            Some((best_i, best))
                        }
                    }
                };
            }
            match leave {
                Some((r, _)) => self.pivot(r, j),
                None => return Phase::Unbounded,
            }
        }
    }

    fn phase_one(&mut self) -> PhaseOne {
        let mut cost = vec![Rat::zero(); self.total_cols];
        for c in cost.iter_mut().skip(self.art_start) {
            *c = -Rat::one();
        }
        self.load_costs(&cost);
        match self.run_simplex(self.art_start) {
            Phase::Optimal => {}
            Phase::Unbounded => unreachable!("phase-1 objective is bounded above by zero"),
        }
        // Optimum of -(sum of artificials): zero iff the system is feasible.
        let art_sum: Rat = self
            .basis
            .iter()
            .zip(&self.rhs)
            .filter(|(b, _)| **b >= self.art_start)
            .map(|(_, v)| v.clone())
            .sum();
        if !art_sum.is_zero() {
            return PhaseOne::Infeasible;
        }
        self.drive_out_artificials();
        PhaseOne::Feasible
    }

    /// Remove artificial variables from the basis (all sit at level zero
    /// here). Rows that cannot pivot them out are redundant and dropped.
    fn drive_out_artificials(&mut self) {
        let mut r = 0;
        while r < self.rows.len() {
            if self.basis[r] < self.art_start {
                r += 1;
                continue;
            }
            let col = (0..self.art_start).find(|&j| !self.rows[r][j].is_zero());
            match col {
                Some(j) => {
                    self.pivot(r, j);
                    r += 1;
                }
                None => {
                    self.rows.remove(r);
                    self.rhs.remove(r);
                    self.basis.remove(r);
                }
            }
        }
    }

    fn phase_two(&mut self, objective: &[Rat]) -> Phase {
        let mut cost = vec![Rat::zero(); self.total_cols];
        for (j, cols) in self.var_cols.iter().enumerate() {
            match cols {
                VarCols::Nonneg(c) => cost[*c] = objective[j].clone(),
                VarCols::Free { plus, minus } => {
                    cost[*plus] = objective[j].clone();
                    cost[*minus] = -&objective[j];
                }
            }
        }
        self.load_costs(&cost);
        // Artificial columns stay out: eligibility ends at art_start.
        self.run_simplex(self.art_start)
    }

    fn extract_point(&self) -> Vec<Rat> {
        let mut std_vals = vec![Rat::zero(); self.struct_cols];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.struct_cols {
                std_vals[b] = self.rhs[i].clone();
            }
        }
        self.var_cols
            .iter()
            .map(|cols| match cols {
                VarCols::Nonneg(c) => std_vals[*c].clone(),
                VarCols::Free { plus, minus } => &std_vals[*plus] - &std_vals[*minus],
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rat {
        Rat::new(p, q).unwrap()
    }

    fn ri(p: i64) -> Rat {
        Rat::from_int(p)
    }

    #[test]
    fn unit_simplex_is_feasible() {
        let out = lp_feasible_point(
            vec![(vec![ri(1), ri(1)], ri(1))],
            vec![],
            vec![true, true],
        )
        .unwrap();
        assert_eq!(out.status, LpStatus::Feasible);
        let x = out.point.unwrap();
        assert_eq!(&x[0] + &x[1], ri(1));
        assert!(!x[0].is_negative() && !x[1].is_negative());
    }

    #[test]
    fn sign_contradiction_is_infeasible() {
        let out =
            lp_feasible_point(vec![(vec![ri(1)], ri(-1))], vec![], vec![true]).unwrap();
        assert_eq!(out.status, LpStatus::Infeasible);
        assert!(out.point.is_none());
    }

    #[test]
    fn single_bound_optimum() {
        let p = LpProblem {
            num_vars: 1,
            objective: vec![ri(1)],
            eq: vec![],
            ineq: vec![(vec![ri(1)], ri(2))],
            nonneg: vec![true],
        };
        let out = lp_solve(&p).unwrap();
        assert_eq!(out.status, LpStatus::Optimal);
        assert_eq!(out.objective_value.unwrap(), ri(2));
        assert_eq!(out.point.unwrap(), vec![ri(2)]);
    }

    #[test]
    fn inconsistent_equalities_are_infeasible() {
        let out = lp_feasible_point(
            vec![
                (vec![ri(1), ri(1)], ri(1)),
                (vec![ri(1), ri(1)], ri(2)),
            ],
            vec![],
            vec![true, true],
        )
        .unwrap();
        assert_eq!(out.status, LpStatus::Infeasible);
    }

    #[test]
    fn empty_constraints_free_var() {
        let out = lp_feasible_point(vec![], vec![], vec![false]).unwrap();
        assert_eq!(out.status, LpStatus::Feasible);
        assert_eq!(out.point.unwrap(), vec![ri(0)]);
    }

    #[test]
    fn unbounded_is_detected() {
        let p = LpProblem {
            num_vars: 1,
            objective: vec![ri(1)],
            eq: vec![],
            ineq: vec![],
            nonneg: vec![true],
        };
        assert_eq!(lp_solve(&p).unwrap().status, LpStatus::Unbounded);

        // free variable, only an upper bound on the negative direction
        let p = LpProblem {
            num_vars: 1,
            objective: vec![ri(-1)],
            eq: vec![],
            ineq: vec![(vec![ri(1)], ri(5))],
            nonneg: vec![false],
        };
        assert_eq!(lp_solve(&p).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn free_variable_takes_negative_value() {
        let out = lp_feasible_point(
            vec![(vec![ri(1)], ri(-7))],
            vec![],
            vec![false],
        )
        .unwrap();
        assert_eq!(out.status, LpStatus::Feasible);
        assert_eq!(out.point.unwrap(), vec![ri(-7)]);
    }

    #[test]
    fn beale_cycling_instance_terminates_at_known_optimum() {
        // Beale's classic example: Dantzig's rule cycles on it; Bland's rule
        // must terminate with optimum 1/20.
        let p = LpProblem {
            num_vars: 4,
            objective: vec![r(3, 4), ri(-150), r(1, 50), ri(-6)],
            eq: vec![],
            ineq: vec![
                (vec![r(1, 4), ri(-60), r(-1, 25), ri(9)], ri(0)),
                (vec![r(1, 2), ri(-90), r(-1, 50), ri(3)], ri(0)),
                (vec![ri(0), ri(0), ri(1), ri(0)], ri(1)),
            ],
            nonneg: vec![true; 4],
        };
        let out = lp_solve(&p).unwrap();
        assert_eq!(out.status, LpStatus::Optimal);
        assert_eq!(out.objective_value.unwrap(), r(1, 20));
    }

    #[test]
    fn degenerate_equalities_with_redundant_rows() {
        // Third row is the sum of the first two; solver must drop it, not loop.
        let out = lp_feasible_point(
            vec![
                (vec![ri(1), ri(0)], ri(1)),
                (vec![ri(0), ri(1)], ri(2)),
                (vec![ri(1), ri(1)], ri(3)),
            ],
            vec![],
            vec![true, true],
        )
        .unwrap();
        assert_eq!(out.status, LpStatus::Feasible);
        assert_eq!(out.point.unwrap(), vec![ri(1), ri(2)]);
    }

    #[test]
    fn optimum_with_free_value_variable() {
        // maximize c subject to c <= x1, c <= x2, x on the unit simplex:
        // the exact optimum is c = 1/2 at x = (1/2, 1/2).
        let p = LpProblem {
            num_vars: 3,
            objective: vec![ri(0), ri(0), ri(1)],
            eq: vec![(vec![ri(1), ri(1), ri(0)], ri(1))],
            ineq: vec![
                (vec![ri(-1), ri(0), ri(1)], ri(0)),
                (vec![ri(0), ri(-1), ri(1)], ri(0)),
            ],
            nonneg: vec![true, true, false],
        };
        let out = lp_solve(&p).unwrap();
        assert_eq!(out.status, LpStatus::Optimal);
        assert_eq!(out.objective_value.unwrap(), r(1, 2));
    }

    #[test]
    fn dimension_mismatch_is_error() {
        let p = LpProblem {
            num_vars: 2,
            objective: vec![ri(1)],
            eq: vec![],
            ineq: vec![],
            nonneg: vec![true, true],
        };
        assert!(lp_solve(&p).is_err());

        let p = LpProblem {
            num_vars: 2,
            objective: vec![],
            eq: vec![(vec![ri(1)], ri(1))],
            ineq: vec![],
            nonneg: vec![true, true],
        };
        assert!(lp_solve(&p).is_err());
    }
}
