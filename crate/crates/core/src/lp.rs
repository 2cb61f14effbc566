//! Exact rational linear programming.
//!
//! A dense two-phase simplex over `BigRational` with Bland's smallest-index
//! pivot rule, so every run is deterministic and terminates. Free variables
//! are split into nonnegative pairs internally; results are reported in the
//! original variable space.

use num_traits::{One, Signed, Zero};

use crate::rat::{Rat, RatVec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: RatVec,
    pub rhs: Rat,
    pub rel: Relation,
}

impl Constraint {
    pub fn new(coeffs: RatVec, rel: Relation, rhs: Rat) -> Self {
        Constraint { coeffs, rhs, rel }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    /// Maximum attained at a basic solution.
    Optimal { value: Rat, point: RatVec },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn optimal(&self) -> Option<(&Rat, &RatVec)> {
        match self {
            LpOutcome::Optimal { value, point } => Some((value, point)),
            _ => None,
        }
    }
}

struct Tableau {
    /// m rows of length `ncols + 1`; last entry is the rhs.
    rows: Vec<RatVec>,
    /// objective row (reduced costs), length `ncols + 1`; last entry is -value
    obj: RatVec,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        debug_assert!(!p.is_zero());
        for x in self.rows[r].iter_mut() {
            *x = &*x / &p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, pv) in row.iter_mut().zip(&pivot_row) {
                let sub = &f * pv;
                *x = &*x - sub;
            }
        }
        if !self.obj[c].is_zero() {
            let f = self.obj[c].clone();
            for (x, pv) in self.obj.iter_mut().zip(&pivot_row) {
                let sub = &f * pv;
                *x = &*x - sub;
            }
        }
        self.basis[r] = c;
    }

    /// Recompute the reduced-cost row for the given variable costs
    /// (maximization: entering candidates have positive reduced cost).
    fn set_objective(&mut self, costs: &[Rat]) {
        let m = self.rows.len();
        self.obj = vec![Rat::zero(); self.ncols + 1];
        for j in 0..self.ncols {
            self.obj[j] = costs[j].clone();
        }
        for i in 0..m {
            let cb = costs[self.basis[i]].clone();
            if cb.is_zero() {
                continue;
            }
            for j in 0..=self.ncols {
                let sub = &cb * &self.rows[i][j];
                self.obj[j] = &self.obj[j] - sub;
            }
        }
    }

    /// Bland's rule iteration until optimal or unbounded.
    fn optimize(&mut self, allowed: &dyn Fn(usize) -> bool) -> bool {
        loop {
            let entering = (0..self.ncols)
                .find(|&j| allowed(j) && self.obj[j].is_positive());
            let Some(c) = entering else { return true };
            let mut leave: Option<(usize, Rat)> = None;
            for i in 0..self.rows.len() {
                if !self.rows[i][c].is_positive() {
                    continue;
                }
                let ratio = &self.rows[i][self.ncols] / &self.rows[i][c];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => {
                        ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((r, _)) = leave else { return false };
            self.pivot(r, c);
        }
    }
}

/// Maximizes `objective . x` subject to the constraints; variables are free.
pub fn solve_lp(objective: &[Rat], constraints: &[Constraint]) -> LpOutcome {
    let n = objective.len();
    let m = constraints.len();
    if m == 0 {
        return if objective.iter().all(|c| c.is_zero()) {
            LpOutcome::Optimal { value: Rat::zero(), point: vec![Rat::zero(); n] }
        } else {
            LpOutcome::Unbounded
        };
    }

    // columns: x+ (n), x- (n), slack/surplus (one per inequality), artificial (m)
    let n_slack = constraints.iter().filter(|c| c.rel != Relation::Eq).count();
    let ncols = 2 * n + n_slack + m;
    let art0 = 2 * n + n_slack;

    let mut rows: Vec<RatVec> = Vec::with_capacity(m);
    let mut slack_idx = 0;
    for (i, c) in constraints.iter().enumerate() {
        assert_eq!(c.coeffs.len(), n, "constraint arity mismatch");
        let mut row = vec![Rat::zero(); ncols + 1];
        let flip = c.rhs.is_negative();
        let sgn = if flip { -Rat::one() } else { Rat::one() };
        for j in 0..n {
            let v = &sgn * &c.coeffs[j];
            row[j] = v.clone();
            row[n + j] = -v;
        }
        if c.rel != Relation::Eq {
            let mut s = match c.rel {
                Relation::Le => Rat::one(),
                Relation::Ge => -Rat::one(),
                Relation::Eq => unreachable!(),
            };
            if flip {
                s = -s;
            }
            row[2 * n + slack_idx] = s;
            slack_idx += 1;
        }
        row[art0 + i] = Rat::one();
        row[ncols] = &sgn * &c.rhs;
        rows.push(row);
    }

    let mut t = Tableau { rows, obj: vec![], basis: (art0..art0 + m).collect(), ncols };

    // phase 1: maximize -sum(artificials)
    let mut costs = vec![Rat::zero(); ncols];
    for j in art0..art0 + m {
        costs[j] = -Rat::one();
    }
    t.set_objective(&costs);
    let finished = t.optimize(&|_| true);
    debug_assert!(finished, "phase 1 cannot be unbounded");
    let phase1 = -t.obj[t.ncols].clone();
    if phase1.is_negative() {
        return LpOutcome::Infeasible;
    }
    // drive remaining artificials out of the basis (degenerate rows)
    for i in 0..t.rows.len() {
        if t.basis[i] < art0 {
            continue;
        }
        if let Some(c) = (0..art0).find(|&j| !t.rows[i][j].is_zero()) {
            t.pivot(i, c);
        }
        // an all-zero structural row is redundant; its artificial stays basic
        // at value 0 and never re-enters because phase 2 forbids artificials
    }

    // phase 2
    let mut costs = vec![Rat::zero(); ncols];
    for j in 0..n {
        costs[j] = objective[j].clone();
        costs[n + j] = -objective[j].clone();
    }
    t.set_objective(&costs);
    if !t.optimize(&|j| j < art0) {
        return LpOutcome::Unbounded;
    }

    let mut point = vec![Rat::zero(); n];
    for (i, &b) in t.basis.iter().enumerate() {
        if b < n {
            point[b] = &point[b] + &t.rows[i][t.ncols];
        } else if b < 2 * n {
            point[b - n] = &point[b - n] - &t.rows[i][t.ncols];
        }
    }
    let value = crate::rat::dot(objective, &point);
    LpOutcome::Optimal { value, point }
}

/// A feasible point of the system, if one exists.
pub fn lp_feasible(constraints: &[Constraint]) -> Option<RatVec> {
    let n = constraints.first().map_or(0, |c| c.coeffs.len());
    match solve_lp(&vec![Rat::zero(); n], constraints) {
        LpOutcome::Optimal { point, .. } => Some(point),
        LpOutcome::Infeasible => None,
        LpOutcome::Unbounded => unreachable!("zero objective cannot be unbounded"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat_int, rvec};

    #[test]
    fn interval_max() {
        // maximize x s.t. 0 <= x <= 1
        let out = solve_lp(
            &rvec(&[1]),
            &[
                Constraint::new(rvec(&[1]), Relation::Ge, rat_int(0)),
                Constraint::new(rvec(&[1]), Relation::Le, rat_int(1)),
            ],
        );
        let (v, p) = out.optimal().unwrap();
        assert_eq!(*v, rat_int(1));
        assert_eq!(p, &rvec(&[1]));
    }

    #[test]
    fn triangle_vertex_optimum() {
        // maximize x + y over conv((0,0),(3,0),(0,2)) given by inequalities;
        // vertex-enumeration oracle: max over {0, 3, 2} attained at (3,0)
        let cons = [
            Constraint::new(rvec(&[1, 0]), Relation::Ge, rat_int(0)),
            Constraint::new(rvec(&[0, 1]), Relation::Ge, rat_int(0)),
            Constraint::new(rvec(&[2, 3]), Relation::Le, rat_int(6)),
        ];
        let out = solve_lp(&rvec(&[1, 1]), &cons);
        let (v, p) = out.optimal().unwrap();
        assert_eq!(*v, rat_int(3));
        assert_eq!(p, &rvec(&[3, 0]));
    }

    #[test]
    fn infeasible_system() {
        let out = solve_lp(
            &rvec(&[1]),
            &[
                Constraint::new(rvec(&[1]), Relation::Le, rat_int(0)),
                Constraint::new(rvec(&[1]), Relation::Ge, rat_int(1)),
            ],
        );
        assert_eq!(out, LpOutcome::Infeasible);
    }

    #[test]
    fn unbounded_direction() {
        let out = solve_lp(
            &rvec(&[1]),
            &[Constraint::new(rvec(&[1]), Relation::Ge, rat_int(0))],
        );
        assert_eq!(out, LpOutcome::Unbounded);
    }

    #[test]
    fn negative_rhs_and_free_vars() {
        // maximize x s.t. -5 <= x <= -2  (optimum -2)
        let out = solve_lp(
            &rvec(&[1]),
            &[
                Constraint::new(rvec(&[1]), Relation::Le, rat_int(-2)),
                Constraint::new(rvec(&[1]), Relation::Ge, rat_int(-5)),
            ],
        );
        let (v, p) = out.optimal().unwrap();
        assert_eq!(*v, rat_int(-2));
        assert_eq!(p, &rvec(&[-2]));
    }

    #[test]
    fn equality_constraints() {
        // maximize x + 2y s.t. x + y = 1, 0 <= x, 0 <= y
        let cons = [
            Constraint::new(rvec(&[1, 1]), Relation::Eq, rat_int(1)),
            Constraint::new(rvec(&[1, 0]), Relation::Ge, rat_int(0)),
            Constraint::new(rvec(&[0, 1]), Relation::Ge, rat_int(0)),
        ];
        let out = solve_lp(&rvec(&[1, 2]), &cons);
        let (v, p) = out.optimal().unwrap();
        assert_eq!(*v, rat_int(2));
        assert_eq!(p, &rvec(&[0, 1]));
    }
}
