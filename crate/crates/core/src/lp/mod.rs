//! Linear and mixed-binary linear programming.
//!
//! [`solve_lp`] runs a dense bounded revised simplex (composite phase 1,
//! then phase 2; a dual simplex is used whenever the starting basis is dual
//! feasible). [`solve_milp`] wraps it in a best-first branch-and-bound over
//! the binary variables, re-optimising each node from the previous node's
//! basis.
//!
//! ```
//! use stackelberg_core::lp::{solve_lp, LpModel, Relation, Sense};
//!
//! let mut model = LpModel::new(Sense::Maximize);
//! let a = model.add_var(0.0, f64::INFINITY);
//! let b = model.add_var(0.0, f64::INFINITY);
//! model.set_objective(a, 3.0);
//! model.set_objective(b, 2.0);
//! model.add_constraint(&[(a, 1.0), (b, 1.0)], Relation::Le, 4.0);
//! model.add_constraint(&[(a, 1.0)], Relation::Le, 2.0);
//! let sol = solve_lp(&model).unwrap();
//! assert!((sol.objective_value - 10.0).abs() < 1e-9);
//! ```

mod milp;
mod simplex;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write as _;

pub use milp::{solve_milp, solve_milp_from, solve_milp_with, MilpOptions};

/// Maximum constraint or bound violation accepted in a reported optimum.
pub const FEASIBILITY_TOL: f64 = 1e-7;
/// Binary values must lie this close to 0 or 1.
pub const INTEGRALITY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LpError {
    #[error("constraint {constraint} references variable {var} but the model has {num_vars}")]
    DimensionMismatch { constraint: usize, var: usize, num_vars: usize },
    #[error("variable {0} has invalid bounds")]
    InvalidBounds(usize),
    #[error("non-finite coefficient in {0}")]
    NonFinite(&'static str),
    #[error("model has binary variables; use solve_milp")]
    HasBinaries,
    #[error("numerical failure: {0}")]
    Numerical(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

impl Relation {
    fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Eq => "=",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Continuous,
    Binary,
}

/// Handle of a model variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(usize);

impl Var {
    pub fn index(self) -> usize {
        self.0
    }
}

/// A sparse linear constraint `Σ coeff·x (rel) rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub terms: Vec<(usize, f64)>,
    pub relation: Relation,
    pub rhs: f64,
}

impl Constraint {
    pub fn activity(&self, values: &[f64]) -> f64 {
        self.terms.iter().map(|&(j, a)| a * values[j]).sum()
    }

    pub fn violation(&self, values: &[f64]) -> f64 {
        let lhs = self.activity(values);
        match self.relation {
            Relation::Le => (lhs - self.rhs).max(0.0),
            Relation::Ge => (self.rhs - lhs).max(0.0),
            Relation::Eq => (lhs - self.rhs).abs(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpModel {
    sense: Sense,
    objective: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    kind: Vec<VarKind>,
    priority: Vec<u8>,
    constraints: Vec<Constraint>,
}

impl LpModel {
    pub fn new(sense: Sense) -> Self {
        LpModel {
            sense,
            objective: Vec::new(),
            lower: Vec::new(),
            upper: Vec::new(),
            kind: Vec::new(),
            priority: Vec::new(),
            constraints: Vec::new(),
        }
    }

    pub fn add_var_with(&mut self, lower: f64, upper: f64, kind: VarKind) -> Var {
        self.objective.push(0.0);
        self.lower.push(lower);
        self.upper.push(upper);
        self.kind.push(kind);
        self.priority.push(0);
        Var(self.objective.len() - 1)
    }

    /// A continuous variable in `[lower, upper]`; either bound may be infinite.
    pub fn add_var(&mut self, lower: f64, upper: f64) -> Var {
        self.add_var_with(lower, upper, VarKind::Continuous)
    }

    pub fn add_free_var(&mut self) -> Var {
        self.add_var(f64::NEG_INFINITY, f64::INFINITY)
    }

    pub fn add_binary(&mut self) -> Var {
        self.add_var_with(0.0, 1.0, VarKind::Binary)
    }

    pub fn set_objective(&mut self, var: Var, coeff: f64) {
        self.objective[var.0] = coeff;
    }

    /// Adds `coeff` to the objective coefficient of `var`.
    pub fn add_objective(&mut self, var: Var, coeff: f64) {
        self.objective[var.0] += coeff;
    }

    pub fn set_bounds(&mut self, var: Var, lower: f64, upper: f64) {
        self.lower[var.0] = lower;
        self.upper[var.0] = upper;
    }

    /// Adds `Σ coeff·var (rel) rhs`; repeated variables are summed.
    pub fn add_constraint(&mut self, terms: &[(Var, f64)], relation: Relation, rhs: f64) -> usize {
        let mut sorted: Vec<(usize, f64)> = terms.iter().map(|&(v, a)| (v.0, a)).collect();
        sorted.sort_by_key(|e| e.0);
        let mut merged: Vec<(usize, f64)> = Vec::with_capacity(sorted.len());
        for (j, a) in sorted {
            match merged.last_mut() {
                Some((last, acc)) if *last == j => *acc += a,
                _ => merged.push((j, a)),
            }
        }
        merged.retain(|&(_, a)| a != 0.0);
        self.constraints.push(Constraint { terms: merged, relation, rhs });
        self.constraints.len() - 1
    }

    /// Adds a constraint given as a dense coefficient vector over all variables.
    pub fn add_dense_constraint(&mut self, coeffs: &[f64], relation: Relation, rhs: f64) -> usize {
        let terms: Vec<(usize, f64)> =
            coeffs.iter().enumerate().filter(|(_, a)| **a != 0.0).map(|(j, a)| (j, *a)).collect();
        self.constraints.push(Constraint { terms, relation, rhs });
        self.constraints.len() - 1
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn bounds(&self, j: usize) -> (f64, f64) {
        (self.lower[j], self.upper[j])
    }

    /// Branch-and-bound branches on fractional binaries of the highest
    /// priority first (default 0).
    pub fn set_branch_priority(&mut self, var: Var, priority: u8) {
        self.priority[var.0] = priority;
    }

    pub fn branch_priority(&self, j: usize) -> u8 {
        self.priority[j]
    }

    pub fn kind(&self, j: usize) -> VarKind {
        self.kind[j]
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn binaries(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_vars()).filter(|&j| self.kind[j] == VarKind::Binary)
    }

    pub fn has_binaries(&self) -> bool {
        self.kind.contains(&VarKind::Binary)
    }

    pub fn validate(&self) -> Result<(), LpError> {
        let n = self.num_vars();
        if self.objective.iter().any(|c| !c.is_finite()) {
            return Err(LpError::NonFinite("objective"));
        }
        for j in 0..n {
            let (l, u) = (self.lower[j], self.upper[j]);
            let bad = l.is_nan()
                || u.is_nan()
                || l > u
                || l == f64::INFINITY
                || u == f64::NEG_INFINITY
                || (self.kind[j] == VarKind::Binary && (l < 0.0 || u > 1.0));
            if bad {
                return Err(LpError::InvalidBounds(j));
            }
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if !c.rhs.is_finite() {
                return Err(LpError::NonFinite("constraint right-hand side"));
            }
            for &(j, a) in &c.terms {
                if j >= n {
                    return Err(LpError::DimensionMismatch { constraint: i, var: j, num_vars: n });
                }
                if !a.is_finite() {
                    return Err(LpError::NonFinite("constraint coefficient"));
                }
            }
        }
        Ok(())
    }

    pub fn objective_value(&self, values: &[f64]) -> f64 {
        self.objective.iter().zip(values).map(|(c, x)| c * x).sum()
    }

    /// Largest constraint or bound violation of `values`.
    pub fn residual(&self, values: &[f64]) -> f64 {
        let mut worst = 0.0_f64;
        for c in &self.constraints {
            worst = worst.max(c.violation(values));
        }
        for (j, &v) in values.iter().enumerate() {
            worst = worst.max(self.lower[j] - v).max(v - self.upper[j]);
        }
        worst
    }

    /// Plain-text dump: the objective, one constraint per line as
    /// `<coeffs> <rel> <rhs>` with dense coefficients, then the bounds.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let sense = match self.sense {
            Sense::Maximize => "max",
            Sense::Minimize => "min",
        };
        let _ = write!(out, "{sense}");
        for c in &self.objective {
            let _ = write!(out, " {c}");
        }
        out.push('\n');
        let mut dense = alloc::vec![0.0; self.num_vars()];
        for c in &self.constraints {
            dense.iter_mut().for_each(|v| *v = 0.0);
            for &(j, a) in &c.terms {
                dense[j] += a;
            }
            let mut first = true;
            for a in &dense {
                if !first {
                    out.push(' ');
                }
                first = false;
                let _ = write!(out, "{a}");
            }
            let _ = writeln!(out, " {} {}", c.relation.symbol(), c.rhs);
        }
        for j in 0..self.num_vars() {
            let kind = match self.kind[j] {
                VarKind::Continuous => "",
                VarKind::Binary => " binary",
            };
            let _ = writeln!(out, "bound x{j} {} {}{kind}", self.lower[j], self.upper[j]);
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    /// Iteration or node limit hit; `values` holds the best incumbent, if any.
    IterationLimit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Variable values; empty when no feasible point is known.
    pub values: Vec<f64>,
    pub objective_value: f64,
    pub iterations: u64,
    pub nodes_explored: u64,
    /// Row multipliers `y` of the final basis, in the model's sense.
    pub duals: Vec<f64>,
    /// `c_j − yᵀA_j` for every model variable.
    pub reduced_costs: Vec<f64>,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    pub fn value(&self, var: Var) -> f64 {
        self.values[var.0]
    }

    fn without_point(status: LpStatus, iterations: u64) -> Self {
        LpSolution {
            status,
            values: Vec::new(),
            objective_value: f64::NAN,
            iterations,
            nodes_explored: 0,
            duals: Vec::new(),
            reduced_costs: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LpOptions {
    /// Simplex iteration cap; `None` means `100 · (vars + constraints)`.
    pub iteration_limit: Option<u64>,
}

impl LpOptions {
    fn limit_for(&self, model: &LpModel) -> u64 {
        self.iteration_limit.unwrap_or(100 * (model.num_vars() + model.num_constraints()).max(1) as u64)
    }
}

pub fn solve_lp(model: &LpModel) -> Result<LpSolution, LpError> {
    solve_lp_with(model, &LpOptions::default())
}

pub fn solve_lp_with(model: &LpModel, options: &LpOptions) -> Result<LpSolution, LpError> {
    model.validate()?;
    if model.has_binaries() {
        return Err(LpError::HasBinaries);
    }
    let limit = options.limit_for(model);
    let mut ws = simplex::Simplex::new(model)?;
    ws.set_iteration_budget(limit);
    let status = ws.optimize();
    finish_lp(model, &ws, status)
}

fn finish_lp(model: &LpModel, ws: &simplex::Simplex, status: simplex::Status) -> Result<LpSolution, LpError> {
    match status {
        simplex::Status::Optimal => {
            let sol = ws.solution(model);
            let residual = model.residual(&sol.values);
            if residual > FEASIBILITY_TOL {
                return Err(LpError::Numerical(alloc::format!(
                    "post-solve residual {residual:e} exceeds tolerance"
                )));
            }
            Ok(sol)
        }
        simplex::Status::Infeasible => Ok(LpSolution::without_point(LpStatus::Infeasible, ws.iterations())),
        simplex::Status::Unbounded => Ok(LpSolution::without_point(LpStatus::Unbounded, ws.iterations())),
        simplex::Status::IterationLimit => {
            Ok(LpSolution::without_point(LpStatus::IterationLimit, ws.iterations()))
        }
        simplex::Status::Numerical => Err(LpError::Numerical("simplex failed to converge".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    const INF: f64 = f64::INFINITY;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-9
    }

    #[test]
    fn single_variable_bound() {
        let mut m = LpModel::new(Sense::Maximize);
        let x = m.add_var(0.0, INF);
        m.set_objective(x, 1.0);
        m.add_constraint(&[(x, 1.0)], Relation::Le, 1.0);
        let s = solve_lp(&m).unwrap();
        assert!(s.is_optimal());
        assert!(close(s.objective_value, 1.0) && close(s.value(x), 1.0));
    }

    #[test]
    fn two_dimensional_vertex() {
        // Vertices of {a+b ≤ 4, a ≤ 2, a,b ≥ 0}: (0,0), (2,0), (2,2), (0,4);
        // 3a+2b is 0, 6, 10, 8 there.
        let mut m = LpModel::new(Sense::Maximize);
        let a = m.add_var(0.0, INF);
        let b = m.add_var(0.0, INF);
        m.set_objective(a, 3.0);
        m.set_objective(b, 2.0);
        m.add_constraint(&[(a, 1.0), (b, 1.0)], Relation::Le, 4.0);
        m.add_constraint(&[(a, 1.0)], Relation::Le, 2.0);
        let s = solve_lp(&m).unwrap();
        assert!(close(s.objective_value, 10.0));
        assert!(close(s.value(a), 2.0) && close(s.value(b), 2.0));
    }

    #[test]
    fn contradictory_equalities_are_infeasible() {
        let mut m = LpModel::new(Sense::Minimize);
        let x = m.add_var(0.0, INF);
        m.add_constraint(&[(x, 1.0)], Relation::Eq, 1.0);
        m.add_constraint(&[(x, 1.0)], Relation::Eq, 2.0);
        assert_eq!(solve_lp(&m).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn unbounded_ray_is_reported() {
        let mut m = LpModel::new(Sense::Maximize);
        let x = m.add_var(0.0, INF);
        let y = m.add_var(0.0, INF);
        m.set_objective(x, 1.0);
        m.add_constraint(&[(x, 1.0), (y, -1.0)], Relation::Le, 1.0);
        assert_eq!(solve_lp(&m).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn free_and_negative_variables() {
        // min x + y with x free, y ≤ −1, x − y ≥ 3 → x = 2, y = −1.
        let mut m = LpModel::new(Sense::Minimize);
        let x = m.add_free_var();
        let y = m.add_var(-INF, -1.0);
        m.set_objective(x, 1.0);
        m.set_objective(y, 1.0);
        m.add_constraint(&[(x, 1.0), (y, -1.0)], Relation::Ge, 3.0);
        m.add_constraint(&[(y, 1.0)], Relation::Ge, -5.0);
        let s = solve_lp(&m).unwrap();
        // Any point on x − y = 3 with y ∈ [−5, −1] gives 2y + 3; minimum at y = −5.
        assert!(close(s.objective_value, -7.0));
        assert!(close(s.value(y), -5.0) && close(s.value(x), -2.0));
    }

    #[test]
    fn binaries_rejected_by_lp_entry_point() {
        let mut m = LpModel::new(Sense::Maximize);
        m.add_binary();
        assert_eq!(solve_lp(&m), Err(LpError::HasBinaries));
    }

    #[test]
    fn bad_models_are_argument_errors() {
        let mut m = LpModel::new(Sense::Maximize);
        let x = m.add_var(1.0, 0.0);
        m.set_objective(x, 1.0);
        assert_eq!(solve_lp(&m), Err(LpError::InvalidBounds(0)));
        let mut m = LpModel::new(Sense::Maximize);
        m.add_var(0.0, 1.0);
        m.add_dense_constraint(&[1.0, 1.0], Relation::Le, 1.0);
        assert!(matches!(solve_lp(&m), Err(LpError::DimensionMismatch { .. })));
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's classic cycling LP (as a maximisation).
        let mut m = LpModel::new(Sense::Maximize);
        let v: Vec<Var> = (0..4).map(|_| m.add_var(0.0, INF)).collect();
        for (var, c) in v.iter().zip([0.75, -150.0, 0.02, -6.0]) {
            m.set_objective(*var, c);
        }
        m.add_constraint(&[(v[0], 0.25), (v[1], -60.0), (v[2], -0.04), (v[3], 9.0)], Relation::Le, 0.0);
        m.add_constraint(&[(v[0], 0.5), (v[1], -90.0), (v[2], -0.02), (v[3], 3.0)], Relation::Le, 0.0);
        m.add_constraint(&[(v[2], 1.0)], Relation::Le, 1.0);
        let s = solve_lp(&m).unwrap();
        assert!(close(s.objective_value, 0.05));
    }

    #[test]
    fn text_dump_has_one_line_per_constraint() {
        let mut m = LpModel::new(Sense::Maximize);
        let a = m.add_var(0.0, INF);
        let b = m.add_binary();
        m.add_constraint(&[(a, 1.0), (b, 2.0)], Relation::Le, 3.0);
        let text = m.to_text();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "max 0 0");
        assert_eq!(lines[1], "1 2 <= 3");
        assert_eq!(lines[3], "bound x1 0 1 binary");
    }

    #[test]
    fn duals_reproduce_objective() {
        let mut m = LpModel::new(Sense::Maximize);
        let a = m.add_var(0.0, INF);
        let b = m.add_var(0.0, INF);
        m.set_objective(a, 3.0);
        m.set_objective(b, 2.0);
        m.add_constraint(&[(a, 1.0), (b, 1.0)], Relation::Le, 4.0);
        m.add_constraint(&[(a, 1.0)], Relation::Le, 2.0);
        let s = solve_lp(&m).unwrap();
        // y = (2, 1): 2·4 + 1·2 = 10.
        assert_eq!(s.duals.len(), 2);
        assert!(close(s.duals[0], 2.0) && close(s.duals[1], 1.0));
        assert!(s.reduced_costs.iter().all(|d| d.abs() < 1e-9));
        let _ = vec![0];
    }
}
