//! Best-first branch-and-bound over binary variables, plunging depth-first
//! (up branch first) from each popped node until it is pruned.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::simplex::{Simplex, Status};
use super::{finish_lp, LpError, LpModel, LpOptions, LpSolution, LpStatus, Sense, INTEGRALITY_TOL};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MilpOptions {
    pub lp: LpOptions,
    /// Maximum number of branch-and-bound nodes solved.
    pub node_limit: u64,
    /// Absolute optimality gap (objective units).
    pub gap: f64,
    pub integrality_tol: f64,
}

impl Default for MilpOptions {
    fn default() -> Self {
        MilpOptions {
            lp: LpOptions::default(),
            node_limit: 1_000_000,
            gap: 1e-7,
            integrality_tol: INTEGRALITY_TOL,
        }
    }
}

struct Node {
    /// Parent LP bound in the internal (maximised) objective.
    bound: f64,
    depth: usize,
    seq: u64,
    fixes: Vec<(usize, bool)>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    // Max-heap: highest bound first, then deeper, then older.
    fn cmp(&self, other: &Self) -> Ordering {
        self.bound.total_cmp(&other.bound).then(self.depth.cmp(&other.depth)).then(other.seq.cmp(&self.seq))
    }
}

pub fn solve_milp(model: &LpModel) -> Result<LpSolution, LpError> {
    solve_milp_with(model, &MilpOptions::default())
}

pub fn solve_milp_with(model: &LpModel, options: &MilpOptions) -> Result<LpSolution, LpError> {
    solve_milp_from(model, options, None)
}

/// As [`solve_milp_with`], seeded with a known solution. A `start` that is
/// not feasible (residual above tolerance or fractional binaries) is ignored.
pub fn solve_milp_from(
    model: &LpModel,
    options: &MilpOptions,
    start: Option<&[f64]>,
) -> Result<LpSolution, LpError> {
    model.validate()?;
    let binaries: Vec<usize> = model.binaries().collect();
    let per_lp = options.lp.limit_for(model);
    let mut ws = Simplex::new(model)?;
    if binaries.is_empty() {
        ws.set_iteration_budget(per_lp);
        let status = ws.optimize();
        return finish_lp(model, &ws, status);
    }
    let sign = match model.sense() {
        Sense::Maximize => 1.0,
        Sense::Minimize => -1.0,
    };
    let root_bounds: Vec<(f64, f64)> = binaries.iter().map(|&j| ws.var_bounds(j)).collect();

    let mut incumbent: Option<(f64, Vec<f64>)> = start.and_then(|x| {
        let usable = x.len() == model.num_vars()
            && model.residual(x) <= super::FEASIBILITY_TOL
            && binaries.iter().all(|&j| (x[j] - nearest_bit(x[j])).abs() <= options.integrality_tol);
        usable.then(|| (sign * model.objective_value(x), x.to_vec()))
    });
    let mut heap = BinaryHeap::new();
    let mut seq = 0u64;
    let mut dive = Some(Node { bound: f64::INFINITY, depth: 0, seq, fixes: Vec::new() });
    let mut nodes = 0u64;
    let mut first = true;
    let mut hit_limit = false;

    while let Some(node) = dive.take().or_else(|| heap.pop()) {
        if let Some((best, _)) = &incumbent {
            if node.bound <= best + options.gap {
                continue;
            }
        }
        if nodes >= options.node_limit {
            hit_limit = true;
            break;
        }
        nodes += 1;

        for (k, &j) in binaries.iter().enumerate() {
            ws.set_var_bounds(j, root_bounds[k].0, root_bounds[k].1);
        }
        for &(j, up) in &node.fixes {
            let v = if up { 1.0 } else { 0.0 };
            ws.set_var_bounds(j, v, v);
        }
        ws.set_iteration_budget(per_lp);
        let status = if first {
            first = false;
            ws.optimize()
        } else {
            ws.reoptimize()
        };
        match status {
            Status::Optimal => {}
            Status::Infeasible => continue,
            Status::Unbounded => {
                let mut sol = LpSolution::without_point(LpStatus::Unbounded, ws.iterations());
                sol.nodes_explored = nodes;
                return Ok(sol);
            }
            Status::IterationLimit => {
                hit_limit = true;
                break;
            }
            Status::Numerical => return Err(LpError::Numerical("node relaxation failed".into())),
        }
        let obj = ws.internal_objective();
        if let Some((best, _)) = &incumbent {
            if obj <= best + options.gap {
                continue;
            }
        }
        let values = ws.model_values();
        let mut branch: Option<(usize, u8, f64)> = None;
        for &j in &binaries {
            let frac = (values[j] - nearest_bit(values[j])).abs();
            if frac <= options.integrality_tol {
                continue;
            }
            let prio = model.branch_priority(j);
            if branch.is_none_or(|(_, p, f)| prio > p || (prio == p && frac > f)) {
                branch = Some((j, prio, frac));
            }
        }
        match branch {
            None => {
                // Snap the binaries and re-solve for clean continuous values.
                for &j in &binaries {
                    let v = nearest_bit(values[j]);
                    ws.set_var_bounds(j, v, v);
                }
                ws.set_iteration_budget(per_lp);
                let (obj, values) = match ws.reoptimize() {
                    Status::Optimal => (ws.internal_objective(), ws.model_values()),
                    _ => (obj, values),
                };
                if incumbent.as_ref().is_none_or(|(best, _)| obj > *best) {
                    incumbent = Some((obj, values));
                }
            }
            Some((j, _, _)) => {
                for up in [false, true] {
                    seq += 1;
                    let mut fixes = node.fixes.clone();
                    fixes.push((j, up));
                    let child = Node { bound: obj, depth: node.depth + 1, seq, fixes };
                    if up {
                        dive = Some(child);
                    } else {
                        heap.push(child);
                    }
                }
            }
        }
    }

    let iterations = ws.iterations();
    let status = if hit_limit { LpStatus::IterationLimit } else { LpStatus::Optimal };
    match incumbent {
        Some((obj, values)) => {
            let residual = model.residual(&values);
            if residual > super::FEASIBILITY_TOL {
                return Err(LpError::Numerical(alloc::format!(
                    "incumbent residual {residual:e} exceeds tolerance"
                )));
            }
            Ok(LpSolution {
                status,
                objective_value: sign * obj,
                values,
                iterations,
                nodes_explored: nodes,
                duals: Vec::new(),
                reduced_costs: Vec::new(),
            })
        }
        None => {
            let mut sol = LpSolution::without_point(
                if hit_limit { LpStatus::IterationLimit } else { LpStatus::Infeasible },
                iterations,
            );
            sol.nodes_explored = nodes;
            Ok(sol)
        }
    }
}

/// Nearest of 0 and 1; binaries never leave `[0, 1]`.
fn nearest_bit(v: f64) -> f64 {
    if v >= 0.5 {
        1.0
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{solve_lp, Relation};

    #[test]
    fn fractional_relaxation_is_cut_off() {
        let mut m = LpModel::new(Sense::Maximize);
        let y = m.add_binary();
        m.set_objective(y, 1.0);
        m.add_constraint(&[(y, 1.0)], Relation::Le, 0.5);
        let s = solve_milp(&m).unwrap();
        assert!(s.is_optimal());
        assert_eq!(s.objective_value, 0.0);
        assert_eq!(s.value(y), 0.0);
    }

    #[test]
    fn small_knapsack() {
        // Weights 3, 4, 2 with capacity 5; values 5, 6, 3. Best: items 0 and 2 → 8.
        let mut m = LpModel::new(Sense::Maximize);
        let v: Vec<_> = (0..3).map(|_| m.add_binary()).collect();
        for (var, c) in v.iter().zip([5.0, 6.0, 3.0]) {
            m.set_objective(*var, c);
        }
        m.add_constraint(&[(v[0], 3.0), (v[1], 4.0), (v[2], 2.0)], Relation::Le, 5.0);
        let s = solve_milp(&m).unwrap();
        assert!((s.objective_value - 8.0).abs() < 1e-9);
        let picked: Vec<f64> = v.iter().map(|x| s.value(*x)).collect();
        assert_eq!(picked, [1.0, 0.0, 1.0]);
    }

    #[test]
    fn pure_lp_matches_lp_solver() {
        let mut m = LpModel::new(Sense::Minimize);
        let a = m.add_var(0.0, f64::INFINITY);
        let b = m.add_var(0.0, 3.0);
        m.set_objective(a, 2.0);
        m.set_objective(b, 1.0);
        m.add_constraint(&[(a, 1.0), (b, 1.0)], Relation::Ge, 4.0);
        let lp = solve_lp(&m).unwrap();
        let mip = solve_milp(&m).unwrap();
        assert_eq!(lp.status, mip.status);
        assert!((lp.objective_value - mip.objective_value).abs() < 1e-12);
        assert!((lp.objective_value - 5.0).abs() < 1e-9);
    }

    #[test]
    fn infeasible_integer_program() {
        // y1 + y2 = 1.5 has no binary solution.
        let mut m = LpModel::new(Sense::Maximize);
        let y1 = m.add_binary();
        let y2 = m.add_binary();
        m.add_constraint(&[(y1, 1.0), (y2, 1.0)], Relation::Eq, 1.5);
        assert_eq!(solve_milp(&m).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn node_limit_reports_limit() {
        let mut m = LpModel::new(Sense::Maximize);
        let v: Vec<_> = (0..6).map(|_| m.add_binary()).collect();
        let terms: Vec<_> = v.iter().map(|x| (*x, 2.0)).collect();
        for x in &v {
            m.set_objective(*x, 1.0);
        }
        m.add_constraint(&terms, Relation::Le, 5.0);
        let opts = MilpOptions { node_limit: 1, ..MilpOptions::default() };
        assert_eq!(solve_milp_with(&m, &opts).unwrap().status, LpStatus::IterationLimit);
        let s = solve_milp(&m).unwrap();
        assert!((s.objective_value - 2.0).abs() < 1e-9);
    }

    #[test]
    fn mixed_binary_with_continuous_coupling() {
        // max x + 2y, x ≤ 3y + 0.5, x ≤ 2, y binary, penalised by y: x + 2y − 3y.
        let mut m = LpModel::new(Sense::Maximize);
        let x = m.add_var(0.0, 2.0);
        let y = m.add_binary();
        m.set_objective(x, 1.0);
        m.set_objective(y, -0.75);
        m.add_constraint(&[(x, 1.0), (y, -3.0)], Relation::Le, 0.5);
        // y = 0: x = 0.5 → 0.5. y = 1: x = 2 → 1.25.
        let s = solve_milp(&m).unwrap();
        assert!((s.objective_value - 1.25).abs() < 1e-9);
        assert_eq!(s.value(y), 1.0);
    }
}
