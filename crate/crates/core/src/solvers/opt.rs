//! The optimal-policy program and its IC / mixed variants.
//!
//! Variables per report `θ`: `x̃^θ_{ji}` (the mass the leader puts on row `i`
//! while inducing `j`) and `p^θ_j` with `Σ_i x̃^θ_{ji} = p^θ_j`, `Σ_j p^θ_j = 1`.
//! With binary `p` the block is a pure outcome `⟨x̃^θ_{j*}, j*⟩`; with
//! continuous `p` it is a mixture whose components are `x̃^θ_j / p^θ_j`.
//! Without IC, binary `y^θ_β` selects the report of true type `θ` and `μ_θ`
//! is the leader's utility from it. Two additions keep that search small:
//! the cut `μ_θ ≤ Σ_β μ̄_θβ·y^θ_β`, where `μ̄_θβ` bounds what the leader can
//! get from `θ` reporting `β` (pairs with no valid policy fix `y^θ_β = 0`),
//! and a start from the IC optimum, which is always feasible.

use alloc::vec::Vec;

use crate::game::{Game, Matrix, MixedStrategy, Mixture, Outcome, Policy};
use crate::lp::{
    solve_milp_from, solve_milp_with, LpModel, LpSolution, LpStatus, MilpOptions, Relation, Sense, Var,
};

use super::approx::report_value_bounds;
use super::{add_best_response, check_epsilon, finish, unexpected};
use super::{Method, SolveError, SolveOptions, SolveReport, SolverStats, Timer};

/// Outcomes with weight at or below this are dropped when a mixed policy is
/// read back from the program.
const MIN_WEIGHT: f64 = 1e-9;

pub(super) struct Layout {
    m: usize,
    n: usize,
    /// `xt[(θ·n + j)·m + i]`
    xt: Vec<Var>,
    /// `p[θ·n + j]`
    p: Vec<Var>,
}

impl Layout {
    fn xt(&self, t: usize, j: usize) -> &[Var] {
        let start = (t * self.n + j) * self.m;
        &self.xt[start..start + self.m]
    }

    fn p(&self, t: usize, j: usize) -> Var {
        self.p[t * self.n + j]
    }
}

/// Builds the program solved by [`solve_opt_with`]; useful for dumping.
pub fn opt_program(
    game: &Game,
    ic: bool,
    mixed: bool,
    options: &SolveOptions,
) -> Result<LpModel, SolveError> {
    let bounds = if ic { Vec::new() } else { report_value_bounds(game, mixed, &mut SolverStats::default())? };
    Ok(build(game, ic, mixed, options, &bounds).0)
}

/// `bounds` (row-major `θ × β`) is only read when `ic` is false.
fn build(
    game: &Game,
    ic: bool,
    mixed: bool,
    options: &SolveOptions,
    bounds: &[Option<f64>],
) -> (LpModel, Layout) {
    let (m, n, k) = (game.m(), game.n(), game.num_types());
    let eps = options.epsilon;
    let leader = game.leader();
    let mut model = LpModel::new(Sense::Maximize);

    let xt: Vec<Var> = (0..k * n * m).map(|_| model.add_var(0.0, 1.0)).collect();
    let p: Vec<Var> =
        (0..k * n).map(|_| if mixed { model.add_var(0.0, 1.0) } else { model.add_binary() }).collect();
    let layout = Layout { m, n, xt, p };

    for t in 0..k {
        let terms: Vec<(Var, f64)> = (0..n).map(|j| (layout.p(t, j), 1.0)).collect();
        model.add_constraint(&terms, Relation::Eq, 1.0);
        for j in 0..n {
            let mut terms: Vec<(Var, f64)> = layout.xt(t, j).iter().map(|v| (*v, 1.0)).collect();
            terms.push((layout.p(t, j), -1.0));
            model.add_constraint(&terms, Relation::Eq, 0.0);
        }
        let u = &game.types()[t].payoff;
        for j in 0..n {
            add_best_response(&mut model, u, layout.xt(t, j), j, eps, Some(layout.p(t, j)));
        }
    }

    // L(β): leader utility of entry β; V_θ(β): type θ's utility of entry β.
    let leader_terms = |beta: usize| -> Vec<(Var, f64)> {
        let mut terms = Vec::with_capacity(n * m);
        for j in 0..n {
            for (i, v) in layout.xt(beta, j).iter().enumerate() {
                terms.push((*v, leader.get(i, j)));
            }
        }
        terms
    };
    let follower_terms = |t: usize, beta: usize, sign: f64| -> Vec<(Var, f64)> {
        let u = &game.types()[t].payoff;
        let mut terms = Vec::with_capacity(n * m);
        for j in 0..n {
            for (i, v) in layout.xt(beta, j).iter().enumerate() {
                terms.push((*v, sign * u.get(i, j)));
            }
        }
        terms
    };

    if ic {
        for t in 0..k {
            let prior = game.prior(t);
            for (v, c) in leader_terms(t) {
                model.add_objective(v, prior * c);
            }
            for gamma in 0..k {
                if gamma == t {
                    continue;
                }
                let mut terms = follower_terms(t, t, 1.0);
                terms.extend(follower_terms(t, gamma, -1.0));
                model.add_constraint(&terms, Relation::Ge, eps);
            }
        }
        return (model, layout);
    }

    let (leader_min, leader_max) = payoff_range(leader);
    let m_leader = options.big_m.unwrap_or(leader_max - leader_min);

    let y: Vec<Var> = (0..k * k).map(|_| model.add_binary()).collect();
    let mu: Vec<Var> = (0..k).map(|_| model.add_var(f64::NEG_INFINITY, leader_max)).collect();
    for t in 0..k {
        let (lo, hi) = payoff_range(&game.types()[t].payoff);
        let m_follower = options.big_m.unwrap_or(hi - lo + eps);
        model.set_objective(mu[t], game.prior(t));
        let terms: Vec<(Var, f64)> = (0..k).map(|b| (y[t * k + b], 1.0)).collect();
        model.add_constraint(&terms, Relation::Eq, 1.0);
        // μ_θ ≤ Σ_β μ̄_θβ·y^θ_β
        let mut cut = alloc::vec![(mu[t], 1.0)];
        for beta in 0..k {
            let ytb = y[t * k + beta];
            model.set_branch_priority(ytb, 1);
            match bounds[t * k + beta] {
                Some(b) => cut.push((ytb, -b)),
                None => model.set_bounds(ytb, 0.0, 0.0),
            }
        }
        model.add_constraint(&cut, Relation::Le, 0.0);
        for beta in 0..k {
            let ytb = y[t * k + beta];
            // μ_θ ≤ L(β) + (1 − y^θ_β)·M
            let mut terms: Vec<(Var, f64)> = leader_terms(beta).into_iter().map(|(v, c)| (v, -c)).collect();
            terms.push((mu[t], 1.0));
            terms.push((ytb, m_leader));
            model.add_constraint(&terms, Relation::Le, m_leader);
            // V_θ(β) − V_θ(γ) ≥ ε − (1 − y^θ_β)·M
            for gamma in 0..k {
                if gamma == beta {
                    continue;
                }
                let mut terms = follower_terms(t, beta, 1.0);
                terms.extend(follower_terms(t, gamma, -1.0));
                terms.push((ytb, -m_follower));
                model.add_constraint(&terms, Relation::Ge, eps - m_follower);
            }
        }
    }
    (model, layout)
}

fn payoff_range(u: &Matrix) -> (f64, f64) {
    (0..u.rows())
        .flat_map(|i| u.row(i).iter().copied())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

/// Extends an IC solution to a feasible point of the non-IC program built
/// on the same game: every type reports truthfully.
fn truthful_start(game: &Game, layout: &Layout, ic_values: &[f64], num_vars: usize) -> Vec<f64> {
    let (m, n, k) = (game.m(), game.n(), game.num_types());
    let mut start = ic_values.to_vec();
    start.resize(num_vars, 0.0);
    let y0 = layout.xt.len() + layout.p.len();
    let mu0 = y0 + k * k;
    for t in 0..k {
        start[y0 + t * k + t] = 1.0;
        let mut value = 0.0;
        for j in 0..n {
            for i in 0..m {
                value += ic_values[layout.xt(t, j)[i].index()] * game.leader().get(i, j);
            }
        }
        start[mu0 + t] = value;
    }
    start
}

pub(super) fn recover_policy(
    game: &Game,
    layout: &Layout,
    sol: &LpSolution,
    mixed: bool,
) -> Result<Policy, SolveError> {
    let (n, k) = (game.n(), game.num_types());
    let mut entries = Vec::with_capacity(k);
    for t in 0..k {
        let weights: Vec<f64> = (0..n).map(|j| sol.value(layout.p(t, j))).collect();
        let chosen: Vec<usize> = if mixed {
            (0..n).filter(|&j| weights[j] > MIN_WEIGHT).collect()
        } else {
            let mut best = 0;
            for j in 1..n {
                if weights[j] > weights[best] {
                    best = j;
                }
            }
            alloc::vec![best]
        };
        let total: f64 = chosen.iter().map(|&j| weights[j]).sum();
        let mut outcomes = Vec::with_capacity(chosen.len());
        for &j in &chosen {
            let w: Vec<f64> = layout.xt(t, j).iter().map(|v| sol.value(*v)).collect();
            let strategy = MixedStrategy::from_weights(&w)?;
            let weight = if chosen.len() == 1 { 1.0 } else { weights[j] / total };
            outcomes.push((weight, Outcome::new(strategy, j)));
        }
        entries.push(Mixture::new(outcomes)?);
    }
    Ok(Policy::new(entries))
}

/// Optimal policy against a deceptive follower.
///
/// `ic` restricts to incentive-compatible policies, `mixed` allows each
/// report's entry to be a distribution over outcomes. `epsilon > 0` asks for
/// induced actions and chosen reports that beat every alternative by
/// `epsilon`; such a program may be infeasible.
pub fn solve_opt(game: &Game, ic: bool, mixed: bool, epsilon: f64) -> Result<SolveReport, SolveError> {
    solve_opt_with(game, ic, mixed, &SolveOptions::with_epsilon(epsilon))
}

pub fn solve_opt_with(
    game: &Game,
    ic: bool,
    mixed: bool,
    options: &SolveOptions,
) -> Result<SolveReport, SolveError> {
    check_epsilon(options.epsilon)?;
    let timer = Timer::start();
    let method = Method::from_opt_flags(ic, mixed);
    let milp = MilpOptions { node_limit: options.node_limit, ..MilpOptions::default() };
    let mut stats = SolverStats::default();
    let (model, layout, start) = if ic {
        let (model, layout) = build(game, true, mixed, options, &[]);
        (model, layout, None)
    } else {
        let bounds = report_value_bounds(game, mixed, &mut stats)?;
        let (ic_model, _) = build(game, true, mixed, options, &[]);
        let ic_sol = solve_milp_with(&ic_model, &milp)?;
        stats.add(&ic_sol);
        let (model, layout) = build(game, false, mixed, options, &bounds);
        let start = (!ic_sol.values.is_empty())
            .then(|| truthful_start(game, &layout, &ic_sol.values, model.num_vars()));
        (model, layout, start)
    };
    let sol = solve_milp_from(&model, &milp, start.as_deref())?;
    stats.add(&sol);
    match sol.status {
        LpStatus::Optimal => {
            let policy = recover_policy(game, &layout, &sol, mixed)?;
            finish(game, policy, sol.objective_value, method, options, stats, &timer)
        }
        LpStatus::Infeasible => Err(SolveError::Infeasible { epsilon: options.epsilon }),
        LpStatus::IterationLimit => {
            let incumbent = if sol.values.is_empty() {
                None
            } else {
                let policy = recover_policy(game, &layout, &sol, mixed)?;
                finish(game, policy, sol.objective_value, method, options, stats, &timer)
                    .ok()
                    .map(alloc::boxed::Box::new)
            };
            Err(SolveError::Limit { incumbent })
        }
        LpStatus::Unbounded => Err(unexpected(LpStatus::Unbounded)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{mixed_advantage_game, poacher_game, price_of_deception_game};
    use crate::game::{is_ic, FollowerType, Matrix, Tolerances};
    use crate::solvers::solve_sse;
    use alloc::vec;

    #[test]
    fn poacher_optimum() {
        let g = poacher_game();
        let r = solve_opt(&g, false, false, 0.0).unwrap();
        assert!((r.objective - 0.2475).abs() < 1e-9, "{}", r.objective);
        assert!(is_ic(&g, &r.policy, 1e-6).unwrap());
    }

    #[test]
    fn mixing_helps() {
        let g = mixed_advantage_game();
        let xic = solve_opt(&g, true, true, 0.0).unwrap();
        assert!((xic.objective - 2.0 / 3.0).abs() < 1e-9);
        let x = solve_opt(&g, false, true, 0.0).unwrap();
        assert!((x.objective - 2.0 / 3.0).abs() < 1e-9);
        let pure = solve_opt(&g, false, false, 0.0).unwrap();
        assert!(pure.objective <= 1.0 / 3.0 + 1e-9);
    }

    #[test]
    fn one_type_reduces_to_sse() {
        let l = Matrix::from_rows(&[[2.0, 0.0, 1.0], [0.5, 3.0, -1.0]]).unwrap();
        let f = Matrix::from_rows(&[[1.0, 0.0, 0.5], [0.0, 2.0, 1.0]]).unwrap();
        let g = Game::new(l, vec![FollowerType::new("only", 1.0, f)]).unwrap();
        let (_, sse) = solve_sse(&g, 0).unwrap();
        for (ic, mixed) in [(false, false), (true, false), (false, true), (true, true)] {
            let r = solve_opt(&g, ic, mixed, 0.0).unwrap();
            assert!((r.objective - sse).abs() < 1e-9, "{ic} {mixed}: {} vs {sse}", r.objective);
        }
    }

    #[test]
    fn robust_gap_on_figure_one_game() {
        let g = price_of_deception_game(0.01);
        let r = solve_opt_with(&g, true, false, &SolveOptions::with_epsilon(1e-3)).unwrap();
        assert!(r.objective > 0.49);
        let tol = Tolerances { feasibility: 1e-9, tie: 1e-9 };
        let adverse =
            crate::game::evaluate_policy_with(&g, &r.policy, &tol, crate::game::TieBreak::LeaderAdverse)
                .unwrap();
        assert!((adverse.total_leader_utility - r.objective).abs() < 1e-6);
    }

    #[test]
    fn huge_epsilon_is_infeasible() {
        let g = poacher_game();
        assert!(matches!(solve_opt(&g, false, false, 10.0), Err(SolveError::Infeasible { .. })));
    }
}
