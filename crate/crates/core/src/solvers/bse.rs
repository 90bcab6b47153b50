use alloc::vec::Vec;

use crate::game::{Game, MixedStrategy, Outcome, Policy};
use crate::lp::{solve_milp_with, LpModel, LpStatus, MilpOptions, Relation, Sense, Var};

use super::{add_best_response, add_simplex_block, check_epsilon, finish, unexpected};
use super::{Method, SolveError, SolveOptions, SolveReport, SolverStats, Timer};

/// Bayesian Stackelberg equilibrium: one strategy `x` for every type, each
/// type playing a best response to it (ties resolved for the leader).
///
/// The report's policy gives every report the same `x`, paired with that
/// type's induced action, so it is trivially IC.
pub fn solve_bse(game: &Game) -> Result<SolveReport, SolveError> {
    solve_bse_with(game, &SolveOptions::default())
}

pub fn solve_bse_with(game: &Game, options: &SolveOptions) -> Result<SolveReport, SolveError> {
    check_epsilon(options.epsilon)?;
    let timer = Timer::start();
    let (m, n, k) = (game.m(), game.n(), game.num_types());
    let leader = game.leader();
    let mut model = LpModel::new(Sense::Maximize);
    let x = add_simplex_block(&mut model, m);
    let mut p: Vec<Vec<Var>> = Vec::with_capacity(k);
    for t in 0..k {
        let pt: Vec<Var> = (0..n).map(|_| model.add_binary()).collect();
        let xt: Vec<Vec<Var>> = (0..n).map(|_| (0..m).map(|_| model.add_var(0.0, 1.0)).collect()).collect();
        let terms: Vec<(Var, f64)> = pt.iter().map(|v| (*v, 1.0)).collect();
        model.add_constraint(&terms, Relation::Eq, 1.0);
        for j in 0..n {
            let mut terms: Vec<(Var, f64)> = xt[j].iter().map(|v| (*v, 1.0)).collect();
            terms.push((pt[j], -1.0));
            model.add_constraint(&terms, Relation::Eq, 0.0);
        }
        // Σ_j x̃_{ji} = x_i: with binary p this forces x̃_{j*} = x.
        for i in 0..m {
            let mut terms: Vec<(Var, f64)> = (0..n).map(|j| (xt[j][i], 1.0)).collect();
            terms.push((x[i], -1.0));
            model.add_constraint(&terms, Relation::Eq, 0.0);
        }
        let u = &game.types()[t].payoff;
        let prior = game.prior(t);
        for j in 0..n {
            add_best_response(&mut model, u, &xt[j], j, options.epsilon, Some(pt[j]));
            for i in 0..m {
                model.set_objective(xt[j][i], prior * leader.get(i, j));
            }
        }
        p.push(pt);
    }

    let milp = MilpOptions { node_limit: options.node_limit, ..MilpOptions::default() };
    let sol = solve_milp_with(&model, &milp)?;
    let mut stats = SolverStats::default();
    stats.add(&sol);
    match sol.status {
        LpStatus::Optimal => {}
        LpStatus::Infeasible => return Err(SolveError::Infeasible { epsilon: options.epsilon }),
        LpStatus::IterationLimit => return Err(SolveError::Limit { incumbent: None }),
        other => return Err(unexpected(other)),
    }
    let strategy = MixedStrategy::from_weights(&x.iter().map(|v| sol.value(*v)).collect::<Vec<_>>())?;
    let outcomes = p
        .iter()
        .map(|pt| {
            let mut best = 0;
            for j in 1..n {
                if sol.value(pt[j]) > sol.value(pt[best]) {
                    best = j;
                }
            }
            Outcome::new(strategy.clone(), best)
        })
        .collect();
    finish(game, Policy::from_outcomes(outcomes), sol.objective_value, Method::Bse, options, stats, &timer)
}
