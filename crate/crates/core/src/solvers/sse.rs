use crate::game::{Game, Outcome};
use crate::lp::{solve_lp, LpModel, LpStatus, Sense};

use super::{add_best_response, add_simplex_block, strategy_from, unexpected, utility_terms};
use super::{SolveError, SolverStats};

/// Strong Stackelberg equilibrium against type `t` alone, by the multiple-LP
/// method: one LP per follower action `j` maximising `u^L(x, j)` over the
/// region where `j` is a best response. Returns the outcome and the leader's
/// value; ties across actions go to the smallest `j`.
pub fn solve_sse(game: &Game, t: usize) -> Result<(Outcome, f64), SolveError> {
    sse_with_stats(game, t, &mut SolverStats::default())
}

pub(super) fn sse_with_stats(
    game: &Game,
    t: usize,
    stats: &mut SolverStats,
) -> Result<(Outcome, f64), SolveError> {
    let u = game.follower(t)?;
    let leader = game.leader();
    let mut best: Option<(Outcome, f64)> = None;
    for j in 0..game.n() {
        let mut model = LpModel::new(Sense::Maximize);
        let x = add_simplex_block(&mut model, game.m());
        for (v, c) in utility_terms(leader, &x, j) {
            model.set_objective(v, c);
        }
        add_best_response(&mut model, u, &x, j, 0.0, None);
        let sol = solve_lp(&model)?;
        stats.add(&sol);
        match sol.status {
            LpStatus::Optimal => {}
            LpStatus::Infeasible => continue,
            other => return Err(unexpected(other)),
        }
        let strategy = strategy_from(&sol, &x)?;
        let value = leader.column_dot(strategy.probs(), j);
        if best.as_ref().is_none_or(|(_, b)| value > b + 1e-9) {
            best = Some((Outcome::new(strategy, j), value));
        }
    }
    best.ok_or_else(|| SolveError::Numerical("every best-response region was empty".into()))
}
