//! `1/|Θ|`-approximation: for every true type `θ`, the best policy on `θ`
//! alone, over all reports `β` it could be steered to.

use alloc::vec::Vec;

use crate::game::{best_responses, Game, Matrix, MixedStrategy, Outcome, Policy};
use crate::lp::{solve_lp, LpModel, LpSolution, LpStatus, Relation, Sense, Var};

use super::{add_best_response, add_simplex_block, finish, strategy_from, unexpected, utility_terms};
use super::{Method, SolveError, SolveOptions, SolveReport, SolverStats, Timer};

struct Candidate {
    value: f64,
    beta: usize,
    own: Outcome,
    target: Outcome,
}

/// Runs the `|Θ|²·n²` small LPs and returns the completed policy of the best
/// type. The report's objective is the evaluated value of that policy.
///
/// The best type is chosen on leader payoffs shifted so their minimum is 0.
/// With `ℓ` that minimum and `U*` the optimum, the value is then at least
/// `ℓ + (U* − ℓ)/|Θ|`, which is `U*/|Θ|` or better whenever `ℓ ≥ 0`. With
/// negative payoffs the plain `U*/|Θ|` bound can fail.
pub fn solve_approx(game: &Game) -> Result<SolveReport, SolveError> {
    let options = SolveOptions::default();
    let timer = Timer::start();
    let mut stats = SolverStats::default();
    let (m, n, k) = (game.m(), game.n(), game.num_types());
    let leader = game.leader();
    let mut per_type: Vec<Candidate> = Vec::with_capacity(k);
    for t in 0..k {
        let mut best: Option<Candidate> = None;
        for beta in 0..k {
            for jt in 0..n {
                for jb in 0..n {
                    if beta == t && jb != jt {
                        continue;
                    }
                    let (model, xt, xb) = pair_program(game, t, beta, jt, jb);
                    let sol = solve_lp(&model)?;
                    stats.add(&sol);
                    match sol.status {
                        LpStatus::Optimal => {}
                        LpStatus::Infeasible => continue,
                        other => return Err(unexpected(other)),
                    }
                    if best.as_ref().is_none_or(|b| sol.objective_value > b.value + 1e-9) {
                        best = Some(Candidate {
                            value: sol.objective_value,
                            beta,
                            own: Outcome::new(strategy_from(&sol, &xt)?, jt),
                            target: Outcome::new(strategy_from(&sol, &xb)?, jb),
                        });
                    }
                }
            }
        }
        per_type.push(best.ok_or_else(|| SolveError::Numerical("no feasible outcome pair".into()))?);
    }

    let floor = (0..m).flat_map(|i| leader.row(i).iter().copied()).fold(f64::INFINITY, f64::min);
    let score = |t: usize| game.prior(t) * (per_type[t].value - floor);
    let mut star = 0;
    for t in 1..k {
        if score(t) > score(star) {
            star = t;
        }
    }
    let chosen = &per_type[star];
    let x: &MixedStrategy = &chosen.own.strategy;
    let mut outcomes = Vec::with_capacity(k);
    for beta in 0..k {
        let outcome = if beta == star {
            chosen.own.clone()
        } else if beta == chosen.beta {
            chosen.target.clone()
        } else {
            let br = best_responses(game, beta, x, 1e-9)?;
            let mut j = br[0];
            for &c in &br[1..] {
                if leader.column_dot(x.probs(), c) > leader.column_dot(x.probs(), j) {
                    j = c;
                }
            }
            Outcome::new(x.clone(), j)
        };
        outcomes.push(outcome);
    }
    let policy = Policy::from_outcomes(outcomes);
    let value = crate::game::evaluate_policy(game, &policy, &options.tol)?.total_leader_utility;
    finish(game, policy, value, Method::Approx, &options, stats, &timer)
}

/// The leader's best utility from true type `t` reporting `beta`, with `t`'s
/// own entry inducing `jt` and `beta`'s inducing `jb`. For `beta == t` the
/// two entries share one strategy.
fn pair_program(game: &Game, t: usize, beta: usize, jt: usize, jb: usize) -> (LpModel, Vec<Var>, Vec<Var>) {
    let m = game.m();
    let u_t = &game.types()[t].payoff;
    let mut model = LpModel::new(Sense::Maximize);
    let xt = add_simplex_block(&mut model, m);
    add_best_response(&mut model, u_t, &xt, jt, 0.0, None);
    let xb = if beta == t {
        xt.clone()
    } else {
        let xb = add_simplex_block(&mut model, m);
        add_best_response(&mut model, &game.types()[beta].payoff, &xb, jb, 0.0, None);
        // u_θ(x^β, j^β) ≥ u_θ(x^θ, j^θ)
        let mut terms: Vec<_> = utility_terms(u_t, &xb, jb).collect();
        terms.extend(utility_terms(u_t, &xt, jt).map(|(v, c)| (v, -c)));
        model.add_constraint(&terms, Relation::Ge, 0.0);
        xb
    };
    for (v, c) in utility_terms(game.leader(), &xb, jb) {
        model.add_objective(v, c);
    }
    (model, xt, xb)
}

/// `bound[t·k + β]`: an upper bound on the leader's utility from type `t`
/// whenever `t` reports `β` under any valid policy (pure, or mixed when
/// `mixed`), or `None` if no valid policy lets `t` prefer `β` to its own entry.
pub(super) fn report_value_bounds(
    game: &Game,
    mixed: bool,
    stats: &mut SolverStats,
) -> Result<Vec<Option<f64>>, SolveError> {
    let (n, k) = (game.n(), game.num_types());
    let mut bounds = Vec::with_capacity(k * k);
    for t in 0..k {
        for beta in 0..k {
            let mut best: Option<f64> = None;
            let mut record = |sol: &LpSolution, stats: &mut SolverStats| -> Result<(), SolveError> {
                stats.add(sol);
                match sol.status {
                    LpStatus::Optimal => {
                        best = Some(best.map_or(sol.objective_value, |b: f64| b.max(sol.objective_value)));
                        Ok(())
                    }
                    LpStatus::Infeasible => Ok(()),
                    other => Err(unexpected(other)),
                }
            };
            if mixed {
                record(&solve_lp(&mixed_pair_program(game, t, beta))?, stats)?;
            } else {
                for jt in 0..n {
                    for jb in 0..n {
                        if beta == t && jb != jt {
                            continue;
                        }
                        record(&solve_lp(&pair_program(game, t, beta, jt, jb).0)?, stats)?;
                    }
                }
            }
            bounds.push(best);
        }
    }
    Ok(bounds)
}

/// Mixed counterpart of [`pair_program`]: both entries are distributions over
/// outcomes, stored as `p_j·x_j` blocks.
fn mixed_pair_program(game: &Game, t: usize, beta: usize) -> LpModel {
    let (m, n) = (game.m(), game.n());
    let mut model = LpModel::new(Sense::Maximize);
    let block = |model: &mut LpModel, u: &Matrix| -> Vec<Vec<Var>> {
        let p: Vec<Var> = (0..n).map(|_| model.add_var(0.0, 1.0)).collect();
        let terms: Vec<(Var, f64)> = p.iter().map(|v| (*v, 1.0)).collect();
        model.add_constraint(&terms, Relation::Eq, 1.0);
        (0..n)
            .map(|j| {
                let xj: Vec<Var> = (0..m).map(|_| model.add_var(0.0, 1.0)).collect();
                let mut terms: Vec<(Var, f64)> = xj.iter().map(|v| (*v, 1.0)).collect();
                terms.push((p[j], -1.0));
                model.add_constraint(&terms, Relation::Eq, 0.0);
                add_best_response(model, u, &xj, j, 0.0, Some(p[j]));
                xj
            })
            .collect()
    };
    let u_t = &game.types()[t].payoff;
    let own = block(&mut model, u_t);
    let target = if beta == t { own.clone() } else { block(&mut model, &game.types()[beta].payoff) };
    if beta != t {
        let mut terms = Vec::new();
        for j in 0..n {
            terms.extend(utility_terms(u_t, &target[j], j));
            terms.extend(utility_terms(u_t, &own[j], j).map(|(v, c)| (v, -c)));
        }
        model.add_constraint(&terms, Relation::Ge, 0.0);
    }
    for (j, xj) in target.iter().enumerate() {
        for (v, c) in utility_terms(game.leader(), xj, j) {
            model.add_objective(v, c);
        }
    }
    model
}
