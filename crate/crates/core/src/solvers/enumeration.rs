//! Exact oracle: enumerate every report function (and, for pure policies,
//! every induced action per report) and solve the remaining LP.

use alloc::vec;
use alloc::vec::Vec;

use crate::game::{Game, MixedStrategy, Mixture, Outcome, Policy};
use crate::lp::{solve_lp, LpModel, LpSolution, LpStatus, Relation, Sense, Var};

use super::{add_best_response, add_simplex_block, check_epsilon, finish, unexpected};
use super::{Method, SolveError, SolveOptions, SolveReport, SolverStats, Timer};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationLimits {
    pub max_types: usize,
    /// Applies to pure policies only.
    pub max_actions: usize,
    /// Set to false to run regardless of size.
    pub enforce: bool,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits { max_types: 4, max_actions: 4, enforce: true }
    }
}

pub fn solve_opt_enumeration(game: &Game, ic: bool, mixed: bool) -> Result<SolveReport, SolveError> {
    solve_opt_enumeration_with(game, ic, mixed, &SolveOptions::default(), &EnumerationLimits::default())
}

pub fn solve_opt_enumeration_with(
    game: &Game,
    ic: bool,
    mixed: bool,
    options: &SolveOptions,
    limits: &EnumerationLimits,
) -> Result<SolveReport, SolveError> {
    check_epsilon(options.epsilon)?;
    let (n, k) = (game.n(), game.num_types());
    if limits.enforce {
        if k > limits.max_types {
            return Err(SolveError::TooLarge(alloc::format!("{k} types > {}", limits.max_types)));
        }
        if !mixed && n > limits.max_actions {
            return Err(SolveError::TooLarge(alloc::format!("{n} actions > {}", limits.max_actions)));
        }
    }
    let timer = Timer::start();
    let mut stats = SolverStats::default();
    let mut best: Option<(f64, Policy)> = None;

    let reports: Vec<Vec<usize>> = if ic { vec![(0..k).collect()] } else { tuples(k, k) };
    if mixed {
        for r in &reports {
            let (model, blocks) = mixed_program(game, r, options.epsilon);
            let sol = solve_lp(&model)?;
            stats.add(&sol);
            if let Some(value) = optimal_value(&sol)? {
                if best.as_ref().is_none_or(|(b, _)| value > b + 1e-12) {
                    best = Some((value, mixed_policy(game, &blocks, &sol)?));
                }
            }
        }
    } else {
        // Skip action profiles containing an empty best-response region.
        let mut region = vec![vec![false; n]; k];
        for (beta, row) in region.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                let mut model = LpModel::new(Sense::Maximize);
                let x = add_simplex_block(&mut model, game.m());
                add_best_response(&mut model, &game.types()[beta].payoff, &x, j, options.epsilon, None);
                let sol = solve_lp(&model)?;
                stats.add(&sol);
                *cell = optimal_value(&sol)?.is_some();
            }
        }
        for actions in tuples(k, n) {
            if (0..k).any(|beta| !region[beta][actions[beta]]) {
                continue;
            }
            for r in &reports {
                let (model, x) = pure_program(game, r, &actions, options.epsilon);
                let sol = solve_lp(&model)?;
                stats.add(&sol);
                if let Some(value) = optimal_value(&sol)? {
                    if best.as_ref().is_none_or(|(b, _)| value > b + 1e-12) {
                        let outcomes = (0..k)
                            .map(|beta| {
                                let w: Vec<f64> = x[beta].iter().map(|v| sol.value(*v)).collect();
                                Ok(Outcome::new(MixedStrategy::from_weights(&w)?, actions[beta]))
                            })
                            .collect::<Result<Vec<_>, SolveError>>()?;
                        best = Some((value, Policy::from_outcomes(outcomes)));
                    }
                }
            }
        }
    }

    let Some((objective, policy)) = best else {
        return Err(SolveError::Infeasible { epsilon: options.epsilon });
    };
    finish(game, policy, objective, Method::from_opt_flags(ic, mixed), options, stats, &timer)
}

/// All length-`len` tuples over `0..base`, in lexicographic order.
fn tuples(len: usize, base: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0; len];
    loop {
        out.push(cur.clone());
        let mut pos = len;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            cur[pos] += 1;
            if cur[pos] < base {
                break;
            }
            cur[pos] = 0;
        }
    }
}

fn optimal_value(sol: &LpSolution) -> Result<Option<f64>, SolveError> {
    match sol.status {
        LpStatus::Optimal => Ok(Some(sol.objective_value)),
        LpStatus::Infeasible => Ok(None),
        other => Err(unexpected(other)),
    }
}

/// Type `θ` reports `reports[θ]`; report `β` induces `actions[β]`.
fn pure_program(game: &Game, reports: &[usize], actions: &[usize], eps: f64) -> (LpModel, Vec<Vec<Var>>) {
    let k = game.num_types();
    let mut model = LpModel::new(Sense::Maximize);
    let x: Vec<Vec<Var>> = (0..k).map(|_| add_simplex_block(&mut model, game.m())).collect();
    for beta in 0..k {
        add_best_response(&mut model, &game.types()[beta].payoff, &x[beta], actions[beta], eps, None);
    }
    let leader = game.leader();
    for t in 0..k {
        let u = &game.types()[t].payoff;
        let chosen = reports[t];
        for (i, v) in x[chosen].iter().enumerate() {
            model.add_objective(*v, game.prior(t) * leader.get(i, actions[chosen]));
        }
        for gamma in 0..k {
            if gamma == chosen {
                continue;
            }
            let mut terms: Vec<(Var, f64)> = Vec::new();
            for i in 0..game.m() {
                terms.push((x[chosen][i], u.get(i, actions[chosen])));
                terms.push((x[gamma][i], -u.get(i, actions[gamma])));
            }
            model.add_constraint(&terms, Relation::Ge, eps);
        }
    }
    (model, x)
}

struct MixedBlocks {
    /// `xt[β][j]`: the `p·x` block of action `j` under report `β`.
    xt: Vec<Vec<Vec<Var>>>,
    p: Vec<Vec<Var>>,
}

fn mixed_program(game: &Game, reports: &[usize], eps: f64) -> (LpModel, MixedBlocks) {
    let (m, n, k) = (game.m(), game.n(), game.num_types());
    let mut model = LpModel::new(Sense::Maximize);
    let mut blocks = MixedBlocks { xt: Vec::new(), p: Vec::new() };
    for beta in 0..k {
        let p: Vec<Var> = (0..n).map(|_| model.add_var(0.0, 1.0)).collect();
        let xt: Vec<Vec<Var>> = (0..n).map(|_| (0..m).map(|_| model.add_var(0.0, 1.0)).collect()).collect();
        let terms: Vec<(Var, f64)> = p.iter().map(|v| (*v, 1.0)).collect();
        model.add_constraint(&terms, Relation::Eq, 1.0);
        for j in 0..n {
            let mut terms: Vec<(Var, f64)> = xt[j].iter().map(|v| (*v, 1.0)).collect();
            terms.push((p[j], -1.0));
            model.add_constraint(&terms, Relation::Eq, 0.0);
            add_best_response(&mut model, &game.types()[beta].payoff, &xt[j], j, eps, Some(p[j]));
        }
        blocks.xt.push(xt);
        blocks.p.push(p);
    }
    let value_terms = |u: &crate::game::Matrix, beta: usize, sign: f64| -> Vec<(Var, f64)> {
        let mut terms = Vec::new();
        for j in 0..n {
            for i in 0..m {
                terms.push((blocks.xt[beta][j][i], sign * u.get(i, j)));
            }
        }
        terms
    };
    let mut objective = Vec::new();
    for t in 0..k {
        let chosen = reports[t];
        for (v, c) in value_terms(game.leader(), chosen, 1.0) {
            objective.push((v, game.prior(t) * c));
        }
        let u = &game.types()[t].payoff;
        for gamma in 0..k {
            if gamma == chosen {
                continue;
            }
            let mut terms = value_terms(u, chosen, 1.0);
            terms.extend(value_terms(u, gamma, -1.0));
            model.add_constraint(&terms, Relation::Ge, eps);
        }
    }
    for (v, c) in objective {
        model.add_objective(v, c);
    }
    (model, blocks)
}

fn mixed_policy(game: &Game, blocks: &MixedBlocks, sol: &LpSolution) -> Result<Policy, SolveError> {
    let mut entries = Vec::new();
    for beta in 0..game.num_types() {
        let weights: Vec<f64> = blocks.p[beta].iter().map(|v| sol.value(*v)).collect();
        let kept: Vec<usize> = (0..game.n()).filter(|&j| weights[j] > 1e-9).collect();
        let total: f64 = kept.iter().map(|&j| weights[j]).sum();
        let mut outcomes = Vec::new();
        for &j in &kept {
            let w: Vec<f64> = blocks.xt[beta][j].iter().map(|v| sol.value(*v)).collect();
            let weight = if kept.len() == 1 { 1.0 } else { weights[j] / total };
            outcomes.push((weight, Outcome::new(MixedStrategy::from_weights(&w)?, j)));
        }
        entries.push(Mixture::new(outcomes)?);
    }
    Ok(Policy::new(entries))
}
