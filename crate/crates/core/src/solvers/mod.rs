//! Solution concepts: per-type SSE, the Bayesian Stackelberg equilibrium,
//! optimal policies against imitative deception (pure or mixed, with or
//! without incentive compatibility), an exact enumeration oracle for small
//! games and the `1/|Θ|`-approximation.
//!
//! Every solver that returns a [`SolveReport`] re-validates and re-evaluates
//! its policy through [`crate::game`], resolving report ties by
//! [`Method::tie_break`]. An IC policy can be worth more under
//! leader-favourable report ties than its program objective, since a type
//! indifferent between reports may be steered to a better entry.

mod approx;
mod bse;
mod enumeration;
mod opt;
mod sse;
mod truthful;

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::time::Duration;

use crate::game::{
    evaluate_policy_with, EvalReport, Game, GameError, Matrix, MixedStrategy, Policy, TieBreak, Tolerances,
};
use crate::lp::{LpError, LpModel, LpSolution, LpStatus, Relation, Var};

pub use approx::solve_approx;
pub use bse::{solve_bse, solve_bse_with};
pub use enumeration::{solve_opt_enumeration, solve_opt_enumeration_with, EnumerationLimits};
pub use opt::{opt_program, solve_opt, solve_opt_with};
pub use sse::solve_sse;
pub use truthful::{truthful_baseline, truthful_menu, TruthfulBaseline};

/// Largest allowed gap between a solver's objective and the re-evaluated
/// policy value when `epsilon = 0`.
pub const OBJECTIVE_AGREEMENT_TOL: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Opt,
    OptIc,
    OptX,
    OptXIc,
    Bse,
    Truthful,
    Deceitful,
    Approx,
}

impl Method {
    pub const ALL: [Method; 8] = [
        Method::Opt,
        Method::OptIc,
        Method::OptX,
        Method::OptXIc,
        Method::Bse,
        Method::Truthful,
        Method::Deceitful,
        Method::Approx,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Method::Opt => "Opt",
            Method::OptIc => "OptIC",
            Method::OptX => "OptX",
            Method::OptXIc => "OptXIC",
            Method::Bse => "BSE",
            Method::Truthful => "Truthful",
            Method::Deceitful => "Deceitful",
            Method::Approx => "Approx",
        }
    }

    /// Parses a label case-insensitively (`optxic`, `OptXIC`, ...).
    pub fn parse(s: &str) -> Option<Method> {
        Method::ALL.into_iter().find(|m| m.label().eq_ignore_ascii_case(s))
    }

    /// The `(ic, mixed)` flags of the four optimal-policy variants.
    pub fn opt_flags(self) -> Option<(bool, bool)> {
        match self {
            Method::Opt => Some((false, false)),
            Method::OptIc => Some((true, false)),
            Method::OptX => Some((false, true)),
            Method::OptXIc => Some((true, true)),
            _ => None,
        }
    }

    /// How report ties are resolved when the method's policy is evaluated.
    /// IC methods assume a follower with nothing to gain reports truthfully.
    pub fn tie_break(self) -> TieBreak {
        match self {
            Method::OptIc | Method::OptXIc | Method::Bse | Method::Truthful => TieBreak::TruthfulFirst,
            _ => TieBreak::LeaderFavorable,
        }
    }

    pub fn from_opt_flags(ic: bool, mixed: bool) -> Method {
        match (ic, mixed) {
            (false, false) => Method::Opt,
            (true, false) => Method::OptIc,
            (false, true) => Method::OptX,
            (true, true) => Method::OptXIc,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SolverStats {
    pub lps_solved: u64,
    pub iterations: u64,
    pub nodes: u64,
}

impl SolverStats {
    fn add(&mut self, sol: &crate::lp::LpSolution) {
        self.lps_solved += 1;
        self.iterations += sol.iterations;
        self.nodes += sol.nodes_explored;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub policy: Policy,
    /// The leader utility claimed by the solver.
    pub objective: f64,
    /// Independent re-evaluation of `policy` under `method.tie_break()`.
    pub eval: EvalReport,
    pub method: Method,
    pub epsilon: f64,
    /// Wall-clock time; only measured with the `std` feature.
    pub wall_time: Option<Duration>,
    pub stats: SolverStats,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolveError {
    #[error("no policy satisfies the constraints (epsilon = {epsilon})")]
    Infeasible { epsilon: f64 },
    #[error("solver limit reached")]
    Limit { incumbent: Option<Box<SolveReport>> },
    #[error("instance too large for enumeration: {0}")]
    TooLarge(String),
    #[error("solver objective {objective} disagrees with evaluated value {evaluated}")]
    ObjectiveMismatch { objective: f64, evaluated: f64 },
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Required utility gap for induced actions and chosen reports.
    pub epsilon: f64,
    /// Replaces both big-M constants when set.
    pub big_m: Option<f64>,
    pub node_limit: u64,
    /// Tolerances used to validate and evaluate the recovered policy.
    pub tol: Tolerances,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { epsilon: 0.0, big_m: None, node_limit: 1_000_000, tol: Tolerances::solver() }
    }
}

impl SolveOptions {
    pub fn with_epsilon(epsilon: f64) -> Self {
        SolveOptions { epsilon, ..SolveOptions::default() }
    }
}

#[cfg(feature = "std")]
struct Timer(std::time::Instant);

#[cfg(feature = "std")]
impl Timer {
    fn start() -> Self {
        Timer(std::time::Instant::now())
    }

    fn elapsed(&self) -> Option<Duration> {
        Some(self.0.elapsed())
    }
}

#[cfg(not(feature = "std"))]
struct Timer;

#[cfg(not(feature = "std"))]
impl Timer {
    fn start() -> Self {
        Timer
    }

    fn elapsed(&self) -> Option<Duration> {
        None
    }
}

/// Validates, evaluates and packages a solver result.
fn finish(
    game: &Game,
    policy: Policy,
    objective: f64,
    method: Method,
    options: &SolveOptions,
    stats: SolverStats,
    timer: &Timer,
) -> Result<SolveReport, SolveError> {
    let eval = evaluate_policy_with(game, &policy, &options.tol, method.tie_break())?;
    if options.epsilon == 0.0 && (objective - eval.total_leader_utility).abs() > OBJECTIVE_AGREEMENT_TOL {
        return Err(SolveError::ObjectiveMismatch { objective, evaluated: eval.total_leader_utility });
    }
    Ok(SolveReport {
        policy,
        objective,
        eval,
        method,
        epsilon: options.epsilon,
        wall_time: timer.elapsed(),
        stats,
    })
}

fn check_epsilon(epsilon: f64) -> Result<(), SolveError> {
    if epsilon.is_finite() && epsilon >= 0.0 {
        Ok(())
    } else {
        Err(SolveError::Game(GameError::InvalidGame(alloc::format!("epsilon {epsilon} must be >= 0"))))
    }
}

/// Adds `m` variables constrained to the probability simplex.
fn add_simplex_block(model: &mut LpModel, m: usize) -> Vec<Var> {
    let x: Vec<Var> = (0..m).map(|_| model.add_var(0.0, 1.0)).collect();
    let terms: Vec<(Var, f64)> = x.iter().map(|v| (*v, 1.0)).collect();
    model.add_constraint(&terms, Relation::Eq, 1.0);
    x
}

/// `u(x, j) − u(x, k) ≥ ε` for every `k ≠ j`. With `scale = Some(p)` the
/// variables hold `p·x` and the gap is `ε·p`.
fn add_best_response(model: &mut LpModel, u: &Matrix, x: &[Var], j: usize, epsilon: f64, scale: Option<Var>) {
    for k in 0..u.cols() {
        if k == j {
            continue;
        }
        let mut terms: Vec<(Var, f64)> =
            x.iter().enumerate().map(|(i, v)| (*v, u.get(i, j) - u.get(i, k))).collect();
        let rhs = match scale {
            Some(p) => {
                terms.push((p, -epsilon));
                0.0
            }
            None => epsilon,
        };
        model.add_constraint(&terms, Relation::Ge, rhs);
    }
}

/// `Σ_i x_i · u(i, j)` as constraint terms.
fn utility_terms<'a>(u: &'a Matrix, x: &'a [Var], j: usize) -> impl Iterator<Item = (Var, f64)> + 'a {
    x.iter().enumerate().map(move |(i, v)| (*v, u.get(i, j)))
}

fn strategy_from(sol: &LpSolution, x: &[Var]) -> Result<MixedStrategy, SolveError> {
    let w: Vec<f64> = x.iter().map(|v| sol.value(*v)).collect();
    Ok(MixedStrategy::from_weights(&w)?)
}

fn unexpected(status: LpStatus) -> SolveError {
    SolveError::Numerical(alloc::format!("unexpected LP status {status:?}"))
}
