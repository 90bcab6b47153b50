//! One entry point for every method, so `solve` and `bench` report alike.

use std::time::{Duration, Instant};

use stackelberg_core::game::{is_ic, Game, Policy};
use stackelberg_core::solvers::{
    solve_approx, solve_bse_with, solve_opt_with, truthful_baseline, Method, SolveError, SolveOptions,
    SolverStats,
};

#[derive(Debug, Clone, PartialEq)]
pub struct MethodResult {
    pub method: Method,
    /// Objective claimed by the method.
    pub value: f64,
    /// Re-evaluated value of `policy`.
    pub evaluated: f64,
    pub policy: Policy,
    pub reports: Vec<usize>,
    pub ic: bool,
    pub stats: SolverStats,
    pub time: Duration,
}

pub fn run_method(game: &Game, method: Method, options: &SolveOptions) -> Result<MethodResult, SolveError> {
    let start = Instant::now();
    let (value, evaluated, policy, reports, stats) = match method {
        Method::Truthful | Method::Deceitful => {
            let base = truthful_baseline(game)?;
            let (value, reports) = if method == Method::Truthful {
                (base.truthful, (0..game.num_types()).collect())
            } else {
                (base.deceitful_value(), base.deceitful.best_report.clone())
            };
            (value, value, base.menu, reports, base.stats)
        }
        _ => {
            let report = match method {
                Method::Bse => solve_bse_with(game, options)?,
                Method::Approx => solve_approx(game)?,
                m => {
                    let (ic, mixed) = m.opt_flags().expect("optimal-policy method");
                    solve_opt_with(game, ic, mixed, options)?
                }
            };
            (
                report.objective,
                report.eval.total_leader_utility,
                report.policy,
                report.eval.best_report,
                report.stats,
            )
        }
    };
    let ic = is_ic(game, &policy, options.tol.tie)?;
    Ok(MethodResult { method, value, evaluated, policy, reports, ic, stats, time: start.elapsed() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use stackelberg_core::catalog::poacher_game;

    #[test]
    fn poacher_values() {
        let g = poacher_game();
        let o = SolveOptions::default();
        let expect =
            [(Method::Opt, 0.2475), (Method::Bse, 0.0), (Method::Truthful, 0.25), (Method::Deceitful, 0.0)];
        for (m, v) in expect {
            let r = run_method(&g, m, &o).unwrap();
            assert!((r.value - v).abs() < 1e-6, "{m}: {}", r.value);
        }
        let d = run_method(&g, Method::Deceitful, &o).unwrap();
        assert_eq!(d.reports, [1, 1]);
        assert!(!d.ic);
    }
}
