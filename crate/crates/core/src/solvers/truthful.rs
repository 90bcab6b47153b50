use alloc::vec::Vec;

use crate::game::{evaluate_policy, EvalReport, Game, Policy, Tolerances};

use super::sse::sse_with_stats;
use super::{SolveError, SolverStats};

/// The per-type SSE menu and its two values.
#[derive(Debug, Clone, PartialEq)]
pub struct TruthfulBaseline {
    /// Report `θ` maps to the SSE outcome of type `θ`.
    pub menu: Policy,
    pub sse_values: Vec<f64>,
    /// `Σ_θ π_θ · SSE_θ`: the leader's value if every type reports truthfully.
    pub truthful: f64,
    /// The same menu evaluated against strategic reporting.
    pub deceitful: EvalReport,
    pub stats: SolverStats,
}

impl TruthfulBaseline {
    pub fn deceitful_value(&self) -> f64 {
        self.deceitful.total_leader_utility
    }
}

pub fn truthful_menu(game: &Game) -> Result<Policy, SolveError> {
    Ok(truthful_baseline(game)?.menu)
}

pub fn truthful_baseline(game: &Game) -> Result<TruthfulBaseline, SolveError> {
    let mut stats = SolverStats::default();
    let mut outcomes = Vec::with_capacity(game.num_types());
    let mut sse_values = Vec::with_capacity(game.num_types());
    for t in 0..game.num_types() {
        let (outcome, value) = sse_with_stats(game, t, &mut stats)?;
        outcomes.push(outcome);
        sse_values.push(value);
    }
    let truthful = sse_values.iter().enumerate().map(|(t, v)| game.prior(t) * v).sum();
    let menu = Policy::from_outcomes(outcomes);
    let deceitful = evaluate_policy(game, &menu, &Tolerances::solver())?;
    Ok(TruthfulBaseline { menu, sse_values, truthful, deceitful, stats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{poacher_game, price_of_deception_game};

    #[test]
    fn poacher_baselines() {
        let b = truthful_baseline(&poacher_game()).unwrap();
        assert!((b.truthful - 0.25).abs() < 1e-9);
        assert!(b.deceitful_value().abs() < 1e-9);
        assert_eq!(b.deceitful.best_report, [1, 1]);
    }

    #[test]
    fn figure_one_truthful_menu_collapses() {
        let b = truthful_baseline(&price_of_deception_game(0.01)).unwrap();
        assert!((b.deceitful_value() - 0.01).abs() < 1e-9, "{}", b.deceitful_value());
    }
}
