use proptest::prelude::*;

use stackelberg_core::game::*;
use stackelberg_core::gamegen::{generate, GenSpec};
use stackelberg_core::lp::*;

fn game(seed: u64, k: usize) -> Game {
    generate(&GenSpec::new(3, 3, k, 0.5, seed)).unwrap()
}

fn strategy(w: &[f64]) -> MixedStrategy {
    MixedStrategy::from_weights(w).unwrap()
}

fn feasible_outcome(g: &Game, t: usize, w: &[f64]) -> Outcome {
    let x = strategy(w);
    let j = best_responses(g, t, &x, 1e-9).unwrap()[0];
    Outcome::new(x, j)
}

fn weights() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.01f64..1.0, 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn compression_preserves_utilities(
        seed in 0u64..10_000,
        t in 0usize..3,
        parts in prop::collection::vec((0.05f64..1.0, weights()), 1..7),
    ) {
        let g = game(seed, 3);
        let total: f64 = parts.iter().map(|(w, _)| w).sum();
        let mixture = Mixture::new(
            parts.iter().map(|(w, x)| (w / total, feasible_outcome(&g, t, x))).collect(),
        ).unwrap();
        let compressed = compress_mixture(&g, t, &mixture, 1e-9).unwrap();
        prop_assert!(compressed.support_size() <= g.n());
        for side in [Payoff::Leader, Payoff::Follower(0), Payoff::Follower(1), Payoff::Follower(2)] {
            let before = mixture.value(&g, side).unwrap();
            let after = compressed.value(&g, side).unwrap();
            prop_assert!((before - after).abs() < 1e-9);
        }
        let policy = Policy::new(vec![compressed.clone(), compressed.clone(), compressed]);
        let violations = validate_policy(&g, &policy, 1e-9);
        let broken = violations
            .iter()
            .any(|v| matches!(v, Violation::NotBestResponse { report, .. } if *report == t));
        prop_assert!(!broken);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn evaluation_invariants(seed in 0u64..10_000, xs in prop::collection::vec(weights(), 3)) {
        let g = game(seed, 3);
        let policy = Policy::from_outcomes((0..3).map(|t| feasible_outcome(&g, t, &xs[t])).collect());
        let tol = Tolerances::default();
        let eval = evaluate_policy(&g, &policy, &tol).unwrap();
        let weighted: f64 = (0..3).map(|t| g.prior(t) * eval.per_type_leader_utility[t]).sum();
        prop_assert!((weighted - eval.total_leader_utility).abs() < 1e-9);
        let ic = is_ic(&g, &policy, 1e-9).unwrap();
        for t in 0..3 {
            let chosen = follower_report_value(&g, t, &policy, eval.best_report[t]).unwrap();
            for beta in 0..3 {
                prop_assert!(chosen >= follower_report_value(&g, t, &policy, beta).unwrap() - tol.tie);
            }
            if ic {
                let truthful = follower_report_value(&g, t, &policy, t).unwrap();
                prop_assert!((chosen - truthful).abs() <= 1e-6);
            }
        }
    }
}

/// `max c·x, Ax ≤ b, 0 ≤ x ≤ u` with `b > 0`, so the origin is feasible.
#[derive(Debug, Clone)]
struct BoxLp {
    c: Vec<f64>,
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
    u: Vec<f64>,
}

impl BoxLp {
    fn model(&self) -> (LpModel, Vec<Var>) {
        let mut model = LpModel::new(Sense::Maximize);
        let x: Vec<Var> = self.u.iter().map(|&u| model.add_var(0.0, u)).collect();
        for (v, &c) in x.iter().zip(&self.c) {
            model.set_objective(*v, c);
        }
        for (row, &b) in self.a.iter().zip(&self.b) {
            model.add_dense_constraint(row, Relation::Le, b);
        }
        (model, x)
    }

    /// Lagrangian bound `b·y + Σ u_j·max(0, c_j − A_jᵀy)`, valid for any `y ≥ 0`.
    fn dual_bound(&self, y: &[f64]) -> f64 {
        let mut bound: f64 = self.b.iter().zip(y).map(|(b, y)| b * y).sum();
        for j in 0..self.c.len() {
            let rc = self.c[j] - self.a.iter().zip(y).map(|(row, y)| row[j] * y).sum::<f64>();
            bound += self.u[j] * rc.max(0.0);
        }
        bound
    }
}

fn box_lp(vars: std::ops::Range<usize>) -> impl Strategy<Value = BoxLp> {
    (vars, 1usize..6).prop_flat_map(|(n, m)| {
        (
            prop::collection::vec(-5.0f64..5.0, n),
            prop::collection::vec(prop::collection::vec(-3.0f64..3.0, n), m),
            prop::collection::vec(0.1f64..10.0, m),
            prop::collection::vec(0.5f64..5.0, n),
        )
            .prop_map(|(c, a, b, u)| BoxLp { c, a, b, u })
    })
}

/// Best vertex of a 2-variable box LP, by intersecting every pair of
/// boundary lines.
fn vertex_oracle(lp: &BoxLp) -> f64 {
    let mut lines: Vec<([f64; 2], f64)> = lp.a.iter().zip(&lp.b).map(|(r, b)| ([r[0], r[1]], *b)).collect();
    lines.push(([1.0, 0.0], 0.0));
    lines.push(([0.0, 1.0], 0.0));
    lines.push(([1.0, 0.0], lp.u[0]));
    lines.push(([0.0, 1.0], lp.u[1]));
    let mut best = f64::NEG_INFINITY;
    for p in 0..lines.len() {
        for q in p + 1..lines.len() {
            let ([a, b], e) = lines[p];
            let ([c, d], f) = lines[q];
            let det = a * d - b * c;
            if det.abs() < 1e-12 {
                continue;
            }
            let x = [(e * d - b * f) / det, (a * f - e * c) / det];
            let inside = x.iter().zip(&lp.u).all(|(x, u)| *x >= -1e-9 && *x <= u + 1e-9)
                && lp.a.iter().zip(&lp.b).all(|(r, b)| r[0] * x[0] + r[1] * x[1] <= b + 1e-9);
            if inside {
                best = best.max(lp.c[0] * x[0] + lp.c[1] * x[1]);
            }
        }
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn two_variable_lps_match_vertices(lp in box_lp(2..3)) {
        let (model, _) = lp.model();
        let sol = solve_lp(&model).unwrap();
        prop_assert!(sol.is_optimal());
        prop_assert!((sol.objective_value - vertex_oracle(&lp)).abs() < 1e-7);
    }

    #[test]
    fn lp_duality(lp in box_lp(1..8), probe in prop::collection::vec(0.0f64..2.0, 5)) {
        let (model, _) = lp.model();
        let sol = solve_lp(&model).unwrap();
        prop_assert!(sol.is_optimal());
        prop_assert!(model.residual(&sol.values) <= 1e-7);
        prop_assert!(sol.duals.iter().all(|y| *y >= -1e-9));
        let y: Vec<f64> = sol.duals.iter().map(|y| y.max(0.0)).collect();
        prop_assert!((lp.dual_bound(&y) - sol.objective_value).abs() < 1e-6);
        let y: Vec<f64> = probe.iter().take(lp.b.len()).copied().chain(std::iter::repeat(0.0)).take(lp.b.len()).collect();
        prop_assert!(lp.dual_bound(&y) >= sol.objective_value - 1e-9);
    }

    #[test]
    fn milp_matches_binary_enumeration(lp in box_lp(3..9), binaries in 1usize..7) {
        let (mut model, x) = lp.model();
        let nb = binaries.min(x.len());
        let mut bin_model = LpModel::new(Sense::Maximize);
        let vars: Vec<Var> = (0..x.len())
            .map(|j| if j < nb { bin_model.add_binary() } else { bin_model.add_var(0.0, lp.u[j]) })
            .collect();
        for (v, &c) in vars.iter().zip(&lp.c) {
            bin_model.set_objective(*v, c);
        }
        for (row, &b) in lp.a.iter().zip(&lp.b) {
            bin_model.add_dense_constraint(row, Relation::Le, b);
        }
        let sol = solve_milp(&bin_model).unwrap();
        prop_assert!(sol.is_optimal());
        prop_assert!(bin_model.residual(&sol.values) <= 1e-7);
        for j in 0..nb {
            let v = sol.values[j];
            prop_assert!(v.abs() <= 1e-6 || (v - 1.0).abs() <= 1e-6);
        }

        let mut best = f64::NEG_INFINITY;
        for mask in 0u32..(1 << nb) {
            for j in 0..x.len() {
                let (lo, hi) = if j < nb {
                    let bit = f64::from((mask >> j) & 1);
                    (bit, bit)
                } else {
                    (0.0, lp.u[j])
                };
                model.set_bounds(x[j], lo, hi);
            }
            let fixed = solve_lp(&model).unwrap();
            if fixed.is_optimal() {
                best = best.max(fixed.objective_value);
            }
        }
        prop_assert!((sol.objective_value - best).abs() < 1e-6, "{} vs {}", sol.objective_value, best);
    }
}
