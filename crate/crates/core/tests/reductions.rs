use stackelberg_core::game::{is_ic, validate_policy};
use stackelberg_core::reductions::{
    build_ic_hardness_game, build_opt_hardness_game, independent_set_to_policy, max_independent_set,
    max_independent_set_bruteforce, non_isomorphic_graphs, Graph, Variant,
};
use stackelberg_core::solvers::solve_opt;

fn graphs_up_to(n: usize) -> Vec<Graph> {
    (1..=n).flat_map(non_isomorphic_graphs).collect()
}

#[test]
fn eighteen_graphs_on_at_most_four_vertices() {
    assert_eq!(graphs_up_to(4).len(), 18);
}

#[test]
fn opt_game_value_is_mis_fraction() {
    for g in graphs_up_to(4) {
        let mis = max_independent_set_bruteforce(&g).unwrap() as f64;
        let game = build_opt_hardness_game(&g).unwrap();
        let r = solve_opt(&game, false, false, 0.0).unwrap();
        let want = mis / g.num_vertices() as f64;
        assert!((r.objective - want).abs() < 1e-6, "{g:?}: {} vs {want}", r.objective);
    }
}

#[test]
fn ic_game_value_is_mis_fraction() {
    for g in graphs_up_to(4) {
        let mis = max_independent_set_bruteforce(&g).unwrap() as f64;
        let game = build_ic_hardness_game(&g).unwrap();
        let r = solve_opt(&game, true, false, 0.0).unwrap();
        let want = mis / g.num_vertices() as f64;
        assert!((r.objective - want).abs() < 1e-6, "{g:?}: {} vs {want}", r.objective);
    }
}

#[test]
fn mixing_does_not_help_on_opt_family() {
    for g in graphs_up_to(4) {
        let game = build_opt_hardness_game(&g).unwrap();
        let pure = solve_opt(&game, false, false, 0.0).unwrap().objective;
        let mixed = solve_opt(&game, false, true, 0.0).unwrap().objective;
        assert!((pure - mixed).abs() < 1e-6, "{g:?}: {pure} vs {mixed}");
    }
}

#[test]
fn constructed_policies_are_valid() {
    for g in graphs_up_to(5) {
        let set = max_independent_set(&g).unwrap();
        let opt_game = build_opt_hardness_game(&g).unwrap();
        let policy = independent_set_to_policy(&g, &set, Variant::Opt).unwrap();
        assert!(validate_policy(&opt_game, &policy, 1e-9).is_empty());
        let ic_game = build_ic_hardness_game(&g).unwrap();
        let policy = independent_set_to_policy(&g, &set, Variant::Ic).unwrap();
        assert!(validate_policy(&ic_game, &policy, 1e-9).is_empty());
        assert!(is_ic(&ic_game, &policy, 1e-9).unwrap());
    }
}
