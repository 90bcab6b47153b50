//! Acceptance criteria. Each test prints one `PASS`/`FAIL` line and then
//! asserts it. Run with `cargo test --release --test acceptance`.

use std::io::Write;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stackelberg_cli::bench::{run_bench, BenchConfig, BenchRow, RowStatus};
use stackelberg_cli::run::run_method;
use stackelberg_core::catalog::*;
use stackelberg_core::game::*;
use stackelberg_core::gamegen::{generate, GenSpec};
use stackelberg_core::lp::*;
use stackelberg_core::reductions::*;
use stackelberg_core::solvers::*;

const EXACT: f64 = 1e-6;

fn verdict(criterion: u32, pass: bool, detail: String) {
    // Written to the raw handle so the line shows even when output is captured.
    let line = format!("{} criterion {criterion}: {detail}\n", if pass { "PASS" } else { "FAIL" });
    let _ = std::io::stderr().write_all(line.as_bytes());
    assert!(pass, "criterion {criterion}: {detail}");
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= EXACT
}

/// Largest `|objective − evaluated|` seen, for the agreement requirement.
#[derive(Default)]
struct Agreement(f64);

impl Agreement {
    fn track(&mut self, r: &SolveReport) -> f64 {
        if r.epsilon == 0.0 {
            self.0 = self.0.max((r.objective - r.eval.total_leader_utility).abs());
        }
        r.objective
    }

    fn ok(&self) -> bool {
        self.0 <= OBJECTIVE_AGREEMENT_TOL
    }
}

fn motivating_example(agree: &mut Agreement) -> Vec<(&'static str, bool)> {
    let g = poacher_game();
    let (a, va) = solve_sse(&g, 0).unwrap();
    let (b, vb) = solve_sse(&g, 1).unwrap();
    let opt = solve_opt(&g, false, false, 0.0).unwrap();
    agree.track(&opt);
    let bse = solve_bse(&g).unwrap();
    let base = truthful_baseline(&g).unwrap();
    let adverse =
        evaluate_policy_with(&g, &opt.policy, &Tolerances::solver(), TieBreak::LeaderAdverse).unwrap();
    vec![
        ("SSE(A)", close(va, 0.5) && close(a.strategy.probs()[0], 0.75)),
        ("SSE(B)", close(vb, 0.0) && close(b.strategy.probs()[0], 0.5)),
        ("BSE", close(agree.track(&bse), 0.0)),
        ("Opt", close(opt.objective, 0.2475)),
        ("Truthful", close(base.truthful, 0.25)),
        ("Deceitful", close(base.deceitful_value(), 0.0)),
        ("Opt IC", is_ic(&g, &opt.policy, 1e-9).unwrap()),
        ("adverse ties", adverse.total_leader_utility >= 0.2475 - EXACT),
    ]
}

fn price_of_deception(agree: &mut Agreement) -> Vec<(&'static str, bool)> {
    let g = price_of_deception_game(0.01);
    let base = truthful_baseline(&g).unwrap();
    let top = MixedStrategy::pure(2, 0);
    let both = Policy::from_outcomes(vec![Outcome::new(top.clone(), 1), Outcome::new(top, 0)]);
    let both = evaluate_policy(&g, &both, &Tolerances::default()).unwrap().total_leader_utility;
    let opt_ic = agree.track(&solve_opt(&g, true, false, 0.0).unwrap());
    vec![
        ("truthful menu under deception", close(base.deceitful_value(), 0.01)),
        ("shared top-row policy", close(both, 0.5)),
        ("OptIC", opt_ic >= 0.5 - EXACT),
    ]
}

fn mixed_policies(agree: &mut Agreement) -> Vec<(&'static str, bool)> {
    let g = mixed_advantage_game();
    let optx_ic = agree.track(&solve_opt(&g, true, true, 0.0).unwrap());
    let optx = agree.track(&solve_opt(&g, false, true, 0.0).unwrap());
    let opt = agree.track(&solve_opt(&g, false, false, 0.0).unwrap());
    vec![
        ("OptXIC = 2/3", close(optx_ic, 2.0 / 3.0)),
        ("OptX = 2/3", close(optx, 2.0 / 3.0)),
        ("Opt <= 1/3", opt <= 1.0 / 3.0 + EXACT),
    ]
}

fn summarize(checks: &[(&'static str, bool)]) -> (bool, String) {
    let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    if failed.is_empty() {
        (true, format!("{} checks hold", checks.len()))
    } else {
        (false, format!("failed: {}", failed.join(", ")))
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn small_suite(criterion: u32, budget: Duration, f: fn(&mut Agreement) -> Vec<(&'static str, bool)>) {
    let mut agree = Agreement::default();
    let (checks, time) = timed(|| f(&mut agree));
    let (ok, detail) = summarize(&checks);
    let pass = ok && time < budget && agree.ok();
    verdict(
        criterion,
        pass,
        format!("{detail}, agreement {:.1e}, {:.3}s (budget {:?})", agree.0, time.as_secs_f64(), budget),
    );
}

#[test]
fn criterion_1_motivating_example() {
    small_suite(1, Duration::from_secs(1), motivating_example);
}

#[test]
fn criterion_2_price_of_deception() {
    small_suite(2, Duration::from_secs(1), price_of_deception);
}

#[test]
fn criterion_3_mixed_policies() {
    small_suite(3, Duration::from_secs(5), mixed_policies);
}

fn reduction_identities(agree: &mut Agreement) -> Vec<(&'static str, bool)> {
    let mut opt_ok = true;
    let mut ic_ok = true;
    let mut mixed_ok = true;
    for v in 1..=4 {
        for g in non_isomorphic_graphs(v) {
            let target = max_independent_set_bruteforce(&g).unwrap() as f64 / v as f64;
            let opt_game = build_opt_hardness_game(&g).unwrap();
            let pure = agree.track(&solve_opt(&opt_game, false, false, 0.0).unwrap());
            let mixed = agree.track(&solve_opt(&opt_game, false, true, 0.0).unwrap());
            let ic = agree.track(&solve_opt(&build_ic_hardness_game(&g).unwrap(), true, false, 0.0).unwrap());
            opt_ok &= close(pure, target);
            ic_ok &= close(ic, target);
            mixed_ok &= close(mixed, pure);
        }
    }
    vec![("Opt = MIS/|V|", opt_ok), ("OptIC = MIS/|V|", ic_ok), ("mixed = pure", mixed_ok)]
}

#[test]
fn criterion_4_reduction_identities() {
    let graphs: usize = (1..=4).map(|v| non_isomorphic_graphs(v).len()).sum();
    let mut agree = Agreement::default();
    let (checks, time) = timed(|| reduction_identities(&mut agree));
    let (ok, detail) = summarize(&checks);
    let pass = ok && agree.ok() && time < Duration::from_secs(120);
    verdict(
        4,
        pass,
        format!(
            "{graphs} graphs on 1..4 vertices, {detail}, agreement {:.1e}, {:.2}s",
            agree.0,
            time.as_secs_f64()
        ),
    );
}

fn oracle_game(seed: u64) -> Game {
    let m = 2 + (seed % 2) as usize;
    let n = 2 + ((seed / 2) % 2) as usize;
    let k = 2 + ((seed / 4) % 2) as usize;
    let alpha = [0.0, 0.5, 1.0][(seed % 3) as usize];
    generate(&GenSpec::new(m, n, k, alpha, seed)).unwrap()
}

#[derive(Default)]
struct OracleTally {
    enumeration: usize,
    approx: usize,
    chain: usize,
    truthful_vs_opt: usize,
    worst_truthful_gap: f64,
}

fn oracle_equivalence(agree: &mut Agreement) -> OracleTally {
    let mut t = OracleTally::default();
    for seed in 0..50 {
        let g = oracle_game(seed);
        let mut v = [0.0; 4];
        let mut matched = true;
        for (i, (ic, mixed)) in
            [(false, false), (true, false), (false, true), (true, true)].into_iter().enumerate()
        {
            v[i] = agree.track(&solve_opt(&g, ic, mixed, 0.0).unwrap());
            let exact = agree.track(&solve_opt_enumeration(&g, ic, mixed).unwrap());
            matched &= close(v[i], exact);
        }
        t.enumeration += usize::from(!matched);
        let [opt, opt_ic, optx, optx_ic] = v;
        let exact = solve_opt_enumeration(&g, false, false).unwrap().objective;
        let approx = agree.track(&solve_approx(&g).unwrap());
        t.approx += usize::from(approx < exact / g.num_types() as f64 - EXACT);
        let bse = agree.track(&solve_bse(&g).unwrap());
        let chain = optx >= opt - EXACT
            && opt >= opt_ic - EXACT
            && opt_ic >= bse - EXACT
            && optx >= optx_ic - EXACT
            && optx_ic >= opt_ic - EXACT;
        t.chain += usize::from(!chain);
        let truthful = truthful_baseline(&g).unwrap().truthful;
        if truthful < opt - EXACT {
            t.truthful_vs_opt += 1;
            t.worst_truthful_gap = t.worst_truthful_gap.max(opt - truthful);
        }
    }
    t
}

#[test]
fn criterion_5_oracle_equivalence() {
    let mut agree = Agreement::default();
    let (t, time) = timed(|| oracle_equivalence(&mut agree));
    let pass = t.enumeration == 0
        && t.approx == 0
        && t.chain == 0
        && t.truthful_vs_opt == 0
        && agree.ok()
        && time < Duration::from_secs(300);
    verdict(
        5,
        pass,
        format!(
            "50 games: enumeration mismatches {}, approx below exact/|Θ| {}, ordering-chain breaks {}, \
             Truthful < Opt on {} (max Opt − Truthful {:.4}), agreement {:.1e}, {:.2}s",
            t.enumeration,
            t.approx,
            t.chain,
            t.truthful_vs_opt,
            t.worst_truthful_gap,
            agree.0,
            time.as_secs_f64()
        ),
    );
}

const SEVEN: [Method; 7] = [
    Method::Opt,
    Method::OptIc,
    Method::OptX,
    Method::OptXIc,
    Method::Bse,
    Method::Truthful,
    Method::Deceitful,
];

fn zero_sum_spread(agree: &mut Agreement) -> f64 {
    let mut spread: f64 = 0.0;
    for seed in 0..20 {
        let g = generate(&GenSpec::new(5, 5, 3, 1.0, seed)).unwrap();
        let values: Vec<f64> = SEVEN
            .iter()
            .map(|&m| {
                let r = run_method(&g, m, &SolveOptions::default()).unwrap();
                agree.0 = agree.0.max((r.value - r.evaluated).abs());
                r.value
            })
            .collect();
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        spread = spread.max(hi - lo);
    }
    spread
}

#[test]
fn criterion_6_zero_sum_collapse() {
    let mut agree = Agreement::default();
    let (spread, time) = timed(|| zero_sum_spread(&mut agree));
    let pass = spread <= EXACT && agree.ok();
    verdict(
        6,
        pass,
        format!(
            "20 games, max spread of seven methods {spread:.2e}, agreement {:.1e}, {:.2}s",
            agree.0,
            time.as_secs_f64()
        ),
    );
}

fn bench_config(m: usize, n: usize, seeds: u64, methods: Vec<Method>, epsilons: Vec<f64>) -> BenchConfig {
    BenchConfig {
        m,
        n,
        types: 5,
        alphas: vec![0.5],
        alpha2: None,
        seeds: (0..seeds).collect(),
        methods,
        epsilons,
        options: SolveOptions::default(),
        milp_limit: 500,
        jobs: None,
    }
}

fn mean_ratio(rows: &[BenchRow], method: Method) -> (f64, usize) {
    let ratios: Vec<f64> = rows.iter().filter(|r| r.method == method).filter_map(|r| r.ratio).collect();
    (ratios.iter().sum::<f64>() / ratios.len() as f64, ratios.len())
}

fn row_agreement(rows: &[BenchRow]) -> f64 {
    rows.iter()
        .filter(|r| r.epsilon == 0.0)
        .filter_map(|r| Some((r.value? - r.evaluated?).abs()))
        .fold(0.0, f64::max)
}

#[test]
fn criterion_7_figure_trends() {
    let methods = vec![Method::Opt, Method::OptXIc, Method::Bse, Method::Truthful];
    let (rows, time) = timed(|| run_bench(&bench_config(5, 10, 50, methods, vec![0.0])));
    let unsolved = rows.iter().filter(|r| r.status != RowStatus::Optimal).count();
    let (bse, nb) = mean_ratio(&rows, Method::Bse);
    let (optx_ic, nx) = mean_ratio(&rows, Method::OptXIc);
    let (opt, no) = mean_ratio(&rows, Method::Opt);
    let agreement = row_agreement(&rows);
    let pass = unsolved == 0
        && (nb, nx, no) == (50, 50, 50)
        && (0.70..=0.92).contains(&bse)
        && optx_ic >= 0.98
        && opt >= 0.98
        && agreement <= OBJECTIVE_AGREEMENT_TOL
        && time < Duration::from_secs(1800);
    verdict(
        7,
        pass,
        format!(
            "mean ratios BSE {bse:.4}, OptXIC {optx_ic:.4}, Opt {opt:.4}; unsolved rows {unsolved}, \
             agreement {agreement:.1e}, {:.1}s",
            time.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_8_robustness() {
    let epsilons = vec![0.0, 1e-5, 1e-4, 1e-3, 1e-1];
    let (rows, time) = timed(|| run_bench(&bench_config(10, 5, 30, vec![Method::Opt], epsilons.clone())));
    let base = |seed: u64| rows.iter().find(|r| r.seed == seed && r.epsilon == 0.0).and_then(|r| r.value);
    let errors = rows.iter().filter(|r| matches!(r.status, RowStatus::Error | RowStatus::Limit)).count();
    let mut pass = errors == 0 && (0..30).all(|s| base(s).is_some());
    let mut detail = Vec::new();
    let mut max_ratio: f64 = 0.0;
    for &eps in &epsilons[1..] {
        let mut ratios = Vec::new();
        let mut infeasible = 0;
        for r in rows.iter().filter(|r| r.epsilon == eps) {
            match (r.value, base(r.seed)) {
                (Some(v), Some(b)) if b != 0.0 => ratios.push(v / b),
                _ => infeasible += usize::from(r.status == RowStatus::Infeasible),
            }
        }
        let mean = ratios.iter().sum::<f64>() / ratios.len().max(1) as f64;
        max_ratio = ratios.iter().copied().fold(max_ratio, f64::max);
        if eps <= 1e-3 {
            pass &= ratios.len() == 30 && mean >= 0.995;
        }
        detail.push(format!("ε={eps:e}: mean {mean:.5} over {} ({infeasible} infeasible)", ratios.len()));
    }
    let agreement = row_agreement(&rows);
    pass &= max_ratio <= 1.0 + 1e-9 && agreement <= OBJECTIVE_AGREEMENT_TOL;
    verdict(
        8,
        pass,
        format!(
            "{}; max ratio {max_ratio:.10}; errors {errors}; agreement {agreement:.1e}; {:.1}s",
            detail.join("; "),
            time.as_secs_f64()
        ),
    );
}

fn compression_cases(rng: &mut ChaCha8Rng) -> usize {
    let mut bad = 0;
    for case in 0..200u64 {
        let g = generate(&GenSpec::new(3, 4, 3, rng.gen_range(0.0..1.0), case)).unwrap();
        let t = rng.gen_range(0..3);
        let parts = rng.gen_range(1..8);
        let entries: Vec<(f64, Outcome)> = (0..parts)
            .map(|_| {
                let w: Vec<f64> = (0..3).map(|_| rng.gen_range(0.0..1.0)).collect();
                let x = MixedStrategy::from_weights(&w).unwrap();
                let j = *best_responses(&g, t, &x, 1e-9).unwrap().last().unwrap();
                (1.0 / parts as f64, Outcome::new(x, j))
            })
            .collect();
        let mixture = Mixture::new(entries).unwrap();
        let packed = compress_mixture(&g, t, &mixture, 1e-9).unwrap();
        let same = [Payoff::Leader, Payoff::Follower(0), Payoff::Follower(1), Payoff::Follower(2)]
            .into_iter()
            .all(|side| (mixture.value(&g, side).unwrap() - packed.value(&g, side).unwrap()).abs() <= 1e-9);
        bad += usize::from(!same || packed.support_size() > g.n());
    }
    bad
}

fn random_model(rng: &mut ChaCha8Rng, binaries: usize) -> LpModel {
    let n = binaries + rng.gen_range(1..4);
    let mut model = LpModel::new(Sense::Maximize);
    let vars: Vec<Var> = (0..n)
        .map(|j| if j < binaries { model.add_binary() } else { model.add_var(0.0, rng.gen_range(0.5..4.0)) })
        .collect();
    for v in &vars {
        model.set_objective(*v, rng.gen_range(-3.0..5.0));
    }
    for _ in 0..rng.gen_range(1..6) {
        let row: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..3.0)).collect();
        model.add_dense_constraint(&row, Relation::Le, rng.gen_range(0.5..6.0));
    }
    if rng.gen_bool(0.3) {
        let row: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
        model.add_dense_constraint(&row, Relation::Ge, 0.0);
    }
    model
}

/// Maximum over every binary assignment of the remaining LP.
fn enumerate_binaries(model: &LpModel) -> Option<f64> {
    let bins: Vec<usize> = model.binaries().collect();
    let mut best: Option<f64> = None;
    for mask in 0u32..(1 << bins.len()) {
        let mut relaxed = LpModel::new(Sense::Maximize);
        let vars: Vec<Var> = (0..model.num_vars())
            .map(|j| match bins.iter().position(|&b| b == j) {
                Some(i) => {
                    let bit = f64::from((mask >> i) & 1);
                    relaxed.add_var(bit, bit)
                }
                None => {
                    let (lo, hi) = model.bounds(j);
                    relaxed.add_var(lo, hi)
                }
            })
            .collect();
        for (v, c) in vars.iter().zip(model.objective()) {
            relaxed.set_objective(*v, *c);
        }
        for c in model.constraints() {
            let terms: Vec<(Var, f64)> = c.terms.iter().map(|&(j, a)| (vars[j], a)).collect();
            relaxed.add_constraint(&terms, c.relation, c.rhs);
        }
        let sol = solve_lp(&relaxed).unwrap();
        if sol.is_optimal() {
            best = Some(best.map_or(sol.objective_value, |b: f64| b.max(sol.objective_value)));
        }
    }
    best
}

fn model_cases(rng: &mut ChaCha8Rng) -> usize {
    let mut bad = 0;
    for case in 0..100 {
        let binaries = if case % 4 == 0 { 0 } else { rng.gen_range(1..7) };
        let model = random_model(rng, binaries);
        let sol = if model.has_binaries() { solve_milp(&model) } else { solve_lp(&model) }.unwrap();
        let oracle = enumerate_binaries(&model);
        let ok = match oracle {
            Some(best) => {
                sol.is_optimal()
                    && model.residual(&sol.values) <= 1e-7
                    && model.binaries().all(|j| sol.values[j].min(1.0 - sol.values[j]).abs() <= 1e-6)
                    && (sol.objective_value - best).abs() <= 1e-7 * (1.0 + best.abs())
            }
            None => sol.status == LpStatus::Infeasible,
        };
        bad += usize::from(!ok);
    }
    bad
}

#[test]
fn criterion_9_property_suites() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let compression = compression_cases(&mut rng);
    let models = model_cases(&mut rng);
    let mut agree = Agreement::default();
    motivating_example(&mut agree);
    price_of_deception(&mut agree);
    mixed_policies(&mut agree);
    reduction_identities(&mut agree);
    oracle_equivalence(&mut agree);
    zero_sum_spread(&mut agree);
    let pass = compression == 0 && models == 0 && agree.ok();
    verdict(
        9,
        pass,
        format!(
            "compress_mixture failures {compression}/200, LP/MILP failures {models}/100, \
             objective agreement over suites 1-6 {:.1e} (suites 7-8 checked in place)",
            agree.0
        ),
    );
}
