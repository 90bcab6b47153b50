//! Benchmark campaigns over seeded covariance games.
//!
//! Each `(seed, alpha, epsilon)` triple is one instance; every requested
//! method runs on it and yields one [`BenchRow`]. Instances are solved on a
//! rayon pool and the rows sorted afterwards, so the output does not depend
//! on `jobs`.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;
use stackelberg_core::gamegen::{generate, GenSpec};
use stackelberg_core::solvers::{Method, SolveError, SolveOptions};

use crate::run::run_method;

pub const CSV_HEADER: [&str; 12] = [
    "seed", "m", "n", "types", "alpha", "alpha2", "epsilon", "method", "value", "ratio", "time_ms", "status",
];

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub m: usize,
    pub n: usize,
    pub types: usize,
    pub alphas: Vec<f64>,
    /// Blend for odd-indexed types; `None` blends every type with `alpha`.
    pub alpha2: Option<f64>,
    pub seeds: Vec<u64>,
    pub methods: Vec<Method>,
    pub epsilons: Vec<f64>,
    pub options: SolveOptions,
    /// MILP methods are skipped when `types · n · m` exceeds this.
    pub milp_limit: usize,
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowStatus {
    Optimal,
    Infeasible,
    Limit,
    Skipped,
    Error,
}

impl RowStatus {
    pub fn label(self) -> &'static str {
        match self {
            RowStatus::Optimal => "optimal",
            RowStatus::Infeasible => "infeasible",
            RowStatus::Limit => "limit",
            RowStatus::Skipped => "skipped",
            RowStatus::Error => "error",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub seed: u64,
    pub m: usize,
    pub n: usize,
    pub types: usize,
    pub alpha: f64,
    pub alpha2: Option<f64>,
    pub epsilon: f64,
    pub method: Method,
    pub value: Option<f64>,
    /// Re-evaluated value of the method's policy.
    pub evaluated: Option<f64>,
    /// `value / Truthful`; `None` when either is missing or Truthful is 0.
    pub ratio: Option<f64>,
    pub time_ms: f64,
    pub status: RowStatus,
}

fn uses_milp(method: Method) -> bool {
    matches!(method, Method::Opt | Method::OptIc | Method::OptX | Method::Bse)
}

fn status_of(e: &SolveError) -> RowStatus {
    match e {
        SolveError::Infeasible { .. } => RowStatus::Infeasible,
        SolveError::Limit { .. } => RowStatus::Limit,
        _ => RowStatus::Error,
    }
}

fn run_instance(cfg: &BenchConfig, seed: u64, alpha: f64, epsilon: f64) -> Vec<BenchRow> {
    let alphas = match cfg.alpha2 {
        Some(a2) => vec![alpha, a2],
        None => vec![alpha],
    };
    let row = |method, value, evaluated, ratio, time_ms, status| BenchRow {
        seed,
        m: cfg.m,
        n: cfg.n,
        types: cfg.types,
        alpha,
        alpha2: cfg.alpha2,
        epsilon,
        method,
        value,
        evaluated,
        ratio,
        time_ms,
        status,
    };
    let game = match generate(&GenSpec::new(cfg.m, cfg.n, cfg.types, alpha, seed).with_alphas(alphas)) {
        Ok(g) => g,
        Err(_) => {
            return cfg.methods.iter().map(|&m| row(m, None, None, None, 0.0, RowStatus::Error)).collect()
        }
    };
    let options = SolveOptions { epsilon, ..cfg.options };
    let truthful = run_method(&game, Method::Truthful, &options).ok().map(|r| r.value);
    let too_big = cfg.types * cfg.n * cfg.m > cfg.milp_limit;
    cfg.methods
        .iter()
        .map(|&method| {
            if too_big && uses_milp(method) {
                return row(method, None, None, None, 0.0, RowStatus::Skipped);
            }
            match run_method(&game, method, &options) {
                Ok(r) => {
                    let ratio = truthful.filter(|t| *t != 0.0).map(|t| r.value / t);
                    row(
                        method,
                        Some(r.value),
                        Some(r.evaluated),
                        ratio,
                        r.time.as_secs_f64() * 1e3,
                        RowStatus::Optimal,
                    )
                }
                Err(e) => row(method, None, None, None, 0.0, status_of(&e)),
            }
        })
        .collect()
}

/// Runs the campaign; rows come back sorted by `(seed, alpha, epsilon, method)`.
pub fn run_bench(cfg: &BenchConfig) -> Vec<BenchRow> {
    let mut instances = Vec::new();
    for &seed in &cfg.seeds {
        for &alpha in &cfg.alphas {
            for &epsilon in &cfg.epsilons {
                instances.push((seed, alpha, epsilon));
            }
        }
    }
    let work = || -> Vec<BenchRow> {
        instances.par_iter().flat_map_iter(|&(s, a, e)| run_instance(cfg, s, a, e)).collect()
    };
    let mut rows = match cfg.jobs {
        Some(j) => match rayon::ThreadPoolBuilder::new().num_threads(j).build() {
            Ok(pool) => pool.install(work),
            Err(_) => work(),
        },
        None => work(),
    };
    rows.sort_by(|a, b| {
        (a.seed, a.method)
            .cmp(&(b.seed, b.method))
            .then(a.alpha.total_cmp(&b.alpha))
            .then(a.epsilon.total_cmp(&b.epsilon))
    });
    rows
}

/// Mean value and ratio per `(alpha, epsilon, method)` over rows that solved.
#[derive(Debug, Clone, PartialEq)]
pub struct Aggregate {
    pub alpha: f64,
    pub epsilon: f64,
    pub method: Method,
    pub mean_value: Option<f64>,
    pub mean_ratio: Option<f64>,
    pub mean_time_ms: Option<f64>,
    pub solved: usize,
    pub total: usize,
}

fn mean(xs: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, count) = xs.fold((0.0, 0usize), |(s, c), x| (s + x, c + 1));
    (count > 0).then(|| sum / count as f64)
}

pub fn aggregate(rows: &[BenchRow]) -> Vec<Aggregate> {
    let mut keys: Vec<(f64, f64, Method)> = Vec::new();
    for r in rows {
        if !keys.iter().any(|k| k.0 == r.alpha && k.1 == r.epsilon && k.2 == r.method) {
            keys.push((r.alpha, r.epsilon, r.method));
        }
    }
    keys.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)).then(a.2.cmp(&b.2)));
    keys.into_iter()
        .map(|(alpha, epsilon, method)| {
            let group: Vec<&BenchRow> = rows
                .iter()
                .filter(|r| r.alpha == alpha && r.epsilon == epsilon && r.method == method)
                .collect();
            let solved: Vec<&&BenchRow> = group.iter().filter(|r| r.status == RowStatus::Optimal).collect();
            Aggregate {
                alpha,
                epsilon,
                method,
                mean_value: mean(solved.iter().filter_map(|r| r.value)),
                mean_ratio: mean(solved.iter().filter_map(|r| r.ratio)),
                mean_time_ms: mean(solved.iter().map(|r| r.time_ms)),
                solved: solved.len(),
                total: group.len(),
            }
        })
        .collect()
}

#[derive(Serialize)]
struct CsvLine {
    seed: String,
    m: usize,
    n: usize,
    types: usize,
    alpha: f64,
    alpha2: Option<f64>,
    epsilon: f64,
    method: &'static str,
    value: Option<f64>,
    ratio: Option<f64>,
    time_ms: Option<String>,
    status: String,
}

/// Writes the rows, then one `seed = mean` line per [`Aggregate`] whose
/// status is `solved/total`.
pub fn write_csv<W: Write>(
    out: W,
    cfg: &BenchConfig,
    rows: &[BenchRow],
    omit_timing: bool,
) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_HEADER)?;
    let time = |t: Option<f64>| if omit_timing { None } else { t.map(|t| format!("{t:.3}")) };
    for r in rows {
        let status = match (r.status, r.ratio) {
            (RowStatus::Optimal, None) => String::from("ratio_undefined"),
            (s, _) => s.label().to_string(),
        };
        w.serialize(CsvLine {
            seed: r.seed.to_string(),
            m: r.m,
            n: r.n,
            types: r.types,
            alpha: r.alpha,
            alpha2: r.alpha2,
            epsilon: r.epsilon,
            method: r.method.label(),
            value: r.value,
            ratio: r.ratio,
            time_ms: time(Some(r.time_ms)),
            status,
        })?;
    }
    for a in aggregate(rows) {
        w.serialize(CsvLine {
            seed: "mean".into(),
            m: cfg.m,
            n: cfg.n,
            types: cfg.types,
            alpha: a.alpha,
            alpha2: cfg.alpha2,
            epsilon: a.epsilon,
            method: a.method.label(),
            value: a.mean_value,
            ratio: a.mean_ratio,
            time_ms: time(a.mean_time_ms),
            status: format!("{}/{}", a.solved, a.total),
        })?;
    }
    w.flush()?;
    Ok(())
}
