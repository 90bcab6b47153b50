use std::fs;
use std::io::Write;
use std::ops::Range;
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use stackelberg_core::game::{Game, Tolerances};
use stackelberg_core::gamegen::{generate, GenSpec};
use stackelberg_core::reductions::{max_independent_set, parse_edge_list, Variant};
use stackelberg_core::solvers::{opt_program, solve_opt, Method, SolveError, SolveOptions};

use crate::bench::{run_bench, write_csv, BenchConfig};
use crate::files::{game_to_string, parse_game, policy_to_string, PolicyFile};
use crate::run::run_method;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unreadable or malformed input files.
    Input(String),
    Infeasible(String),
    Limit(String),
    /// Anything else, including a failed `reduce --verify`.
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Infeasible(_) => 2,
            CliError::Limit(_) => 3,
            CliError::Input(_) => 4,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Infeasible(m) | CliError::Limit(m) | CliError::Failed(m) => m,
        }
    }
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Input(format!("{e:#}"))
    }
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::Infeasible { .. } => CliError::Infeasible(e.to_string()),
            SolveError::Limit { .. } => CliError::Limit(e.to_string()),
            SolveError::TooLarge(_) | SolveError::Game(_) => CliError::Input(e.to_string()),
            _ => CliError::Failed(e.to_string()),
        }
    }
}

fn io(e: std::io::Error) -> CliError {
    CliError::Failed(e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "stackelberg", version, about = "Leader policies against imitative follower deception")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one game file.
    Solve(SolveArgs),
    /// Write a seeded covariance game.
    Gen(GenArgs),
    /// Run a benchmark campaign and write CSV.
    Bench(BenchArgs),
    /// Build a hardness game from an edge list, or verify its identity.
    Reduce(ReduceArgs),
}

#[derive(Debug, Args)]
pub struct SolverFlags {
    /// Tie and feasibility tolerance for evaluating recovered policies.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Replace both big-M constants of the MILPs.
    #[arg(long)]
    pub big_m_override: Option<f64>,
    /// Branch-and-bound node limit.
    #[arg(long)]
    pub node_limit: Option<u64>,
}

impl SolverFlags {
    fn options(&self, epsilon: f64) -> Result<SolveOptions, CliError> {
        let mut o = SolveOptions::with_epsilon(epsilon);
        if let Some(t) = self.tol {
            if !(t.is_finite() && t >= 0.0) {
                return Err(CliError::Input(format!("--tol {t} must be >= 0")));
            }
            o.tol = Tolerances { feasibility: t, tie: t };
        }
        if let Some(m) = self.big_m_override {
            if !(m.is_finite() && m > 0.0) {
                return Err(CliError::Input(format!("--big-m-override {m} must be > 0")));
            }
            o.big_m = Some(m);
        }
        if let Some(n) = self.node_limit {
            o.node_limit = n;
        }
        Ok(o)
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub game: PathBuf,
    /// Opt, OptIC, OptX, OptXIC, BSE, Truthful, Deceitful or Approx.
    #[arg(long, default_value = "Opt")]
    pub method: String,
    /// Restrict an optimal-policy method to IC policies.
    #[arg(long)]
    pub ic: bool,
    /// Allow mixtures in an optimal-policy method.
    #[arg(long)]
    pub mixed: bool,
    #[arg(long, default_value_t = 0.0)]
    pub epsilon: f64,
    #[command(flatten)]
    pub solver: SolverFlags,
    /// Write the policy as JSON.
    #[arg(long)]
    pub policy_out: Option<PathBuf>,
    /// Write the optimal-policy program in text form.
    #[arg(long)]
    pub dump_lp: Option<PathBuf>,
    #[arg(long)]
    pub omit_timing: bool,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, default_value_t = 5)]
    pub m: usize,
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    #[arg(long, default_value_t = 5)]
    pub types: usize,
    #[arg(long, default_value_t = 0.5, conflicts_with = "alphas")]
    pub alpha: f64,
    /// Per-type blends, cycled over the types.
    #[arg(long, value_delimiter = ',')]
    pub alphas: Option<Vec<f64>>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Defaults to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 5)]
    pub m: usize,
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    #[arg(long, default_value_t = 5)]
    pub types: usize,
    /// Blend grid, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "0.5")]
    pub alpha: Vec<f64>,
    /// Blend for every other type; `--alpha` then applies to the rest.
    #[arg(long)]
    pub alpha2: Option<f64>,
    /// `a..b` or a comma-separated list.
    #[arg(long, default_value = "0..10")]
    pub seeds: String,
    /// Comma separated; defaults to every method.
    #[arg(long, value_delimiter = ',')]
    pub methods: Option<Vec<String>>,
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub epsilon: Vec<f64>,
    #[command(flatten)]
    pub solver: SolverFlags,
    /// Skip MILP methods when types·n·m exceeds this.
    #[arg(long, default_value_t = 500)]
    pub milp_limit: usize,
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Defaults to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Leave `time_ms` empty so repeated runs are byte-identical.
    #[arg(long)]
    pub omit_timing: bool,
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    /// Edge list: `V E`, then `E` lines `u v` (1-indexed).
    pub graph: PathBuf,
    /// `opt` (unrestricted policies) or `ic`.
    #[arg(long, default_value = "opt")]
    pub variant: String,
    /// Solve over mixed policies when verifying.
    #[arg(long)]
    pub mixed: bool,
    /// Solve the game and compare with the maximum independent set.
    #[arg(long)]
    pub verify: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn read(path: &Path) -> Result<String, CliError> {
    Ok(fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?)
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Failed(format!("writing {}: {e}", path.display())))
}

pub fn load_game(path: &Path) -> Result<Game, CliError> {
    parse_game(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn parse_method(label: &str) -> Result<Method, CliError> {
    Method::parse(label).ok_or_else(|| CliError::Input(format!("unknown method {label:?}")))
}

pub fn parse_seeds(text: &str) -> Result<Vec<u64>, CliError> {
    let bad = || CliError::Input(format!("bad seed list {text:?}"));
    if let Some((a, b)) = text.split_once("..") {
        let r: Range<u64> = a.trim().parse().map_err(|_| bad())?..b.trim().parse().map_err(|_| bad())?;
        return Ok(r.collect());
    }
    text.split(',').map(|s| s.trim().parse().map_err(|_| bad())).collect()
}

impl Cli {
    pub fn run(&self, out: &mut dyn Write) -> Result<(), CliError> {
        match &self.command {
            Command::Solve(a) => solve(a, out),
            Command::Gen(a) => gen(a, out),
            Command::Bench(a) => bench(a, out),
            Command::Reduce(a) => reduce(a, out),
        }
    }
}

fn solve(args: &SolveArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let game = load_game(&args.game)?;
    let mut method = parse_method(&args.method)?;
    if args.ic || args.mixed {
        let (ic, mixed) = method.opt_flags().ok_or_else(|| {
            CliError::Input(format!("--ic/--mixed need an optimal-policy method, not {method}"))
        })?;
        method = Method::from_opt_flags(ic || args.ic, mixed || args.mixed);
    }
    let options = args.solver.options(args.epsilon)?;
    if let Some(path) = &args.dump_lp {
        let (ic, mixed) = method.opt_flags().ok_or_else(|| {
            CliError::Input(format!("--dump-lp needs an optimal-policy method, not {method}"))
        })?;
        write_file(path, &opt_program(&game, ic, mixed, &options)?.to_text())?;
    }
    let r = run_method(&game, method, &options)?;
    let ids: Vec<String> = r
        .reports
        .iter()
        .enumerate()
        .map(|(t, &b)| format!("{}->{}", game.type_id(t), game.type_id(b)))
        .collect();
    let mut text = format!(
        "game      {} ({}x{}, {} types)\nmethod    {}\nepsilon   {}\nobjective {:.6}\nevaluated {:.6}\nreports   {}\nic        {}\nlps       {}\nnodes     {}\n",
        game.name().unwrap_or("-"),
        game.m(),
        game.n(),
        game.num_types(),
        method,
        args.epsilon,
        r.value,
        r.evaluated,
        ids.join(" "),
        if r.ic { "yes" } else { "no" },
        r.stats.lps_solved,
        r.stats.nodes,
    );
    if !args.omit_timing {
        text += &format!("time_ms   {:.3}\n", r.time.as_secs_f64() * 1e3);
    }
    out.write_all(text.as_bytes()).map_err(io)?;
    if let Some(path) = &args.policy_out {
        let mut file = PolicyFile::from_policy(&game, &r.policy);
        file.method = Some(method.label().into());
        file.objective = Some(r.value);
        write_file(path, &policy_to_string(&file))?;
    }
    Ok(())
}

fn gen(args: &GenArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let spec = GenSpec::new(args.m, args.n, args.types, args.alpha, args.seed);
    let spec = match &args.alphas {
        Some(a) => spec.with_alphas(a.clone()),
        None => spec,
    };
    let game = generate(&spec).map_err(|e| CliError::Input(e.to_string()))?;
    let text = game_to_string(&game);
    match &args.out {
        Some(path) => {
            write_file(path, &text)?;
            writeln!(out, "seed {} -> {}", args.seed, path.display()).map_err(io)?;
        }
        None => {
            eprintln!("seed {}", args.seed);
            out.write_all(text.as_bytes()).map_err(io)?;
        }
    }
    Ok(())
}

fn bench(args: &BenchArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let methods = match &args.methods {
        Some(list) => list.iter().map(|m| parse_method(m)).collect::<Result<Vec<_>, _>>()?,
        None => Method::ALL.to_vec(),
    };
    if let Some(&e) = args.epsilon.iter().find(|e| !(e.is_finite() && **e >= 0.0)) {
        return Err(CliError::Input(format!("epsilon {e} must be >= 0")));
    }
    let cfg = BenchConfig {
        m: args.m,
        n: args.n,
        types: args.types,
        alphas: args.alpha.clone(),
        alpha2: args.alpha2,
        seeds: parse_seeds(&args.seeds)?,
        methods,
        epsilons: args.epsilon.clone(),
        options: args.solver.options(0.0)?,
        milp_limit: args.milp_limit,
        jobs: args.jobs,
    };
    GenSpec::new(cfg.m, cfg.n, cfg.types, 0.0, 0)
        .with_alphas(cfg.alphas.iter().copied().chain(cfg.alpha2).collect())
        .validate()
        .map_err(|e| CliError::Input(e.to_string()))?;
    let rows = run_bench(&cfg);
    let csv_err = |e: csv::Error| CliError::Failed(e.to_string());
    match &args.out {
        Some(path) => {
            let file =
                fs::File::create(path).map_err(|e| CliError::Failed(format!("{}: {e}", path.display())))?;
            write_csv(file, &cfg, &rows, args.omit_timing).map_err(csv_err)?;
            writeln!(out, "{} rows -> {}", rows.len(), path.display()).map_err(io)?;
        }
        None => write_csv(out, &cfg, &rows, args.omit_timing).map_err(csv_err)?,
    }
    Ok(())
}

fn reduce(args: &ReduceArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let graph = parse_edge_list(&read(&args.graph)?)
        .map_err(|e| CliError::Input(format!("{}: {e}", args.graph.display())))?;
    let variant = Variant::parse(&args.variant)
        .ok_or_else(|| CliError::Input(format!("unknown variant {:?}", args.variant)))?;
    let game = variant.build(&graph).map_err(|e| CliError::Input(e.to_string()))?;
    if let Some(path) = &args.out {
        write_file(path, &game_to_string(&game))?;
    }
    if !args.verify {
        if args.out.is_none() {
            out.write_all(game_to_string(&game).as_bytes()).map_err(io)?;
        }
        return Ok(());
    }
    let objective = solve_opt(&game, variant == Variant::Ic, args.mixed, 0.0)?.objective;
    let mis = max_independent_set(&graph).map_err(|e| CliError::Input(e.to_string()))?.len();
    let v = graph.num_vertices();
    let holds = (objective - mis as f64 / v as f64).abs() <= 1e-6;
    writeln!(out, "objective {objective:.6} = MIS {mis} / {v} {}", if holds { "✓" } else { "✗" })
        .map_err(io)?;
    if holds {
        Ok(())
    } else {
        Err(CliError::Failed(String::from("identity does not hold")))
    }
}
