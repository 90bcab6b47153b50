//! Games, leader strategies, outcomes, policies, and the deception-aware
//! evaluation of policies.
//!
//! Indices are zero-based throughout: leader actions `0..m`, follower actions
//! `0..n` and follower types in declaration order `0..|Θ|`.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Construction-time and feasibility tolerance.
pub const FEASIBILITY_TOL: f64 = 1e-9;
/// Tolerance used when deciding whether two utilities tie.
pub const TIE_TOL: f64 = 1e-6;
/// Strategy entries in `[-CLAMP_TOL, 0)` are treated as round-off and clamped.
pub const CLAMP_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GameError {
    #[error("invalid game: {0}")]
    InvalidGame(String),
    #[error("invalid mixed strategy: {0}")]
    InvalidStrategy(String),
    #[error("invalid mixture: {0}")]
    InvalidMixture(String),
    #[error("unknown follower type index {0}")]
    UnknownType(usize),
    #[error("follower action {action} out of range (n = {n})")]
    ActionOutOfRange { action: usize, n: usize },
    #[error("strategy has {got} entries, expected {expected}")]
    StrategyLength { got: usize, expected: usize },
    #[error("policy is invalid ({} violation(s)); first: {}", .0.len(), .0[0])]
    InvalidPolicy(Vec<Violation>),
}

/// Dense row-major matrix of payoffs.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: alloc::vec![0.0; rows * cols] }
    }

    /// Builds a matrix from rows, rejecting ragged input.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self, GameError> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(GameError::InvalidGame(alloc::format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Ok(Matrix { rows: rows.len(), cols, data })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&v| f(v)).collect() }
    }

    /// `Σ_i x_i · self[i][j]`.
    pub fn column_dot(&self, x: &[f64], j: usize) -> f64 {
        x.iter().enumerate().map(|(i, xi)| xi * self.get(i, j)).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FollowerType {
    pub id: String,
    pub prior: f64,
    pub payoff: Matrix,
}

impl FollowerType {
    pub fn new(id: impl Into<String>, prior: f64, payoff: Matrix) -> Self {
        FollowerType { id: id.into(), prior, payoff }
    }
}

/// A Bayesian Stackelberg game whose leader payoff does not depend on the
/// follower type.
#[derive(Debug, Clone, PartialEq)]
pub struct Game {
    leader: Matrix,
    types: Vec<FollowerType>,
    name: Option<String>,
}

impl Game {
    pub fn new(leader: Matrix, types: Vec<FollowerType>) -> Result<Self, GameError> {
        let (m, n) = (leader.rows(), leader.cols());
        if m == 0 || n == 0 {
            return Err(GameError::InvalidGame("need at least one action per player".into()));
        }
        if types.is_empty() {
            return Err(GameError::InvalidGame("need at least one follower type".into()));
        }
        if !leader.is_finite() {
            return Err(GameError::InvalidGame("leader payoff has non-finite entries".into()));
        }
        let mut total = 0.0;
        for (t, ty) in types.iter().enumerate() {
            if ty.payoff.rows() != m || ty.payoff.cols() != n {
                return Err(GameError::InvalidGame(alloc::format!(
                    "type {:?} payoff is {}x{}, expected {m}x{n}",
                    ty.id,
                    ty.payoff.rows(),
                    ty.payoff.cols()
                )));
            }
            if !ty.payoff.is_finite() {
                return Err(GameError::InvalidGame(alloc::format!(
                    "type {:?} payoff has non-finite entries",
                    ty.id
                )));
            }
            if !(0.0..=1.0).contains(&ty.prior) {
                return Err(GameError::InvalidGame(alloc::format!(
                    "type {:?} prior {} outside [0, 1]",
                    ty.id,
                    ty.prior
                )));
            }
            if types[..t].iter().any(|other| other.id == ty.id) {
                return Err(GameError::InvalidGame(alloc::format!("duplicate type id {:?}", ty.id)));
            }
            total += ty.prior;
        }
        if (total - 1.0).abs() > FEASIBILITY_TOL {
            return Err(GameError::InvalidGame(alloc::format!("priors sum to {total}, expected 1")));
        }
        Ok(Game { leader, types, name: None })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Number of leader actions.
    pub fn m(&self) -> usize {
        self.leader.rows()
    }

    /// Number of follower actions.
    pub fn n(&self) -> usize {
        self.leader.cols()
    }

    pub fn num_types(&self) -> usize {
        self.types.len()
    }

    pub fn leader(&self) -> &Matrix {
        &self.leader
    }

    pub fn types(&self) -> &[FollowerType] {
        &self.types
    }

    pub fn follower(&self, t: usize) -> Result<&Matrix, GameError> {
        self.types.get(t).map(|ty| &ty.payoff).ok_or(GameError::UnknownType(t))
    }

    pub fn prior(&self, t: usize) -> f64 {
        self.types[t].prior
    }

    pub fn type_index(&self, id: &str) -> Option<usize> {
        self.types.iter().position(|ty| ty.id == id)
    }

    pub fn type_id(&self, t: usize) -> &str {
        &self.types[t].id
    }

    fn payoff(&self, side: Payoff) -> Result<&Matrix, GameError> {
        match side {
            Payoff::Leader => Ok(&self.leader),
            Payoff::Follower(t) => self.follower(t),
        }
    }

    fn check_action(&self, j: usize) -> Result<(), GameError> {
        if j < self.n() {
            Ok(())
        } else {
            Err(GameError::ActionOutOfRange { action: j, n: self.n() })
        }
    }

    fn check_strategy(&self, x: &MixedStrategy) -> Result<(), GameError> {
        if x.len() == self.m() {
            Ok(())
        } else {
            Err(GameError::StrategyLength { got: x.len(), expected: self.m() })
        }
    }
}

/// Whose payoff matrix to read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Payoff {
    Leader,
    Follower(usize),
}

/// A point of the leader's simplex `Δ_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedStrategy(Vec<f64>);

impl MixedStrategy {
    /// Validates `probs`: entries above `-1e-12`, sum within `1e-9` of one.
    /// Tiny negatives are clamped and the vector renormalised.
    pub fn new(probs: Vec<f64>) -> Result<Self, GameError> {
        if probs.is_empty() {
            return Err(GameError::InvalidStrategy("empty strategy".into()));
        }
        if let Some(v) = probs.iter().find(|v| !v.is_finite() || **v < -CLAMP_TOL) {
            return Err(GameError::InvalidStrategy(alloc::format!("entry {v} is not a probability")));
        }
        let sum: f64 = probs.iter().map(|v| v.max(0.0)).sum();
        if (sum - 1.0).abs() > FEASIBILITY_TOL {
            return Err(GameError::InvalidStrategy(alloc::format!("entries sum to {sum}")));
        }
        Ok(MixedStrategy(probs.into_iter().map(|v| v.max(0.0) / sum).collect()))
    }

    /// Projects LP round-off back onto the simplex: negatives become zero and
    /// the rest is rescaled. Fails only if nothing positive is left.
    pub fn from_weights(weights: &[f64]) -> Result<Self, GameError> {
        let sum: f64 = weights.iter().map(|v| v.max(0.0)).sum();
        if !(sum > 0.0) || !sum.is_finite() {
            return Err(GameError::InvalidStrategy("weights have no positive mass".into()));
        }
        Ok(MixedStrategy(weights.iter().map(|v| v.max(0.0) / sum).collect()))
    }

    /// The basis vector `e_i` of length `m`.
    pub fn pure(m: usize, i: usize) -> Self {
        let mut v = alloc::vec![0.0; m];
        v[i] = 1.0;
        MixedStrategy(v)
    }

    pub fn uniform(m: usize) -> Self {
        MixedStrategy(alloc::vec![1.0 / m as f64; m])
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A leader strategy together with the follower action it induces.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub strategy: MixedStrategy,
    pub action: usize,
}

impl Outcome {
    pub fn new(strategy: MixedStrategy, action: usize) -> Self {
        Outcome { strategy, action }
    }
}

/// A distribution over outcomes. Zero weights are dropped on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Mixture {
    entries: Vec<(f64, Outcome)>,
}

impl Mixture {
    /// Rejects negative or non-finite weights and empty support. The weight
    /// sum is checked by [`validate_policy`], not here.
    pub fn new(entries: Vec<(f64, Outcome)>) -> Result<Self, GameError> {
        if let Some((w, _)) = entries.iter().find(|(w, _)| !w.is_finite() || *w < 0.0) {
            return Err(GameError::InvalidMixture(alloc::format!("weight {w} is not a probability")));
        }
        let entries: Vec<_> = entries.into_iter().filter(|(w, _)| *w > 0.0).collect();
        if entries.is_empty() {
            return Err(GameError::InvalidMixture("no outcome with positive weight".into()));
        }
        Ok(Mixture { entries })
    }

    pub fn pure(outcome: Outcome) -> Self {
        Mixture { entries: alloc::vec![(1.0, outcome)] }
    }

    pub fn entries(&self) -> &[(f64, Outcome)] {
        &self.entries
    }

    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    pub fn weight_sum(&self) -> f64 {
        self.entries.iter().map(|(w, _)| w).sum()
    }

    pub fn is_pure(&self) -> bool {
        self.entries.len() == 1 && (self.entries[0].0 - 1.0).abs() <= FEASIBILITY_TOL
    }

    /// Mixture-expected utility of `side`.
    pub fn value(&self, game: &Game, side: Payoff) -> Result<f64, GameError> {
        let mut acc = 0.0;
        for (w, o) in &self.entries {
            acc += w * expected_utility(game, side, &o.strategy, o.action)?;
        }
        Ok(acc)
    }
}

/// One mixture per reported type, in type declaration order.
#[derive(Debug, Clone, PartialEq)]
pub struct Policy {
    entries: Vec<Mixture>,
}

impl Policy {
    pub fn new(entries: Vec<Mixture>) -> Self {
        Policy { entries }
    }

    pub fn from_outcomes(outcomes: Vec<Outcome>) -> Self {
        Policy { entries: outcomes.into_iter().map(Mixture::pure).collect() }
    }

    pub fn entry(&self, t: usize) -> Option<&Mixture> {
        self.entries.get(t)
    }

    pub fn entries(&self) -> &[Mixture] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_pure(&self) -> bool {
        self.entries.iter().all(Mixture::is_pure)
    }

    fn entry_checked(&self, t: usize) -> Result<&Mixture, GameError> {
        self.entries.get(t).ok_or(GameError::UnknownType(t))
    }
}

/// A reason a policy is not valid for a game.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    MissingEntry {
        report: usize,
    },
    ExtraEntry {
        index: usize,
    },
    WeightSum {
        report: usize,
        sum: f64,
    },
    StrategyLength {
        report: usize,
        outcome: usize,
        len: usize,
    },
    ActionOutOfRange {
        report: usize,
        outcome: usize,
        action: usize,
    },
    /// The prescribed action trails the best response by `shortfall`.
    NotBestResponse {
        report: usize,
        outcome: usize,
        action: usize,
        shortfall: f64,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingEntry { report } => write!(f, "no entry for report {report}"),
            Violation::ExtraEntry { index } => write!(f, "entry {index} has no matching type"),
            Violation::WeightSum { report, sum } => {
                write!(f, "weights for report {report} sum to {sum}")
            }
            Violation::StrategyLength { report, outcome, len } => {
                write!(f, "report {report} outcome {outcome}: strategy has {len} entries")
            }
            Violation::ActionOutOfRange { report, outcome, action } => {
                write!(f, "report {report} outcome {outcome}: action {action} out of range")
            }
            Violation::NotBestResponse { report, outcome, action, shortfall } => write!(
                f,
                "report {report} outcome {outcome}: action {action} is not a best response \
                 (short by {shortfall:e})"
            ),
        }
    }
}

/// How the follower resolves reports that tie in his own utility.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    /// The standard assumption: ties go the leader's way.
    #[default]
    LeaderFavorable,
    /// Pessimistic re-evaluation: ties go against the leader.
    LeaderAdverse,
    /// A type reports truthfully whenever that is among its best reports,
    /// otherwise as [`TieBreak::LeaderFavorable`]. The reading under which
    /// IC programs are written.
    TruthfulFirst,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Slack allowed when checking that a prescribed action is a best response.
    pub feasibility: f64,
    /// Utilities closer than this are treated as ties.
    pub tie: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { feasibility: FEASIBILITY_TOL, tie: TIE_TOL }
    }
}

impl Tolerances {
    /// Tolerances for policies recovered from floating-point LP solutions.
    pub fn solver() -> Self {
        Tolerances { feasibility: TIE_TOL, tie: TIE_TOL }
    }
}

/// `u(x, j) = Σ_i x_i · u(i, j)` for the leader or a follower type.
pub fn expected_utility(game: &Game, side: Payoff, x: &MixedStrategy, j: usize) -> Result<f64, GameError> {
    let matrix = game.payoff(side)?;
    game.check_action(j)?;
    game.check_strategy(x)?;
    Ok(matrix.column_dot(x.probs(), j))
}

/// `{ j : u_θ(x, j) ≥ max_k u_θ(x, k) − tol }`, in increasing order.
pub fn best_responses(game: &Game, t: usize, x: &MixedStrategy, tol: f64) -> Result<Vec<usize>, GameError> {
    let matrix = game.follower(t)?;
    game.check_strategy(x)?;
    let values: Vec<f64> = (0..game.n()).map(|j| matrix.column_dot(x.probs(), j)).collect();
    let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok((0..game.n()).filter(|&j| values[j] >= best - tol).collect())
}

/// How far `j` trails the best response of type `t` at `x` (zero if `j` is one).
fn br_shortfall(matrix: &Matrix, x: &[f64], j: usize) -> f64 {
    let own = matrix.column_dot(x, j);
    let best = (0..matrix.cols()).map(|k| matrix.column_dot(x, k)).fold(f64::NEG_INFINITY, f64::max);
    (best - own).max(0.0)
}

/// Lists every way `policy` fails to be a valid policy of `game`. An empty
/// result means the policy is valid.
pub fn validate_policy(game: &Game, policy: &Policy, tol: f64) -> Vec<Violation> {
    let mut out = Vec::new();
    for report in policy.len()..game.num_types() {
        out.push(Violation::MissingEntry { report });
    }
    for index in game.num_types()..policy.len() {
        out.push(Violation::ExtraEntry { index });
    }
    for (report, mixture) in policy.entries().iter().enumerate().take(game.num_types()) {
        let sum = mixture.weight_sum();
        if (sum - 1.0).abs() > FEASIBILITY_TOL {
            out.push(Violation::WeightSum { report, sum });
        }
        let matrix = &game.types()[report].payoff;
        for (outcome, (_, o)) in mixture.entries().iter().enumerate() {
            if o.strategy.len() != game.m() {
                out.push(Violation::StrategyLength { report, outcome, len: o.strategy.len() });
                continue;
            }
            if o.action >= game.n() {
                out.push(Violation::ActionOutOfRange { report, outcome, action: o.action });
                continue;
            }
            let shortfall = br_shortfall(matrix, o.strategy.probs(), o.action);
            if shortfall > tol {
                out.push(Violation::NotBestResponse { report, outcome, action: o.action, shortfall });
            }
        }
    }
    out
}

/// Expected true-type utility of a type-`true_type` follower who reports
/// `reported`.
pub fn follower_report_value(
    game: &Game,
    true_type: usize,
    policy: &Policy,
    reported: usize,
) -> Result<f64, GameError> {
    game.follower(true_type)?;
    game.follower(reported)?;
    policy.entry_checked(reported)?.value(game, Payoff::Follower(true_type))
}

/// The report a type-`true_type` follower makes under `policy`, with the
/// leader-favourable tie-break.
pub fn best_report(game: &Game, true_type: usize, policy: &Policy, tol: f64) -> Result<usize, GameError> {
    best_report_with(game, true_type, policy, tol, TieBreak::LeaderFavorable)
}

/// [`best_report`] with an explicit tie-break rule. Reports within `tol` of
/// the follower optimum are ranked by the leader's expected utility from
/// their entry; exact leader ties go to the earliest declared type.
pub fn best_report_with(
    game: &Game,
    true_type: usize,
    policy: &Policy,
    tol: f64,
    tie: TieBreak,
) -> Result<usize, GameError> {
    let values = (0..game.num_types())
        .map(|beta| follower_report_value(game, true_type, policy, beta))
        .collect::<Result<Vec<_>, _>>()?;
    let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if tie == TieBreak::TruthfulFirst && values[true_type] >= best - tol {
        return Ok(true_type);
    }
    let mut chosen: Option<(usize, f64)> = None;
    for (beta, &v) in values.iter().enumerate() {
        if v < best - tol {
            continue;
        }
        let leader = policy.entry_checked(beta)?.value(game, Payoff::Leader)?;
        let better = match (chosen, tie) {
            (None, _) => true,
            (Some((_, cur)), TieBreak::LeaderFavorable | TieBreak::TruthfulFirst) => leader > cur + 1e-12,
            (Some((_, cur)), TieBreak::LeaderAdverse) => leader < cur - 1e-12,
        };
        if better {
            chosen = Some((beta, leader));
        }
    }
    Ok(chosen.map(|(beta, _)| beta).unwrap_or(true_type))
}

/// Result of simulating every follower type against a policy.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    /// `best_report[θ]` is the type a true type `θ` reports.
    pub best_report: Vec<usize>,
    pub per_type_leader_utility: Vec<f64>,
    pub per_type_follower_utility: Vec<f64>,
    /// `U^L(σ)`: the prior-weighted sum of per-type leader utilities.
    pub total_leader_utility: f64,
}

/// `U^L(σ)` under leader-favourable tie-breaking. Invalid policies are
/// rejected with the full violation list.
pub fn evaluate_policy(game: &Game, policy: &Policy, tol: &Tolerances) -> Result<EvalReport, GameError> {
    evaluate_policy_with(game, policy, tol, TieBreak::LeaderFavorable)
}

pub fn evaluate_policy_with(
    game: &Game,
    policy: &Policy,
    tol: &Tolerances,
    tie: TieBreak,
) -> Result<EvalReport, GameError> {
    let violations = validate_policy(game, policy, tol.feasibility);
    if !violations.is_empty() {
        return Err(GameError::InvalidPolicy(violations));
    }
    let k = game.num_types();
    let mut report = EvalReport {
        best_report: Vec::with_capacity(k),
        per_type_leader_utility: Vec::with_capacity(k),
        per_type_follower_utility: Vec::with_capacity(k),
        total_leader_utility: 0.0,
    };
    for t in 0..k {
        let beta = best_report_with(game, t, policy, tol.tie, tie)?;
        let mixture = policy.entry_checked(beta)?;
        let leader = mixture.value(game, Payoff::Leader)?;
        let follower = mixture.value(game, Payoff::Follower(t))?;
        report.best_report.push(beta);
        report.per_type_leader_utility.push(leader);
        report.per_type_follower_utility.push(follower);
    }
    report.total_leader_utility =
        report.per_type_leader_utility.iter().zip(game.types()).map(|(u, ty)| ty.prior * u).sum();
    Ok(report)
}

/// True iff truthful reporting is weakly optimal for every type.
pub fn is_ic(game: &Game, policy: &Policy, tol: f64) -> Result<bool, GameError> {
    for t in 0..game.num_types() {
        let truthful = follower_report_value(game, t, policy, t)?;
        for beta in 0..game.num_types() {
            if follower_report_value(game, t, policy, beta)? > truthful + tol {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Merges outcomes of `mixture` that induce the same action into one outcome
/// whose strategy is their weighted average. Both players' expected utilities
/// are unchanged and the result has at most `n` outcomes, ordered by action.
pub fn compress_mixture(game: &Game, t: usize, mixture: &Mixture, tol: f64) -> Result<Mixture, GameError> {
    let matrix = game.follower(t)?;
    let (m, n) = (game.m(), game.n());
    let mut weight = alloc::vec![0.0; n];
    let mut merged = alloc::vec![alloc::vec![0.0; m]; n];
    let mut violations = Vec::new();
    for (idx, (w, o)) in mixture.entries().iter().enumerate() {
        game.check_strategy(&o.strategy)?;
        game.check_action(o.action)?;
        let shortfall = br_shortfall(matrix, o.strategy.probs(), o.action);
        if shortfall > tol {
            violations.push(Violation::NotBestResponse {
                report: t,
                outcome: idx,
                action: o.action,
                shortfall,
            });
        }
        weight[o.action] += w;
        for (acc, xi) in merged[o.action].iter_mut().zip(o.strategy.probs()) {
            *acc += w * xi;
        }
    }
    if !violations.is_empty() {
        return Err(GameError::InvalidPolicy(violations));
    }
    let mut entries = Vec::new();
    for j in 0..n {
        if weight[j] > 0.0 {
            let x: Vec<f64> = merged[j].iter().map(|v| v / weight[j]).collect();
            entries.push((weight[j], Outcome::new(MixedStrategy::from_weights(&x)?, j)));
        }
    }
    Mixture::new(entries)
}
