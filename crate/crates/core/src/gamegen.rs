//! Seeded covariance games.
//!
//! All payoffs are drawn uniformly from `[0, 1)`; each follower matrix is
//! then blended as `u_θ ← (1 − α)·u_θ − α·u^L`. Priors are uniform draws
//! normalised to sum to one.
//!
//! Randomness comes from ChaCha8 seeded with `seed`, one stream per matrix:
//! stream 0 for the leader, `1 + 2t` for type `t`'s payoffs and `2 + 2t` for
//! its prior weight. Entries are drawn row-major. Adding types therefore
//! leaves the earlier matrices unchanged.

use alloc::format;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::game::{FollowerType, Game, GameError, Matrix};

#[derive(Debug, Clone, PartialEq)]
pub struct GenSpec {
    pub m: usize,
    pub n: usize,
    pub num_types: usize,
    /// Type `t` uses `alphas[t % alphas.len()]`.
    pub alphas: Vec<f64>,
    pub seed: u64,
}

impl GenSpec {
    pub fn new(m: usize, n: usize, num_types: usize, alpha: f64, seed: u64) -> Self {
        GenSpec { m, n, num_types, alphas: alloc::vec![alpha], seed }
    }

    pub fn with_alphas(mut self, alphas: Vec<f64>) -> Self {
        self.alphas = alphas;
        self
    }

    pub fn validate(&self) -> Result<(), GameError> {
        if self.m == 0 || self.n == 0 || self.num_types == 0 {
            return Err(GameError::InvalidGame("m, n and the type count must be at least 1".into()));
        }
        if self.alphas.is_empty() {
            return Err(GameError::InvalidGame("at least one alpha is required".into()));
        }
        if let Some(a) = self.alphas.iter().find(|a| !(0.0..=1.0).contains(*a)) {
            return Err(GameError::InvalidGame(format!("alpha {a} is outside [0, 1]")));
        }
        Ok(())
    }
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

fn uniform_matrix(rng: &mut ChaCha8Rng, m: usize, n: usize) -> Matrix {
    Matrix::from_fn(m, n, |_, _| rng.gen::<f64>())
}

pub fn generate(spec: &GenSpec) -> Result<Game, GameError> {
    spec.validate()?;
    let (m, n) = (spec.m, spec.n);
    let leader = uniform_matrix(&mut stream(spec.seed, 0), m, n);
    let mut weights = Vec::with_capacity(spec.num_types);
    let mut payoffs = Vec::with_capacity(spec.num_types);
    for t in 0..spec.num_types {
        let alpha = spec.alphas[t % spec.alphas.len()];
        let raw = uniform_matrix(&mut stream(spec.seed, 1 + 2 * t as u64), m, n);
        payoffs.push(Matrix::from_fn(m, n, |i, j| (1.0 - alpha) * raw.get(i, j) - alpha * leader.get(i, j)));
        weights.push(stream(spec.seed, 2 + 2 * t as u64).gen::<f64>());
    }
    let total: f64 = weights.iter().sum();
    let types = payoffs
        .into_iter()
        .enumerate()
        .map(|(t, payoff)| {
            let prior = if total > 0.0 { weights[t] / total } else { 1.0 / spec.num_types as f64 };
            FollowerType::new(format!("t{}", t + 1), prior, payoff)
        })
        .collect();
    let alpha_label = spec.alphas.iter().map(|a| format!("{a}")).collect::<Vec<_>>().join("_");
    Ok(Game::new(leader, types)?
        .with_name(format!("cov-m{m}-n{n}-k{}-a{alpha_label}-s{}", spec.num_types, spec.seed)))
}
