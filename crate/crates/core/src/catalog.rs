//! Small hand-built games with known answers.

use alloc::vec;

use crate::game::{FollowerType, Game, Matrix, MixedStrategy, Mixture, Outcome, Policy};

fn matrix<const C: usize>(rows: &[[f64; C]]) -> Matrix {
    Matrix::from_rows(rows).expect("rectangular literal")
}

fn strategy(v: &[f64]) -> MixedStrategy {
    MixedStrategy::new(v.to_vec()).expect("valid literal strategy")
}

/// Two-area patrolling game: the defender guards one of two areas, the
/// poacher (types `A` and `B`, equally likely) attacks one.
pub fn poacher_game() -> Game {
    Game::new(
        matrix(&[[1.0, -1.0], [-1.0, 0.99]]),
        vec![
            FollowerType::new("A", 0.5, matrix(&[[-1.0, 1.0 / 3.0], [3.0, -1.0]])),
            FollowerType::new("B", 0.5, matrix(&[[-1.0, 1.0], [1.0, -1.0]])),
        ],
    )
    .expect("valid game")
    .with_name("poacher")
}

/// Per-type SSE outcomes of [`poacher_game`]; type `A` profits from
/// imitating `B` under this menu.
pub fn poacher_truthful_menu() -> Policy {
    Policy::from_outcomes(vec![
        Outcome::new(strategy(&[0.75, 0.25]), 0),
        Outcome::new(strategy(&[0.5, 0.5]), 0),
    ])
}

/// Same strategies as the truthful menu but type `B` is induced to attack
/// the second area, which removes `A`'s incentive to imitate.
pub fn poacher_optimal_policy() -> Policy {
    Policy::from_outcomes(vec![
        Outcome::new(strategy(&[0.75, 0.25]), 0),
        Outcome::new(strategy(&[0.5, 0.5]), 1),
    ])
}

/// Game where ignoring deception costs the leader a factor `0.5 / epsilon`.
pub fn price_of_deception_game(epsilon: f64) -> Game {
    Game::new(
        matrix(&[[1.0, 0.0], [0.0, epsilon]]),
        vec![
            FollowerType::new("A", 0.5, matrix(&[[0.0, 0.2], [0.8, 1.0]])),
            FollowerType::new("B", 0.5, matrix(&[[0.2, 0.0], [1.0, 0.8]])),
        ],
    )
    .expect("valid game")
    .with_name("price-of-deception")
}

/// Three equally likely types where mixing over outcomes strictly beats
/// every pure policy (2/3 against at most 1/3).
pub fn mixed_advantage_game() -> Game {
    Game::new(
        matrix(&[[1.0, -1.0], [-1.0, 1.0]]),
        vec![
            FollowerType::new("star", 1.0 / 3.0, matrix(&[[-1.0, 1.0], [1.0, -1.0]])),
            FollowerType::new("A", 1.0 / 3.0, matrix(&[[0.0, 0.0], [1.0, -2.0]])),
            FollowerType::new("B", 1.0 / 3.0, matrix(&[[-2.0, 1.0], [0.0, 0.0]])),
        ],
    )
    .expect("valid game")
    .with_name("mixed-advantage")
}

/// The IC mixed policy worth 2/3 in [`mixed_advantage_game`].
pub fn mixed_advantage_policy() -> Policy {
    let half = strategy(&[0.5, 0.5]);
    Policy::new(vec![
        Mixture::new(vec![(0.5, Outcome::new(half.clone(), 0)), (0.5, Outcome::new(half, 1))])
            .expect("valid mixture"),
        Mixture::pure(Outcome::new(MixedStrategy::pure(2, 0), 0)),
        Mixture::pure(Outcome::new(MixedStrategy::pure(2, 1), 1)),
    ])
}
