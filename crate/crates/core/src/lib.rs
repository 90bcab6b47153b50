//! Leader policies for Bayesian Stackelberg games in which the follower may
//! imitate a different follower type.
//!
//! The crate is `no_std` (it needs `alloc`). Enable the `std` feature to get
//! wall-clock timing in [`solvers::SolveReport`].
//!
//! Layout:
//!
//! - [`game`]: games, strategies, outcomes, policies and their evaluation.
//! - [`lp`]: a dense revised simplex with a best-first branch-and-bound on
//!   binary variables.
//! - [`solvers`]: SSE, BSE, optimal (mixed/pure, with/without IC) policies,
//!   the enumeration oracle and the `1/|Θ|` approximation.
//! - [`reductions`]: hardness games built from graphs.
//! - [`gamegen`]: seeded covariance-game generator.
//! - [`catalog`]: small hand-built games used throughout the tests.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod catalog;
pub mod game;
pub mod gamegen;
pub mod lp;
pub mod reductions;
pub mod solvers;

pub use game::{
    best_report, best_responses, compress_mixture, evaluate_policy, evaluate_policy_with, expected_utility,
    follower_report_value, is_ic, validate_policy, EvalReport, FollowerType, Game, GameError, Matrix,
    MixedStrategy, Mixture, Outcome, Payoff, Policy, TieBreak, Tolerances, Violation,
};
