//! Simulation engine for rating elicitation with new users.
//!
//! A recommender cold-starts on a new user by asking for a handful of
//! ratings. This crate simulates that conversation offline: held-out users
//! start with an empty profile, a strategy picks which items to ask about,
//! answers come from the held-back ratings, and a factorization model is
//! retrained after every round. Accuracy (MAE) and recommendation diversity
//! (spread) are tracked per round, in a single-domain setup and in a
//! cross-domain one where ratings from a second item catalog are added to
//! the training pool.

pub mod data;
pub mod harness;
pub mod ingest;
pub mod mf;
pub mod seed;
pub mod strategies;
pub mod synth;

pub use data::{Dataset, Domain, ItemId, Rating, RatingStats, UserId};
pub use harness::{ExperimentResult, RunSettings, Scenario};
pub use mf::{FactorModel, Hyperparams};
pub use strategies::StrategyKind;
