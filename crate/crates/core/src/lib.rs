//! Multiplayer game-tree search for perfect-information games of 2 to 4
//! players.
//!
//! The crate is organised as:
//!
//! - [`game`]: the rule-set contract (immutable states, canonical action
//!   ordering, Zobrist keys) plus [`game::perft`];
//! - [`games`]: seven board games and two toy games implementing it;
//! - [`eval`]: heuristic evaluation, batching, normalization, calibration
//!   and seeded evaluator families;
//! - [`search`]: the best-first unbounded max^n search with completion, and
//!   the baseline algorithms it is measured against (fixed-depth max^n,
//!   k-best, paranoid, best-reply variants, MCTS);
//! - [`oracle`]: plain exhaustive solvers used as references in tests.
//!
//! The crate is `no_std`-compatible with `alloc`; the default `std` feature
//! adds wall-clock search budgets.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod eval;
pub mod game;
pub mod games;
pub mod oracle;
pub mod payoff;
pub mod search;
pub mod zobrist;

pub use game::{Game, GameError};
pub use payoff::{PayoffVector, PlayerId};
pub use zobrist::ZobristKey;
