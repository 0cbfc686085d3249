//! Tournament harness for the multiplayer search engine.
//!
//! The core crate decides moves; this crate measures them. It schedules the
//! seat and evaluator rotation, executes matches (scoring agent faults as
//! forfeits), persists replayable JSONL records, and aggregates binary
//! scores into bootstrap confidence intervals. The `maxn` binary exposes
//! all of it plus exact solving, benchmarking, and perft counting.

pub mod agent;
pub mod bootstrap;
pub mod config;
pub mod play;
pub mod protocol;
pub mod record;
pub mod runner;

pub use agent::{bounds_for, choose_action, AgentSpec, BudgetSpec, Choice};
pub use bootstrap::{
    aggregate, aggregate_expecting, ExpectedCell, ScoreRow, ScoreTable, StrataRule,
};
pub use config::{
    load_config, params_from_json, params_to_json, parse_config, ConfigError, TournamentConfig,
};
pub use play::{play_match, play_match_any};
pub use protocol::{binary_score, match_seed, move_seed, schedule, Assignment, MatchKey};
pub use record::{
    append_record, forfeit_outcome, load_records, replay, FailureNote, MatchRecord, MoveStamp,
};
pub use runner::{run_experiment, RunOptions, RunOutcome};
