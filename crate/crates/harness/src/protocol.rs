//! The evaluation protocol: who sits where with which evaluator variant,
//! and how a finished match turns into a binary score.
//!
//! A tournament is the full cross of seats x i x j: the evaluated agent
//! takes every seat in turn with evaluator variant `i`, and the benchmark
//! adversary fills the remaining seats with variants `j, j+1, ...` taken
//! mod E. With E variants and P seats that is exactly P*E^2 matches per
//! repetition.

use crate::agent::AgentSpec;
use crate::config::TournamentConfig;
use crate::record::MatchRecord;

/// splitmix64 finalizer; bijective, so distinct inputs stay distinct.
pub fn mix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// FNV-1a over the text bytes. Stable across runs and platforms.
pub fn stable_hash(text: &str) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for b in text.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100_0000_01b3);
    }
    h
}

/// Deterministic per-match seed derived from the tournament seed and the
/// match's protocol coordinates.
pub fn match_seed(root_seed: u64, seat: u8, i: u32, j: u32, rep: u32) -> u64 {
    let mut h = root_seed;
    for part in [seat as u64, i as u64, j as u64, rep as u64] {
        h = mix64(h ^ part);
    }
    h
}

/// Deterministic per-move seed; feeds playout generators and the random
/// baseline agent.
pub fn move_seed(match_seed: u64, ply: u32) -> u64 {
    mix64(match_seed ^ ((ply as u64 + 1) << 17))
}

/// Identity of one scheduled match. `(game, seat, i, j, seed)` is the
/// primary key for resume purposes; `rep` is bookkeeping only, since each
/// repetition already gets its own derived seed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MatchKey {
    pub game: String,
    pub seat: u8,
    pub i: u32,
    pub j: u32,
    pub rep: u32,
    pub seed: u64,
}

/// One scheduled match: its key plus the per-seat agents.
#[derive(Clone, Debug)]
pub struct Assignment {
    pub key: MatchKey,
    /// Indexed by seat.
    pub agents: Vec<AgentSpec>,
}

/// Materialize the full tournament schedule in a fixed canonical order:
/// repetition, then seat, then i, then j.
pub fn schedule(cfg: &TournamentConfig) -> Vec<Assignment> {
    let p = cfg.seats;
    let e = cfg.evaluators;
    let mut out = Vec::with_capacity(p * (e as usize) * (e as usize) * cfg.repetitions as usize);
    for rep in 0..cfg.repetitions {
        for seat in 0..p as u8 {
            for i in 0..e {
                for j in 0..e {
                    let mut agents = Vec::with_capacity(p);
                    let mut rank = 0u32;
                    for s in 0..p as u8 {
                        if s == seat {
                            agents.push(AgentSpec {
                                algorithm: cfg.evaluated.0,
                                variant: i,
                                budget: cfg.evaluated.1,
                            });
                        } else {
                            agents.push(AgentSpec {
                                algorithm: cfg.benchmark.0,
                                variant: (j + rank) % e,
                                budget: cfg.benchmark.1,
                            });
                            rank += 1;
                        }
                    }
                    out.push(Assignment {
                        key: MatchKey {
                            game: cfg.game.clone(),
                            seat,
                            i,
                            j,
                            rep,
                            seed: match_seed(cfg.seed, seat, i, j, rep),
                        },
                        agents,
                    });
                }
            }
        }
    }
    out
}

/// Binary score of one seat: 1 for a victory, 0 for a draw, -1 for a
/// defeat. A forfeit is a defeat for the forfeiter and a victory for
/// everyone else; an all-way tie is a draw for everyone.
pub fn binary_score(record: &MatchRecord, seat: u8) -> i8 {
    if let Some(f) = &record.failure {
        return if f.seat == seat { -1 } else { 1 };
    }
    if record.winners.is_empty() {
        return 0;
    }
    if record.winners.contains(&seat) {
        1
    } else {
        -1
    }
}
