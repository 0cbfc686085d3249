//! Persistent match records and replay verification.
//!
//! One [`MatchRecord`] is one JSON line in the tournament's append-only
//! `records.jsonl`. The record carries everything needed to replay the match
//! bit-identically: game name and parameters, the schedule cell, the derived
//! match seed, agent identifiers, and the chosen action ordinal per move.
//! Wall-clock millis per move are logged too but excluded from the canonical
//! form, since they are the one field honest reruns cannot reproduce.

use std::fs::OpenOptions;
use std::io::{BufRead, BufReader, Write as _};
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use maxn_core::games::make_game;
use maxn_core::Game;
use serde::{Deserialize, Serialize};

use crate::config::params_from_json;
use crate::protocol::MatchKey;

/// One executed move.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveStamp {
    /// Seat that moved.
    pub seat: u8,
    /// Chosen action ordinal in the canonical legal-action order.
    pub ordinal: u16,
    /// Search nodes spent on the decision.
    pub nodes: u64,
    /// Wall-clock cost; informational only, not part of the canonical form.
    pub millis: u64,
}

/// Why a match ended without reaching a terminal state.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureNote {
    /// Seat that forfeited.
    pub seat: u8,
    pub reason: String,
}

/// Full trace of one match.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatchRecord {
    pub game: String,
    pub params: serde_json::Value,
    /// Seat the evaluated agent occupied.
    pub seat: u8,
    /// Evaluated agent's variant index.
    pub i: u32,
    /// Benchmark rotation index.
    pub j: u32,
    /// Repetition index.
    pub rep: u32,
    /// Derived match seed.
    pub seed: u64,
    /// Agent identifiers by seat.
    pub agents: Vec<String>,
    pub moves: Vec<MoveStamp>,
    /// Terminal payoff vector, or the synthetic forfeit vector.
    pub outcome: Vec<f64>,
    /// Seats with the maximal win/loss component; empty only for a draw.
    pub winners: Vec<u8>,
    pub failure: Option<FailureNote>,
}

impl MatchRecord {
    pub fn key(&self) -> MatchKey {
        MatchKey {
            game: self.game.clone(),
            seat: self.seat,
            i: self.i,
            j: self.j,
            rep: self.rep,
            seed: self.seed,
        }
    }

    /// Algorithm text of the evaluated agent, e.g. `umaxn-safe` out of
    /// `umaxn-safe@v2+n5000`.
    pub fn evaluated_algorithm(&self) -> &str {
        let id = &self.agents[self.seat as usize];
        id.split('@').next().unwrap_or(id)
    }

    /// Serialized form with wall-clock fields zeroed; two honest runs of the
    /// same schedule produce identical canonical lines.
    pub fn canonical_line(&self) -> String {
        let mut clone = self.clone();
        for stamp in &mut clone.moves {
            stamp.millis = 0;
        }
        serde_json::to_string(&clone).expect("record serializes")
    }
}

/// Outcome vector for a forfeit by `seat`: -1 for the forfeiter, +1 for
/// everyone else, so a crash or illegal action scores as a loss against the
/// rest of the table.
pub fn forfeit_outcome(players: usize, seat: u8) -> Vec<f64> {
    (0..players)
        .map(|p| if p as u8 == seat { -1.0 } else { 1.0 })
        .collect()
}

/// Append one record to a JSONL file, creating it if needed.
pub fn append_record(path: &Path, record: &MatchRecord) -> Result<()> {
    let mut file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .with_context(|| format!("open {}", path.display()))?;
    let line = serde_json::to_string(record)?;
    writeln!(file, "{line}")?;
    Ok(())
}

/// Load every record from a JSONL file. Empty lines are skipped; a malformed
/// line is an error naming its line number.
pub fn load_records(path: &Path) -> Result<Vec<MatchRecord>> {
    let file = std::fs::File::open(path).with_context(|| format!("open {}", path.display()))?;
    let mut records = Vec::new();
    for (index, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: MatchRecord = serde_json::from_str(&line)
            .with_context(|| format!("{}:{}: bad record", path.display(), index + 1))?;
        records.push(record);
    }
    Ok(records)
}

/// Re-execute a record's move list against the rules and check every stored
/// fact: each mover, each ordinal's legality, and the final outcome,
/// winners, and failure note. Returns an error naming the first mismatch.
pub fn replay(record: &MatchRecord) -> Result<()> {
    let params = params_from_json(&record.params).map_err(|e| anyhow!("params: {e}"))?;
    let game = make_game(&record.game, &params).map_err(|e| anyhow!("{e}"))?;
    maxn_core::with_game!(&game, |g| replay_on(g, record))
}

fn replay_on<G: Game>(game: &G, record: &MatchRecord) -> Result<()> {
    let players = game.player_count();
    if record.agents.len() != players {
        bail!("record lists {} agents for {players} seats", record.agents.len());
    }
    let mut state = game.initial_state();
    for (ply, stamp) in record.moves.iter().enumerate() {
        if game.is_terminal(&state) {
            bail!("move {ply} plays past the end of the game");
        }
        let mover = game.current_player(&state).map_err(|e| anyhow!("{e}"))?;
        if mover.0 != stamp.seat {
            bail!("move {ply}: recorded seat {} but {} is to move", stamp.seat, mover.0);
        }
        let actions = game.legal_actions(&state).map_err(|e| anyhow!("{e}"))?;
        if stamp.ordinal as usize >= actions.len() {
            bail!(
                "move {ply}: ordinal {} out of {} legal actions",
                stamp.ordinal,
                actions.len()
            );
        }
        state = game
            .apply(&state, actions[stamp.ordinal as usize])
            .map_err(|e| anyhow!("{e}"))?;
    }
    match &record.failure {
        None => {
            if !game.is_terminal(&state) {
                bail!("moves end on a non-terminal state without a failure note");
            }
            let payoff = game.terminal_payoff(&state).map_err(|e| anyhow!("{e}"))?;
            if payoff.components() != record.outcome.as_slice() {
                bail!("outcome {:?} does not match payoff {:?}", record.outcome, payoff);
            }
            let wl = game.win_loss_vector(&state).map_err(|e| anyhow!("{e}"))?;
            let winners: Vec<u8> = wl.maximal_players().map(|p| p.0).collect();
            let winners = if winners.len() == players {
                Vec::new()
            } else {
                winners
            };
            if winners != record.winners {
                bail!("winners {:?} do not match {:?}", record.winners, winners);
            }
        }
        Some(note) => {
            let expected = forfeit_outcome(players, note.seat);
            if record.outcome != expected {
                bail!(
                    "forfeit outcome {:?} does not match expected {:?}",
                    record.outcome,
                    expected
                );
            }
            let winners: Vec<u8> = (0..players as u8).filter(|s| *s != note.seat).collect();
            if record.winners != winners {
                bail!("forfeit winners {:?} do not match {:?}", record.winners, winners);
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nim_record() -> MatchRecord {
        // TriNim [1]: one stone, first mover takes it through a chain of
        // forced wins; seat 0 moves once and wins.
        MatchRecord {
            game: "trinim".to_string(),
            params: serde_json::json!({"heaps": [1]}),
            seat: 0,
            i: 0,
            j: 0,
            rep: 0,
            seed: 99,
            agents: vec![
                "random@v0+n1".to_string(),
                "random@v0+n1".to_string(),
                "random@v0+n1".to_string(),
            ],
            moves: vec![MoveStamp {
                seat: 0,
                ordinal: 0,
                nodes: 0,
                millis: 3,
            }],
            outcome: vec![1.0, -1.0, -1.0],
            winners: vec![0],
            failure: None,
        }
    }

    #[test]
    fn a_faithful_record_replays_cleanly() {
        replay(&nim_record()).unwrap();
    }

    #[test]
    fn replay_rejects_tampered_outcomes_and_moves() {
        let mut bad = nim_record();
        bad.outcome = vec![-1.0, 1.0, 1.0];
        assert!(replay(&bad).is_err());

        let mut bad = nim_record();
        bad.winners = vec![1];
        assert!(replay(&bad).is_err());

        let mut bad = nim_record();
        bad.moves[0].ordinal = 40;
        assert!(replay(&bad).is_err());

        let mut bad = nim_record();
        bad.moves[0].seat = 2;
        assert!(replay(&bad).is_err());
    }

    #[test]
    fn canonical_lines_ignore_wall_clock_but_keep_everything_else() {
        let a = nim_record();
        let mut b = nim_record();
        b.moves[0].millis = 4000;
        assert_eq!(a.canonical_line(), b.canonical_line());
        let mut c = nim_record();
        c.moves[0].ordinal = 0;
        c.seed = 100;
        assert_ne!(a.canonical_line(), c.canonical_line());
    }

    #[test]
    fn records_round_trip_through_the_jsonl_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("records.jsonl");
        let record = nim_record();
        append_record(&path, &record).unwrap();
        append_record(&path, &record).unwrap();
        let loaded = load_records(&path).unwrap();
        assert_eq!(loaded, vec![record.clone(), record]);
    }

    #[test]
    fn forfeit_records_need_the_synthetic_outcome() {
        let mut record = nim_record();
        record.moves.clear();
        record.failure = Some(FailureNote {
            seat: 1,
            reason: "boom".to_string(),
        });
        record.outcome = forfeit_outcome(3, 1);
        record.winners = vec![0, 2];
        replay(&record).unwrap();

        record.outcome = vec![0.0, 0.0, 0.0];
        assert!(replay(&record).is_err());
    }
}
