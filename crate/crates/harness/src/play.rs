//! Match execution: drive one game from the initial state to an outcome.

use std::time::Instant;

use anyhow::{anyhow, bail, Result};
use maxn_core::eval::HeuristicGame;
use maxn_core::games::AnyGame;

use crate::agent::{choose_action, AgentSpec};
use crate::protocol::{move_seed, MatchKey};
use crate::record::{forfeit_outcome, FailureNote, MatchRecord, MoveStamp};

/// Play one match. Agent errors and out-of-range choices become forfeits
/// with a failure note; an illegal choice is never corrected or re-rolled.
/// Rule errors (which indicate harness bugs, not agent faults) propagate.
pub fn play_match<G: HeuristicGame>(
    game: &G,
    key: &MatchKey,
    agents: &[AgentSpec],
    params: &serde_json::Value,
) -> Result<MatchRecord> {
    let players = game.player_count();
    if agents.len() != players {
        bail!("{} agents for {players} seats", agents.len());
    }
    let mut state = game.initial_state();
    let mut moves: Vec<MoveStamp> = Vec::new();
    let mut failure: Option<FailureNote> = None;
    let mut ply: u32 = 0;
    while !game.is_terminal(&state) {
        let mover = game.current_player(&state).map_err(|e| anyhow!("{e}"))?;
        let spec = &agents[mover.0 as usize];
        let seed = move_seed(key.seed, ply);
        let started = Instant::now();
        match choose_action(game, spec, &state, seed) {
            Ok(choice) => {
                let millis = started.elapsed().as_millis() as u64;
                let actions = game.legal_actions(&state).map_err(|e| anyhow!("{e}"))?;
                if (choice.ordinal as usize) >= actions.len() {
                    failure = Some(FailureNote {
                        seat: mover.0,
                        reason: format!(
                            "illegal action ordinal {} of {}",
                            choice.ordinal,
                            actions.len()
                        ),
                    });
                    break;
                }
                state = game
                    .apply(&state, actions[choice.ordinal as usize])
                    .map_err(|e| anyhow!("{e}"))?;
                moves.push(MoveStamp {
                    seat: mover.0,
                    ordinal: choice.ordinal,
                    nodes: choice.nodes,
                    millis,
                });
            }
            Err(reason) => {
                failure = Some(FailureNote {
                    seat: mover.0,
                    reason,
                });
                break;
            }
        }
        ply += 1;
    }
    let (outcome, winners) = match &failure {
        None => {
            let payoff = game.terminal_payoff(&state).map_err(|e| anyhow!("{e}"))?;
            let wl = game.win_loss_vector(&state).map_err(|e| anyhow!("{e}"))?;
            let winners: Vec<u8> = wl.maximal_players().map(|p| p.0).collect();
            let winners = if winners.len() == players {
                Vec::new()
            } else {
                winners
            };
            (payoff.components().to_vec(), winners)
        }
        Some(note) => (
            forfeit_outcome(players, note.seat),
            (0..players as u8).filter(|s| *s != note.seat).collect(),
        ),
    };
    Ok(MatchRecord {
        game: game.name().to_string(),
        params: params.clone(),
        seat: key.seat,
        i: key.i,
        j: key.j,
        rep: key.rep,
        seed: key.seed,
        agents: agents.iter().map(AgentSpec::id_text).collect(),
        moves,
        outcome,
        winners,
        failure,
    })
}

/// [`play_match`] over a type-erased game.
pub fn play_match_any(
    game: &AnyGame,
    key: &MatchKey,
    agents: &[AgentSpec],
    params: &serde_json::Value,
) -> Result<MatchRecord> {
    maxn_core::with_game!(game, |g| play_match(g, key, agents, params))
}
