//! TriNim: a three-player race for the last token.
//!
//! A position is a list of heaps. On their turn a player removes one or two
//! tokens from a single heap; whoever removes the last token on the board
//! wins. Small enough to solve exhaustively, which makes it the main fixture
//! game for the exact solvers and the search equivalence tests.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::game::{Game, GameError};
use crate::payoff::{PayoffVector, PlayerId};
use crate::zobrist::{FeatureStream, ZobristKey};

pub const TRINIM_PLAYERS: usize = 3;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TriNimState {
    pub heaps: Vec<u8>,
    pub mover: PlayerId,
    /// Player who made the most recent move; the winner once the board is
    /// empty.
    pub last_mover: Option<PlayerId>,
}

/// Remove `take` tokens from heap `heap`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct TriNimAction {
    pub heap: u8,
    pub take: u8,
}

pub struct TriNim {
    heaps: Vec<u8>,
    /// Feature values: per heap, per fill level, plus mover and last-mover
    /// features.
    cell_features: Vec<Vec<u64>>,
    mover_features: Vec<u64>,
    last_features: Vec<u64>,
}

impl TriNim {
    pub fn new(heaps: &[u8]) -> Result<TriNim, GameError> {
        if heaps.is_empty() || heaps.len() > 8 {
            return Err(GameError::BadConfig("need 1..=8 heaps".to_string()));
        }
        if heaps.iter().any(|&h| h == 0 || h > 30) {
            return Err(GameError::BadConfig("heap sizes must be 1..=30".to_string()));
        }
        let mut stream = FeatureStream::new(&format!("trinim:{heaps:?}"));
        let cell_features = heaps
            .iter()
            .map(|&h| stream.take(h as usize + 1))
            .collect();
        let mover_features = stream.take(TRINIM_PLAYERS);
        let last_features = stream.take(TRINIM_PLAYERS + 1);
        Ok(TriNim {
            heaps: heaps.to_vec(),
            cell_features,
            mover_features,
            last_features,
        })
    }

    fn total(&self, state: &TriNimState) -> u64 {
        state.heaps.iter().map(|&h| h as u64).sum()
    }
}

impl Game for TriNim {
    type State = TriNimState;
    type Action = TriNimAction;

    fn name(&self) -> &str {
        "trinim"
    }

    fn player_count(&self) -> usize {
        TRINIM_PLAYERS
    }

    fn initial_state(&self) -> TriNimState {
        TriNimState {
            heaps: self.heaps.clone(),
            mover: PlayerId(0),
            last_mover: None,
        }
    }

    fn is_terminal(&self, state: &TriNimState) -> bool {
        state.heaps.iter().all(|&h| h == 0)
    }

    fn current_player(&self, state: &TriNimState) -> Result<PlayerId, GameError> {
        if self.is_terminal(state) {
            return Err(GameError::Terminal);
        }
        Ok(state.mover)
    }

    fn legal_actions(&self, state: &TriNimState) -> Result<Vec<TriNimAction>, GameError> {
        if self.is_terminal(state) {
            return Err(GameError::Terminal);
        }
        let mut actions = Vec::new();
        for (i, &h) in state.heaps.iter().enumerate() {
            for take in 1..=2u8.min(h) {
                actions.push(TriNimAction {
                    heap: i as u8,
                    take,
                });
            }
        }
        Ok(actions)
    }

    fn apply(&self, state: &TriNimState, action: TriNimAction) -> Result<TriNimState, GameError> {
        if self.is_terminal(state) {
            return Err(GameError::Terminal);
        }
        let heap = state
            .heaps
            .get(action.heap as usize)
            .copied()
            .ok_or_else(|| GameError::IllegalAction(format!("no heap {}", action.heap)))?;
        if action.take == 0 || action.take > 2 || action.take > heap {
            return Err(GameError::IllegalAction(format!(
                "cannot take {} from heap of {heap}",
                action.take
            )));
        }
        let mut heaps = state.heaps.clone();
        heaps[action.heap as usize] -= action.take;
        Ok(TriNimState {
            heaps,
            mover: state.mover.next(TRINIM_PLAYERS),
            last_mover: Some(state.mover),
        })
    }

    fn terminal_payoff(&self, state: &TriNimState) -> Result<PayoffVector, GameError> {
        if !self.is_terminal(state) {
            return Err(GameError::NotTerminal);
        }
        let winner = state.last_mover.expect("empty board implies a last move");
        Ok(PayoffVector::from_fn(TRINIM_PLAYERS, |p| {
            if p == winner {
                1.0
            } else {
                -1.0
            }
        }))
    }

    fn zobrist_key(&self, state: &TriNimState) -> ZobristKey {
        let mut key = 0u64;
        for (i, &h) in state.heaps.iter().enumerate() {
            key ^= self.cell_features[i][h as usize];
        }
        key ^= self.mover_features[state.mover.index()];
        key ^= self.last_features[state.last_mover.map_or(TRINIM_PLAYERS, PlayerId::index)];
        ZobristKey(key)
    }

    fn progress_measure(&self, state: &TriNimState) -> u64 {
        let start: u64 = self.heaps.iter().map(|&h| h as u64).sum();
        start - self.total(state)
    }

    fn supports_out_of_turn(&self) -> bool {
        true
    }

    fn out_of_turn_actions(
        &self,
        state: &TriNimState,
        _player: PlayerId,
    ) -> Result<Vec<TriNimAction>, GameError> {
        // Token removal does not depend on who removes.
        self.legal_actions(state)
    }

    fn apply_out_of_turn(
        &self,
        state: &TriNimState,
        player: PlayerId,
        action: TriNimAction,
    ) -> Result<TriNimState, GameError> {
        let mut next = self.apply(state, action)?;
        next.mover = state.mover;
        next.last_mover = Some(player);
        Ok(next)
    }

    fn encode_state(&self, state: &TriNimState) -> String {
        let heaps: Vec<String> = state.heaps.iter().map(|h| h.to_string()).collect();
        let last = state
            .last_mover
            .map_or("-".to_string(), |p| p.to_string());
        format!("{} m{} l{}", heaps.join(","), state.mover, last)
    }

    fn parse_state(&self, text: &str) -> Result<TriNimState, GameError> {
        let bad = |m: &str| GameError::ParseError(m.to_string());
        let mut parts = text.split_whitespace();
        let heaps_part = parts.next().ok_or_else(|| bad("missing heap list"))?;
        let mover_part = parts.next().ok_or_else(|| bad("missing mover"))?;
        let last_part = parts.next().ok_or_else(|| bad("missing last mover"))?;
        let heaps: Vec<u8> = heaps_part
            .split(',')
            .map(|s| s.parse().map_err(|_| bad("heap size not a number")))
            .collect::<Result<_, _>>()?;
        if heaps.len() != self.heaps.len() {
            return Err(bad("heap count does not match the game config"));
        }
        for (i, &h) in heaps.iter().enumerate() {
            if h > self.heaps[i] {
                return Err(bad("heap larger than its initial size"));
            }
        }
        let mover_s = mover_part
            .strip_prefix('m')
            .ok_or_else(|| bad("mover field must be m<digit>"))?;
        let mover: u8 = mover_s.parse().map_err(|_| bad("mover not a digit"))?;
        if mover as usize >= TRINIM_PLAYERS {
            return Err(bad("mover out of range"));
        }
        let last_s = last_part
            .strip_prefix('l')
            .ok_or_else(|| bad("last field must be l<digit|->"))?;
        let last_mover = if last_s == "-" {
            None
        } else {
            let l: u8 = last_s.parse().map_err(|_| bad("last mover not a digit"))?;
            if l as usize >= TRINIM_PLAYERS {
                return Err(bad("last mover out of range"));
            }
            Some(PlayerId(l))
        };
        if heaps.iter().all(|&h| h == 0) && last_mover.is_none() {
            return Err(bad("empty board needs a last mover"));
        }
        Ok(TriNimState {
            heaps,
            mover: PlayerId(mover),
            last_mover,
        })
    }

    fn action_text(&self, _state: &TriNimState, action: TriNimAction) -> String {
        format!("h{}t{}", action.heap, action.take)
    }
}

impl crate::eval::HeuristicGame for TriNim {
    fn heuristic_family(&self) -> &'static str {
        "tempo"
    }

    fn base_weights(&self) -> alloc::vec::Vec<f64> {
        alloc::vec![1.0]
    }

    /// Token-count tempo: with take-1-or-2 moves, a total of 0 mod 3 tokens
    /// is bad for the mover and good for the seat that just moved.
    fn heuristic(&self, state: &TriNimState, weights: &[f64]) -> PayoffVector {
        let total = self.total(state);
        let mover = state.mover;
        let prev = PlayerId(((mover.index() + TRINIM_PLAYERS - 1) % TRINIM_PLAYERS) as u8);
        let favoured = if total % 3 == 0 { prev } else { mover };
        PayoffVector::from_fn(TRINIM_PLAYERS, |p| {
            weights[0] * if p == favoured { 0.5 } else { -0.25 }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn actions_are_ordered_by_heap_then_take() {
        let g = TriNim::new(&[2, 1]).unwrap();
        let s = g.initial_state();
        let acts = g.legal_actions(&s).unwrap();
        assert_eq!(
            acts,
            [
                TriNimAction { heap: 0, take: 1 },
                TriNimAction { heap: 0, take: 2 },
                TriNimAction { heap: 1, take: 1 },
            ]
        );
    }

    #[test]
    fn last_take_wins() {
        let g = TriNim::new(&[3]).unwrap();
        let mut s = g.initial_state();
        s = g.apply(&s, TriNimAction { heap: 0, take: 2 }).unwrap();
        s = g.apply(&s, TriNimAction { heap: 0, take: 1 }).unwrap();
        assert!(g.is_terminal(&s));
        assert_eq!(
            g.terminal_payoff(&s).unwrap(),
            PayoffVector::new(&[-1.0, 1.0, -1.0])
        );
        assert_eq!(g.win_loss_vector(&s).unwrap(), g.terminal_payoff(&s).unwrap());
    }

    #[test]
    fn illegal_take_rejected() {
        let g = TriNim::new(&[1]).unwrap();
        let s = g.initial_state();
        let err = g.apply(&s, TriNimAction { heap: 0, take: 2 }).unwrap_err();
        assert!(matches!(err, GameError::IllegalAction(_)));
    }

    #[test]
    fn state_text_roundtrip() {
        let g = TriNim::new(&[4, 2]).unwrap();
        let s = g
            .apply(&g.initial_state(), TriNimAction { heap: 0, take: 2 })
            .unwrap();
        let text = g.encode_state(&s);
        assert_eq!(text, "2,2 m1 l0");
        assert_eq!(g.parse_state(&text).unwrap(), s);
    }
}
