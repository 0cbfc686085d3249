//! One-shot vector bandit: the mover picks an arm, the game ends, and every
//! player receives the arm's fixed payoff component. Used to pin down the
//! shallow behaviour of every search algorithm.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::game::{Game, GameError};
use crate::payoff::{PayoffVector, PlayerId};
use crate::zobrist::{FeatureStream, ZobristKey};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum BanditState {
    Root,
    /// Terminal: arm that was pulled.
    Pulled(u8),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct BanditAction(pub u8);

pub struct Bandit {
    players: usize,
    arms: Vec<PayoffVector>,
    features: Vec<u64>,
}

impl Bandit {
    pub fn new(players: usize, arms: Vec<PayoffVector>) -> Result<Bandit, GameError> {
        if !(2..=4).contains(&players) {
            return Err(GameError::BadConfig("bandit needs 2..=4 players".to_string()));
        }
        if arms.is_empty() || arms.len() > 64 {
            return Err(GameError::BadConfig("bandit needs 1..=64 arms".to_string()));
        }
        if arms.iter().any(|v| v.len() != players) {
            return Err(GameError::BadConfig(
                "every arm needs one payoff per player".to_string(),
            ));
        }
        let features = FeatureStream::new(&format!("bandit:{players}:{}", arms.len()))
            .take(arms.len() + 1);
        Ok(Bandit {
            players,
            arms,
            features,
        })
    }

    pub fn arm_payoffs(&self) -> &[PayoffVector] {
        &self.arms
    }
}

impl Game for Bandit {
    type State = BanditState;
    type Action = BanditAction;

    fn name(&self) -> &str {
        "bandit"
    }

    fn player_count(&self) -> usize {
        self.players
    }

    fn initial_state(&self) -> BanditState {
        BanditState::Root
    }

    fn is_terminal(&self, state: &BanditState) -> bool {
        matches!(state, BanditState::Pulled(_))
    }

    fn current_player(&self, state: &BanditState) -> Result<PlayerId, GameError> {
        match state {
            BanditState::Root => Ok(PlayerId(0)),
            BanditState::Pulled(_) => Err(GameError::Terminal),
        }
    }

    fn legal_actions(&self, state: &BanditState) -> Result<Vec<BanditAction>, GameError> {
        match state {
            BanditState::Root => Ok((0..self.arms.len() as u8).map(BanditAction).collect()),
            BanditState::Pulled(_) => Err(GameError::Terminal),
        }
    }

    fn apply(&self, state: &BanditState, action: BanditAction) -> Result<BanditState, GameError> {
        match state {
            BanditState::Pulled(_) => Err(GameError::Terminal),
            BanditState::Root => {
                if (action.0 as usize) < self.arms.len() {
                    Ok(BanditState::Pulled(action.0))
                } else {
                    Err(GameError::IllegalAction(format!("no arm {}", action.0)))
                }
            }
        }
    }

    fn terminal_payoff(&self, state: &BanditState) -> Result<PayoffVector, GameError> {
        match state {
            BanditState::Root => Err(GameError::NotTerminal),
            BanditState::Pulled(arm) => Ok(self.arms[*arm as usize]),
        }
    }

    fn zobrist_key(&self, state: &BanditState) -> ZobristKey {
        ZobristKey(match state {
            BanditState::Root => self.features[self.arms.len()],
            BanditState::Pulled(arm) => self.features[*arm as usize],
        })
    }

    fn progress_measure(&self, state: &BanditState) -> u64 {
        match state {
            BanditState::Root => 0,
            BanditState::Pulled(_) => 1,
        }
    }

    fn encode_state(&self, state: &BanditState) -> String {
        match state {
            BanditState::Root => "root".to_string(),
            BanditState::Pulled(arm) => format!("arm{arm}"),
        }
    }

    fn parse_state(&self, text: &str) -> Result<BanditState, GameError> {
        if text == "root" {
            return Ok(BanditState::Root);
        }
        let arm: u8 = text
            .strip_prefix("arm")
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| GameError::ParseError("expected 'root' or 'arm<k>'".to_string()))?;
        if (arm as usize) < self.arms.len() {
            Ok(BanditState::Pulled(arm))
        } else {
            Err(GameError::ParseError(format!("no arm {arm}")))
        }
    }

    fn action_text(&self, _state: &BanditState, action: BanditAction) -> String {
        format!("arm{}", action.0)
    }
}

impl crate::eval::HeuristicGame for Bandit {
    fn heuristic_family(&self) -> &'static str {
        "flat"
    }

    fn base_weights(&self) -> Vec<f64> {
        alloc::vec![1.0]
    }

    // Only the pre-pull root is ever evaluated; there is nothing to judge.
    fn heuristic(&self, _state: &BanditState, _weights: &[f64]) -> PayoffVector {
        PayoffVector::zeros(self.players)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> Vec<PayoffVector> {
        alloc::vec![
            PayoffVector::new(&[0.2, 0.5, 0.3]),
            PayoffVector::new(&[0.9, 0.1, 0.4]),
            PayoffVector::new(&[0.4, 0.4, 0.4]),
        ]
    }

    #[test]
    fn pull_ends_the_game() {
        let g = Bandit::new(3, table()).unwrap();
        let s = g.apply(&g.initial_state(), BanditAction(1)).unwrap();
        assert!(g.is_terminal(&s));
        assert_eq!(
            g.terminal_payoff(&s).unwrap(),
            PayoffVector::new(&[0.9, 0.1, 0.4])
        );
        assert_eq!(
            g.win_loss_vector(&s).unwrap(),
            PayoffVector::new(&[1.0, -1.0, -1.0])
        );
    }

    #[test]
    fn all_tie_arm_is_a_draw() {
        let g = Bandit::new(3, table()).unwrap();
        let s = g.apply(&g.initial_state(), BanditAction(2)).unwrap();
        assert_eq!(g.win_loss_vector(&s).unwrap(), PayoffVector::zeros(3));
    }
}
