//! The game contract shared by every rule set in this crate.
//!
//! States are immutable snapshots: [`Game::apply`] returns a fresh successor
//! and never mutates its input. All games are finite and acyclic, which
//! [`Game::progress_measure`] makes checkable: it must strictly increase with
//! every applied action.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::hash::Hash;

use crate::payoff::{PayoffVector, PlayerId};
use crate::zobrist::ZobristKey;

/// Rule-level errors. Contract violations (querying a terminal state for a
/// mover, applying an out-of-list action) are reported, never silently fixed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum GameError {
    /// The state is terminal and the operation needs a non-terminal state.
    Terminal,
    /// The state is not terminal and the operation needs a terminal state.
    NotTerminal,
    /// The action is not legal in this state; the message names the rule.
    IllegalAction(String),
    /// The game does not support out-of-turn application.
    OutOfTurnUnsupported,
    /// Text given to `parse_state` does not encode a valid state.
    ParseError(String),
    /// Rejected game configuration.
    BadConfig(String),
}

impl fmt::Display for GameError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GameError::Terminal => write!(f, "operation requires a non-terminal state"),
            GameError::NotTerminal => write!(f, "operation requires a terminal state"),
            GameError::IllegalAction(m) => write!(f, "illegal action: {m}"),
            GameError::OutOfTurnUnsupported => {
                write!(f, "game does not support out-of-turn moves")
            }
            GameError::ParseError(m) => write!(f, "bad state text: {m}"),
            GameError::BadConfig(m) => write!(f, "bad game config: {m}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for GameError {}

/// A perfect-information sequential game for 2 to 4 players.
///
/// Legal actions are returned in a canonical deterministic order; the
/// position of an action in that list is its *ordinal*, which every search
/// algorithm in this crate uses for tie-breaking.
pub trait Game {
    type State: Clone + Eq + Hash + fmt::Debug;
    type Action: Copy + Eq + fmt::Debug;

    fn name(&self) -> &str;

    fn player_count(&self) -> usize;

    fn initial_state(&self) -> Self::State;

    fn is_terminal(&self, state: &Self::State) -> bool;

    /// Seat to move. Errors on terminal states.
    fn current_player(&self, state: &Self::State) -> Result<PlayerId, GameError>;

    /// Legal actions in canonical order. Non-empty for every non-terminal
    /// state (forced passes appear as explicit actions where the rules say
    /// so); errors on terminal states.
    fn legal_actions(&self, state: &Self::State) -> Result<Vec<Self::Action>, GameError>;

    /// Successor state. Validates the action and rejects anything that is
    /// not in `legal_actions`.
    fn apply(&self, state: &Self::State, action: Self::Action) -> Result<Self::State, GameError>;

    /// Game-defined score vector `f_t` of a terminal state.
    fn terminal_payoff(&self, state: &Self::State) -> Result<PayoffVector, GameError>;

    /// Win/loss vector `f_b` of a terminal state: +1 winners, -1 losers, all
    /// zero only for an all-way tie or a rule-declared draw.
    fn win_loss_vector(&self, state: &Self::State) -> Result<PayoffVector, GameError> {
        let scores = self.terminal_payoff(state)?;
        Ok(crate::payoff::win_loss_from_scores(&scores))
    }

    fn zobrist_key(&self, state: &Self::State) -> ZobristKey;

    /// Strictly increases with every applied action; witnesses acyclicity.
    fn progress_measure(&self, state: &Self::State) -> u64;

    /// Whether the piece-placement rules stay well-defined when turn order
    /// is ignored (required by best-reply search).
    fn supports_out_of_turn(&self) -> bool {
        false
    }

    /// Actions `player` could take right now if turn order were ignored.
    fn out_of_turn_actions(
        &self,
        _state: &Self::State,
        _player: PlayerId,
    ) -> Result<Vec<Self::Action>, GameError> {
        Err(GameError::OutOfTurnUnsupported)
    }

    /// Apply `action` as `player`, ignoring whose turn it is. The successor
    /// keeps the original state's nominal mover; turn bookkeeping is left to
    /// the caller.
    fn apply_out_of_turn(
        &self,
        _state: &Self::State,
        _player: PlayerId,
        _action: Self::Action,
    ) -> Result<Self::State, GameError> {
        Err(GameError::OutOfTurnUnsupported)
    }

    /// One-line textual encoding of a state (row-major cells plus mover and
    /// phase bookkeeping; format documented per game).
    fn encode_state(&self, state: &Self::State) -> String;

    fn parse_state(&self, text: &str) -> Result<Self::State, GameError>;

    /// Short human-readable form of an action, for logs and the CLI.
    fn action_text(&self, _state: &Self::State, action: Self::Action) -> String {
        alloc::format!("{action:?}")
    }
}

/// Number of action sequences of exactly `depth` moves from `state`
/// (sequences that hit a terminal state earlier are not counted).
pub fn perft<G: Game>(game: &G, state: &G::State, depth: u32) -> u64 {
    if depth == 0 {
        return 1;
    }
    if game.is_terminal(state) {
        return 0;
    }
    let actions = game.legal_actions(state).expect("non-terminal state");
    if depth == 1 {
        return actions.len() as u64;
    }
    let mut total = 0;
    for a in actions {
        let child = game.apply(state, a).expect("legal action");
        total += perft(game, &child, depth - 1);
    }
    total
}
