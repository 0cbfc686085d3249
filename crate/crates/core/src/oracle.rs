//! Exhaustive reference solvers.
//!
//! These are deliberately plain recursive solvers, independent of the search
//! module, used to freeze expected values for tests and to cross-check the
//! best-first search. They enumerate entire game DAGs and are only meant for
//! toy instances (a configurable state cap guards against misuse).

use alloc::vec::Vec;
use core::fmt;

use crate::game::{Game, GameError};
use crate::payoff::{PayoffVector, PlayerId};
use crate::zobrist::{KeyMap, ZobristKey};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum OracleError {
    /// The reachable state set exceeds the configured cap.
    CapExceeded { cap: usize },
    Game(GameError),
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::CapExceeded { cap } => {
                write!(f, "reachable states exceed the cap of {cap}")
            }
            OracleError::Game(e) => write!(f, "{e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for OracleError {}

impl From<GameError> for OracleError {
    fn from(e: GameError) -> OracleError {
        OracleError::Game(e)
    }
}

/// Solved value of one state under exhaustive max^n.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct SolvedEntry {
    /// Game-score vector of the subgame solution.
    pub value: PayoffVector,
    /// Ordinal of the chosen action; `None` for terminal states.
    pub best: Option<u16>,
    /// Seat to move; `None` for terminal states.
    pub mover: Option<PlayerId>,
}

/// Exhaustive max^n solution of everything reachable from one root.
#[derive(Debug)]
pub struct SolvedTable {
    entries: KeyMap<ZobristKey, SolvedEntry>,
}

impl SolvedTable {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, key: ZobristKey) -> Option<&SolvedEntry> {
        self.entries.get(&key)
    }

    pub fn value_of<G: Game>(&self, game: &G, state: &G::State) -> Option<PayoffVector> {
        self.get(game.zobrist_key(state)).map(|e| e.value)
    }

    pub fn iter(&self) -> impl Iterator<Item = (ZobristKey, &SolvedEntry)> {
        self.entries.iter().map(|(k, e)| (*k, e))
    }
}

/// Exhaustive max^n with the game scores `f_t` at terminals. At every
/// interior state the mover picks the action maximising their own component
/// of the child value; ties go to the lowest action ordinal, matching the
/// tie-break used by every search algorithm in this crate.
pub fn solve_maxn<G: Game>(
    game: &G,
    root: &G::State,
    cap: usize,
) -> Result<SolvedTable, OracleError> {
    let mut table = SolvedTable {
        entries: KeyMap::default(),
    };
    solve_maxn_rec(game, root, cap, &mut table)?;
    Ok(table)
}

fn solve_maxn_rec<G: Game>(
    game: &G,
    state: &G::State,
    cap: usize,
    table: &mut SolvedTable,
) -> Result<PayoffVector, OracleError> {
    let key = game.zobrist_key(state);
    if let Some(e) = table.entries.get(&key) {
        return Ok(e.value);
    }
    if table.entries.len() >= cap {
        return Err(OracleError::CapExceeded { cap });
    }
    if game.is_terminal(state) {
        let value = game.terminal_payoff(state)?;
        table.entries.insert(
            key,
            SolvedEntry {
                value,
                best: None,
                mover: None,
            },
        );
        return Ok(value);
    }
    let mover = game.current_player(state)?;
    let actions = game.legal_actions(state)?;
    let mut best: Option<(u16, PayoffVector)> = None;
    for (ordinal, action) in actions.into_iter().enumerate() {
        let child = game.apply(state, action)?;
        let value = solve_maxn_rec(game, &child, cap, table)?;
        let better = match &best {
            None => true,
            Some((_, cur)) => value[mover] > cur.get(mover),
        };
        if better {
            best = Some((ordinal as u16, value));
        }
    }
    let (ordinal, value) = best.expect("non-terminal state has actions");
    table.entries.insert(
        key,
        SolvedEntry {
            value,
            best: Some(ordinal),
            mover: Some(mover),
        },
    );
    Ok(value)
}

/// Solved scalar value of one state under the paranoid reduction.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct ParanoidEntry {
    /// Root player's component of the subgame solution.
    pub value: f64,
    pub best: Option<u16>,
    pub mover: Option<PlayerId>,
}

pub struct ParanoidTable {
    pub root_player: PlayerId,
    entries: KeyMap<ZobristKey, ParanoidEntry>,
}

impl ParanoidTable {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, key: ZobristKey) -> Option<&ParanoidEntry> {
        self.entries.get(&key)
    }
}

/// Exhaustive paranoid solve: `root_player` maximises their own terminal
/// score while all other seats jointly minimise it. Ties go to the lowest
/// action ordinal.
pub fn solve_paranoid<G: Game>(
    game: &G,
    root: &G::State,
    root_player: PlayerId,
    cap: usize,
) -> Result<ParanoidTable, OracleError> {
    let mut table = ParanoidTable {
        root_player,
        entries: KeyMap::default(),
    };
    solve_paranoid_rec(game, root, root_player, cap, &mut table)?;
    Ok(table)
}

fn solve_paranoid_rec<G: Game>(
    game: &G,
    state: &G::State,
    root_player: PlayerId,
    cap: usize,
    table: &mut ParanoidTable,
) -> Result<f64, OracleError> {
    let key = game.zobrist_key(state);
    if let Some(e) = table.entries.get(&key) {
        return Ok(e.value);
    }
    if table.entries.len() >= cap {
        return Err(OracleError::CapExceeded { cap });
    }
    if game.is_terminal(state) {
        let value = game.terminal_payoff(state)?[root_player];
        table.entries.insert(
            key,
            ParanoidEntry {
                value,
                best: None,
                mover: None,
            },
        );
        return Ok(value);
    }
    let mover = game.current_player(state)?;
    let maximizing = mover == root_player;
    let actions = game.legal_actions(state)?;
    let mut best: Option<(u16, f64)> = None;
    for (ordinal, action) in actions.into_iter().enumerate() {
        let child = game.apply(state, action)?;
        let value = solve_paranoid_rec(game, &child, root_player, cap, table)?;
        let better = match best {
            None => true,
            Some((_, cur)) => {
                if maximizing {
                    value > cur
                } else {
                    value < cur
                }
            }
        };
        if better {
            best = Some((ordinal as u16, value));
        }
    }
    let (ordinal, value) = best.expect("non-terminal state has actions");
    table.entries.insert(
        key,
        ParanoidEntry {
            value,
            best: Some(ordinal),
            mover: Some(mover),
        },
    );
    Ok(value)
}

/// Reachability census of a game.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct StateCount {
    /// Number of distinct reachable states (exact, by state equality).
    pub states: u64,
    /// Number of distinct Zobrist keys among those states. A shortfall
    /// against `states` counts hash collisions.
    pub distinct_keys: u64,
}

/// Exact count of distinct states reachable from `root` (inclusive).
pub fn count_states<G: Game>(
    game: &G,
    root: &G::State,
    cap: usize,
) -> Result<StateCount, OracleError> {
    let mut seen: hashbrown::HashSet<G::State> = hashbrown::HashSet::new();
    let mut keys: hashbrown::HashSet<u64> = hashbrown::HashSet::new();
    let mut stack = Vec::new();
    seen.insert(root.clone());
    keys.insert(game.zobrist_key(root).0);
    stack.push(root.clone());
    while let Some(state) = stack.pop() {
        if seen.len() > cap {
            return Err(OracleError::CapExceeded { cap });
        }
        if game.is_terminal(&state) {
            continue;
        }
        for action in game.legal_actions(&state)? {
            let child = game.apply(&state, action)?;
            if seen.contains(&child) {
                continue;
            }
            keys.insert(game.zobrist_key(&child).0);
            seen.insert(child.clone());
            stack.push(child);
        }
    }
    Ok(StateCount {
        states: seen.len() as u64,
        distinct_keys: keys.len() as u64,
    })
}
