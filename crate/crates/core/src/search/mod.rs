//! Game-tree search algorithms.
//!
//! The centrepiece is [`UnboundedMaxn`], a best-first max^n search that
//! tracks per-action completion vectors and can prove (win/draw/loss)
//! resolutions. The remaining algorithms are the baselines it is compared
//! against: fixed-depth max^n ([`maxn_depth`]), its k-best pruning variant,
//! the paranoid reduction, best-reply search and BRS+, and two MCTS
//! variants. All of them break ties by the lowest action ordinal in the
//! canonical legal-action order.

mod brs;
mod deepening;
mod depth;
mod mcts;
mod paranoid;
mod tt;
mod unbounded;

pub use brs::{brs, brs_plus};
pub use deepening::{iterative_deepening, DepthAlgorithm, IterativeResult};
pub use depth::{kbest_maxn, maxn_depth, DepthResult};
pub use mcts::{mcts, mcts_h, MctsParams, MctsResult};
pub use paranoid::{paranoid, ScalarResult};
pub use tt::{EdgeStats, StoredState, TranspositionTable};
pub use unbounded::{unbounded_maxn, SearchResult, StepReport, UnboundedMaxn};

use alloc::string::{String, ToString};
use core::fmt;

use crate::game::GameError;
use crate::payoff::PlayerId;

/// f64 math that works without std.
pub(crate) mod fmath {
    #[cfg(feature = "std")]
    pub fn sqrt(x: f64) -> f64 {
        x.sqrt()
    }

    #[cfg(not(feature = "std"))]
    pub fn sqrt(x: f64) -> f64 {
        libm::sqrt(x)
    }

    #[cfg(feature = "std")]
    pub fn ln(x: f64) -> f64 {
        x.ln()
    }

    #[cfg(not(feature = "std"))]
    pub fn ln(x: f64) -> f64 {
        libm::log(x)
    }
}

/// Search effort limit.
#[derive(Clone, Copy, PartialEq, Debug)]
pub enum SearchBudget {
    /// Maximum node count: expansions for the best-first search, visited
    /// states for depth-limited algorithms, iterations for MCTS. Fully
    /// deterministic.
    Nodes(u64),
    /// Wall-clock limit, checked once per iteration or interior node.
    #[cfg(feature = "std")]
    WallClock(core::time::Duration),
}

impl SearchBudget {
    /// Effectively unlimited node budget.
    pub fn unlimited() -> SearchBudget {
        SearchBudget::Nodes(u64::MAX)
    }
}

/// Mutable budget state threaded through one search call.
#[derive(Debug)]
pub(crate) struct BudgetTracker {
    node_limit: u64,
    pub nodes: u64,
    #[cfg(feature = "std")]
    deadline: Option<std::time::Instant>,
}

impl BudgetTracker {
    pub fn new(budget: SearchBudget) -> Result<BudgetTracker, SearchError> {
        match budget {
            SearchBudget::Nodes(0) => Err(SearchError::EmptyBudget),
            SearchBudget::Nodes(n) => Ok(BudgetTracker {
                node_limit: n,
                nodes: 0,
                #[cfg(feature = "std")]
                deadline: None,
            }),
            #[cfg(feature = "std")]
            SearchBudget::WallClock(d) => {
                if d.is_zero() {
                    return Err(SearchError::EmptyBudget);
                }
                Ok(BudgetTracker {
                    node_limit: u64::MAX,
                    nodes: 0,
                    deadline: Some(std::time::Instant::now() + d),
                })
            }
        }
    }

    pub fn unlimited() -> BudgetTracker {
        BudgetTracker {
            node_limit: u64::MAX,
            nodes: 0,
            #[cfg(feature = "std")]
            deadline: None,
        }
    }

    #[inline]
    pub fn charge(&mut self, nodes: u64) {
        self.nodes += nodes;
    }

    /// Whether the budget has run out. The wall clock is only consulted
    /// here, so callers control the check frequency (once per iteration or
    /// interior node).
    #[inline]
    pub fn exhausted(&self) -> bool {
        if self.nodes >= self.node_limit {
            return true;
        }
        #[cfg(feature = "std")]
        if let Some(deadline) = self.deadline {
            return std::time::Instant::now() >= deadline;
        }
        false
    }
}

#[derive(Clone, PartialEq, Debug)]
pub enum SearchError {
    /// Search from a terminal state is meaningless.
    TerminalRoot,
    /// Budget of zero nodes or zero time.
    EmptyBudget,
    /// The game lacks a capability the algorithm needs (e.g. out-of-turn
    /// application for best-reply search).
    MissingCapability(String),
    /// An evaluator handed to `mcts_h` produced a component outside [0, 1];
    /// the string encodes the offending state.
    EvaluatorRange {
        state: String,
        player: PlayerId,
        value: f64,
    },
    /// Internal signal: the budget ran out mid-search. Only surfaces from
    /// entry points where partial results cannot be returned.
    BudgetExhausted,
    Game(GameError),
}

impl fmt::Display for SearchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchError::TerminalRoot => write!(f, "cannot search from a terminal state"),
            SearchError::EmptyBudget => write!(f, "search budget is empty"),
            SearchError::MissingCapability(m) => write!(f, "missing capability: {m}"),
            SearchError::EvaluatorRange {
                state,
                player,
                value,
            } => write!(
                f,
                "evaluator component {player} = {value} is outside [0, 1] on state '{state}'"
            ),
            SearchError::BudgetExhausted => write!(f, "budget exhausted"),
            SearchError::Game(e) => write!(f, "{e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for SearchError {}

impl From<GameError> for SearchError {
    fn from(e: GameError) -> SearchError {
        SearchError::Game(e)
    }
}

/// Final move selection rule for the best-first search.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DecisionPolicy {
    /// Highest (completion, value) for the mover, lexicographically.
    Best,
    /// Highest (completion, visits, value): prefers well-explored lines
    /// among equally completed ones.
    Safe,
}

/// Parsed algorithm identifier, as used in harness configs and the CLI.
#[derive(Clone, Copy, PartialEq, Debug)]
pub enum AlgorithmId {
    /// `umaxn` / `umaxn-safe`
    UnboundedMaxn { safe: bool },
    /// `maxn`
    MaxnDepth,
    /// `kbest:<k>`
    KBest { k: u16 },
    /// `paranoid`
    Paranoid,
    /// `brs`
    Brs,
    /// `brs+`
    BrsPlus,
    /// `mcts:<C>`
    Mcts { c: f64 },
    /// `mctsh:<C>`
    MctsH { c: f64 },
    /// `random`: uniform legal action, for baselines and tests.
    Random,
}

impl AlgorithmId {
    /// Parse an identifier. Exploration constants accept plain floats and
    /// the forms `sqrt2`, `sqrt2/2`, `sqrt2/4`, ...
    pub fn parse(text: &str) -> Result<AlgorithmId, String> {
        match text {
            "umaxn" => return Ok(AlgorithmId::UnboundedMaxn { safe: false }),
            "umaxn-safe" => return Ok(AlgorithmId::UnboundedMaxn { safe: true }),
            "maxn" => return Ok(AlgorithmId::MaxnDepth),
            "paranoid" => return Ok(AlgorithmId::Paranoid),
            "brs" => return Ok(AlgorithmId::Brs),
            "brs+" => return Ok(AlgorithmId::BrsPlus),
            "random" => return Ok(AlgorithmId::Random),
            _ => {}
        }
        if let Some(k) = text.strip_prefix("kbest:") {
            let k: u16 = k
                .parse()
                .map_err(|_| alloc::format!("bad k in '{text}'"))?;
            if k == 0 {
                return Err("k must be at least 1".to_string());
            }
            return Ok(AlgorithmId::KBest { k });
        }
        if let Some(c) = text.strip_prefix("mcts:") {
            return Ok(AlgorithmId::Mcts {
                c: parse_exploration(c)?,
            });
        }
        if let Some(c) = text.strip_prefix("mctsh:") {
            return Ok(AlgorithmId::MctsH {
                c: parse_exploration(c)?,
            });
        }
        Err(alloc::format!("unknown algorithm '{text}'"))
    }
}

fn parse_exploration(text: &str) -> Result<f64, String> {
    let value = if let Some(rest) = text.strip_prefix("sqrt2") {
        let num = fmath::sqrt(2.0);
        if rest.is_empty() {
            num
        } else if let Some(den) = rest.strip_prefix('/') {
            let d: f64 = den
                .parse()
                .map_err(|_| alloc::format!("bad denominator '{den}'"))?;
            num / d
        } else {
            return Err(alloc::format!("bad exploration constant '{text}'"));
        }
    } else {
        text.parse::<f64>()
            .map_err(|_| alloc::format!("bad exploration constant '{text}'"))?
    };
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(alloc::format!("exploration constant must be finite and non-negative"))
    }
}

impl fmt::Display for AlgorithmId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgorithmId::UnboundedMaxn { safe: false } => write!(f, "umaxn"),
            AlgorithmId::UnboundedMaxn { safe: true } => write!(f, "umaxn-safe"),
            AlgorithmId::MaxnDepth => write!(f, "maxn"),
            AlgorithmId::KBest { k } => write!(f, "kbest:{k}"),
            AlgorithmId::Paranoid => write!(f, "paranoid"),
            AlgorithmId::Brs => write!(f, "brs"),
            AlgorithmId::BrsPlus => write!(f, "brs+"),
            AlgorithmId::Mcts { c } => write!(f, "mcts:{c}"),
            AlgorithmId::MctsH { c } => write!(f, "mctsh:{c}"),
            AlgorithmId::Random => write!(f, "random"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algorithm_ids_roundtrip() {
        for text in ["umaxn", "umaxn-safe", "maxn", "kbest:6", "paranoid", "brs", "brs+", "random"] {
            let id = AlgorithmId::parse(text).unwrap();
            assert_eq!(id.to_string(), text);
        }
        assert_eq!(
            AlgorithmId::parse("mcts:sqrt2/4").unwrap(),
            AlgorithmId::Mcts {
                c: fmath::sqrt(2.0) / 4.0
            }
        );
        assert!(AlgorithmId::parse("minimax").is_err());
        assert!(AlgorithmId::parse("kbest:0").is_err());
        assert!(AlgorithmId::parse("mcts:-1").is_err());
    }
}
