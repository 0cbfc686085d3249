//! Agent specifications and the single-move decision procedure.
//!
//! An agent is an algorithm identifier, an evaluator variant, and a budget.
//! [`choose_action`] runs one search and reports the chosen action ordinal
//! plus the nodes actually spent, which the match record keeps for replay
//! and cost accounting.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};
use std::time::Duration;

use maxn_core::eval::{
    calibrate_bounds, normalize, BuiltinEval, CalibrationPolicy, HeuristicGame,
    NormalizationBounds,
};
use maxn_core::search::{
    iterative_deepening, mcts, mcts_h, unbounded_maxn, AlgorithmId, DecisionPolicy,
    DepthAlgorithm, MctsParams, SearchBudget,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::protocol::{mix64, stable_hash};

/// Depth limit for iterative deepening; budgets bite long before this.
pub const DEPTH_CAP: u32 = 64;

/// Self-play matches used to calibrate normalization bounds per (game,
/// variant) pair.
pub const CALIBRATION_SAMPLES: u32 = 256;

/// Per-move search budget.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BudgetSpec {
    /// Node (or iteration) limit.
    Nodes(u64),
    /// Wall-clock limit in milliseconds.
    Millis(u64),
}

impl BudgetSpec {
    pub fn to_search(self) -> SearchBudget {
        match self {
            BudgetSpec::Nodes(n) => SearchBudget::Nodes(n),
            BudgetSpec::Millis(ms) => SearchBudget::WallClock(Duration::from_millis(ms)),
        }
    }

    /// Short text form used inside agent identifiers: `n5000`, `t100ms`.
    pub fn id_text(self) -> String {
        match self {
            BudgetSpec::Nodes(n) => format!("n{n}"),
            BudgetSpec::Millis(ms) => format!("t{ms}ms"),
        }
    }
}

/// A fully specified playing agent.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct AgentSpec {
    pub algorithm: AlgorithmId,
    /// Evaluator family member; 0 is the base weight set.
    pub variant: u32,
    pub budget: BudgetSpec,
}

impl AgentSpec {
    /// Stable identifier recorded in match logs, e.g. `umaxn-safe@v2+n5000`.
    pub fn id_text(&self) -> String {
        format!("{}@v{}+{}", self.algorithm, self.variant, self.budget.id_text())
    }
}

/// Outcome of one decision.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Choice {
    pub ordinal: u16,
    /// Nodes, expansions or iterations spent, per the algorithm's unit.
    pub nodes: u64,
}

type BoundsKey = (String, u64, u32);

/// Normalization bounds for `(game, variant)`, calibrated once per process.
///
/// The cache key includes the initial-state Zobrist key so that two
/// parameterizations of the same rule set calibrate separately.
pub fn bounds_for<G: HeuristicGame>(game: &G, variant: u32) -> Result<NormalizationBounds, String> {
    static CACHE: OnceLock<Mutex<HashMap<BoundsKey, NormalizationBounds>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let zobrist = game.zobrist_key(&game.initial_state()).0;
    let key = (game.name().to_string(), zobrist, variant);
    if let Some(b) = cache.lock().unwrap().get(&key) {
        return Ok(*b);
    }
    let evaluator = BuiltinEval::new(game, variant);
    let seed = mix64(stable_hash(game.name()) ^ zobrist ^ variant as u64);
    let bounds = calibrate_bounds(
        &evaluator,
        game,
        CalibrationPolicy::Random,
        CALIBRATION_SAMPLES,
        seed,
    )
    .map_err(|e| format!("calibration: {e}"))?;
    cache.lock().unwrap().insert(key, bounds);
    Ok(bounds)
}

fn depth_algorithm(id: AlgorithmId) -> Option<DepthAlgorithm> {
    match id {
        AlgorithmId::MaxnDepth => Some(DepthAlgorithm::Maxn),
        AlgorithmId::KBest { k } => Some(DepthAlgorithm::KBest(k)),
        AlgorithmId::Paranoid => Some(DepthAlgorithm::Paranoid),
        AlgorithmId::Brs => Some(DepthAlgorithm::Brs),
        AlgorithmId::BrsPlus => Some(DepthAlgorithm::BrsPlus),
        _ => None,
    }
}

/// Pick an action for the mover of `state`.
///
/// `move_seed` drives every stochastic part of the decision (random agent,
/// MCTS playouts), so a match replays bit-identically from its seeds. Errors
/// are returned as text; the caller scores them as a forfeit.
pub fn choose_action<G: HeuristicGame>(
    game: &G,
    spec: &AgentSpec,
    state: &G::State,
    move_seed: u64,
) -> Result<Choice, String> {
    let fail = |e: maxn_core::search::SearchError| format!("{}: {e}", spec.algorithm);
    let budget = spec.budget.to_search();
    match spec.algorithm {
        AlgorithmId::Random => {
            let actions = game
                .legal_actions(state)
                .map_err(|e| format!("random: {e}"))?;
            if actions.is_empty() {
                return Err("random: no legal actions".to_string());
            }
            let mut rng = ChaCha8Rng::seed_from_u64(move_seed);
            let ordinal = rng.gen_range(0..actions.len()) as u16;
            Ok(Choice { ordinal, nodes: 0 })
        }
        AlgorithmId::UnboundedMaxn { safe } => {
            let evaluator = BuiltinEval::new(game, spec.variant);
            let policy = if safe {
                DecisionPolicy::Safe
            } else {
                DecisionPolicy::Best
            };
            let r = unbounded_maxn(game, &evaluator, state, budget, policy).map_err(fail)?;
            Ok(Choice {
                ordinal: r.chosen_ordinal,
                nodes: r.expansions,
            })
        }
        AlgorithmId::Mcts { c } => {
            let params = MctsParams {
                exploration: c,
                seed: move_seed,
            };
            let r = mcts(game, state, params, budget).map_err(fail)?;
            Ok(Choice {
                ordinal: r.chosen_ordinal,
                nodes: r.iterations,
            })
        }
        AlgorithmId::MctsH { c } => {
            let bounds = bounds_for(game, spec.variant)
                .map_err(|e| format!("{}: {e}", spec.algorithm))?;
            let evaluator = normalize(BuiltinEval::new(game, spec.variant), bounds);
            let params = MctsParams {
                exploration: c,
                seed: move_seed,
            };
            let r = mcts_h(game, &evaluator, state, params, budget).map_err(fail)?;
            Ok(Choice {
                ordinal: r.chosen_ordinal,
                nodes: r.iterations,
            })
        }
        other => {
            let algorithm = depth_algorithm(other).expect("remaining ids are depth algorithms");
            let evaluator = BuiltinEval::new(game, spec.variant);
            let r = iterative_deepening(game, &evaluator, state, algorithm, budget, DEPTH_CAP)
                .map_err(fail)?;
            Ok(Choice {
                ordinal: r.chosen_ordinal,
                nodes: r.nodes,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use maxn_core::games::{HeyFish, Threehex};
    use maxn_core::Game;

    fn spec(text: &str, budget: BudgetSpec) -> AgentSpec {
        AgentSpec {
            algorithm: AlgorithmId::parse(text).unwrap(),
            variant: 0,
            budget,
        }
    }

    #[test]
    fn every_algorithm_returns_a_legal_ordinal_on_threehex() {
        let game = Threehex::new(2).unwrap();
        let state = game.initial_state();
        let n = game.legal_actions(&state).unwrap().len() as u16;
        for text in [
            "umaxn",
            "umaxn-safe",
            "maxn",
            "kbest:2",
            "paranoid",
            "brs",
            "brs+",
            "mcts:sqrt2",
            "mctsh:sqrt2/4",
            "random",
        ] {
            let agent = spec(text, BudgetSpec::Nodes(200));
            let choice = choose_action(&game, &agent, &state, 7).unwrap();
            assert!(choice.ordinal < n, "{text} returned ordinal {}", choice.ordinal);
        }
    }

    #[test]
    fn brs_reports_the_missing_capability_instead_of_panicking() {
        let game = HeyFish::new(4, 4, 1, 11).unwrap();
        let state = game.initial_state();
        let agent = spec("brs", BudgetSpec::Nodes(200));
        let err = choose_action(&game, &agent, &state, 7).unwrap_err();
        assert!(err.contains("missing capability"), "got: {err}");
    }

    #[test]
    fn decisions_are_deterministic_in_the_move_seed() {
        let game = Threehex::new(2).unwrap();
        let state = game.initial_state();
        for text in ["random", "mcts:sqrt2", "mctsh:0.5"] {
            let agent = spec(text, BudgetSpec::Nodes(300));
            let a = choose_action(&game, &agent, &state, 41).unwrap();
            let b = choose_action(&game, &agent, &state, 41).unwrap();
            let c = choose_action(&game, &agent, &state, 42).unwrap();
            assert_eq!(a, b, "{text} not reproducible");
            // Different seeds usually differ; do not assert it, just touch c.
            let _ = c;
        }
    }

    #[test]
    fn budget_and_agent_identifiers_round_trip_the_text_forms() {
        assert_eq!(BudgetSpec::Nodes(5000).id_text(), "n5000");
        assert_eq!(BudgetSpec::Millis(100).id_text(), "t100ms");
        let agent = spec("umaxn-safe", BudgetSpec::Nodes(5000));
        assert_eq!(agent.id_text(), "umaxn-safe@v0+n5000");
        let json = serde_json::to_string(&BudgetSpec::Nodes(7)).unwrap();
        assert_eq!(json, r#"{"nodes":7}"#);
        let back: BudgetSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, BudgetSpec::Nodes(7));
    }
}
