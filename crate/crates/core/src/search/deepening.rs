//! Iterative deepening driver for the depth-limited algorithms.
//!
//! Depth 1 always runs to completion so a legal decision exists even under
//! tiny budgets; deeper iterations share one budget tracker and abort
//! cleanly when it runs out, falling back to the deepest completed depth.

use crate::eval::Evaluator;
use crate::game::Game;
use crate::payoff::PayoffVector;
use crate::search::depth::{kbest_maxn_tracked, maxn_depth_tracked, DepthResult};
use crate::search::{brs, paranoid, BudgetTracker, SearchBudget, SearchError};

/// Which depth-limited algorithm to deepen.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DepthAlgorithm {
    Maxn,
    KBest(u16),
    Paranoid,
    Brs,
    BrsPlus,
}

#[derive(Clone, Debug)]
pub struct IterativeResult<A> {
    pub chosen_ordinal: u16,
    pub chosen: A,
    /// Deepest fully completed depth.
    pub depth: u32,
    /// Total nodes across all depths.
    pub nodes: u64,
    /// Root value. Scalar algorithms put their value in the root player's
    /// component and zeros elsewhere.
    pub value: PayoffVector,
    /// The final depth proved exact, so deeper runs were skipped.
    pub exact: bool,
}

fn run_once<G: Game, E: Evaluator<G>>(
    game: &G,
    evaluator: &E,
    state: &G::State,
    algorithm: DepthAlgorithm,
    depth: u32,
    tracker: &mut BudgetTracker,
) -> Result<DepthResult<G::Action>, SearchError> {
    match algorithm {
        DepthAlgorithm::Maxn => maxn_depth_tracked(game, evaluator, state, depth, tracker),
        DepthAlgorithm::KBest(k) => {
            kbest_maxn_tracked(game, evaluator, state, depth, k, tracker)
        }
        DepthAlgorithm::Paranoid => {
            let root = game.current_player(state)?;
            paranoid::paranoid_tracked(game, evaluator, state, depth, tracker)
                .map(|r| r.into_depth_result(game.player_count(), root))
        }
        DepthAlgorithm::Brs => {
            let root = game.current_player(state)?;
            brs::brs_tracked(game, evaluator, state, depth, tracker)
                .map(|r| r.into_depth_result(game.player_count(), root))
        }
        DepthAlgorithm::BrsPlus => {
            let root = game.current_player(state)?;
            brs::brs_plus_tracked(game, evaluator, state, depth, tracker)
                .map(|r| r.into_depth_result(game.player_count(), root))
        }
    }
}

/// Deepen `algorithm` from depth 1 until the budget or `max_depth` is hit.
pub fn iterative_deepening<G: Game, E: Evaluator<G>>(
    game: &G,
    evaluator: &E,
    state: &G::State,
    algorithm: DepthAlgorithm,
    budget: SearchBudget,
    max_depth: u32,
) -> Result<IterativeResult<G::Action>, SearchError> {
    let mut tracker = BudgetTracker::new(budget)?;
    // Depth 1 is exempt from budget checks: it is the minimum unit of work.
    let mut free = BudgetTracker::unlimited();
    let first = run_once(game, evaluator, state, algorithm, 1, &mut free)?;
    tracker.charge(free.nodes);
    let mut best = (first, 1u32);
    for depth in 2..=max_depth.max(1) {
        if best.0.exact || tracker.exhausted() {
            break;
        }
        match run_once(game, evaluator, state, algorithm, depth, &mut tracker) {
            Ok(result) => best = (result, depth),
            Err(SearchError::BudgetExhausted) => break,
            Err(e) => return Err(e),
        }
    }
    let (result, depth) = best;
    Ok(IterativeResult {
        chosen_ordinal: result.chosen_ordinal,
        chosen: result.chosen,
        depth,
        nodes: tracker.nodes,
        value: result.value,
        exact: result.exact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::builtin_heuristic;
    use crate::eval::ZeroEval;
    use crate::games::TriNim;
    use crate::search::depth::maxn_depth;

    #[test]
    fn tiny_budget_still_completes_depth_one() {
        let game = TriNim::new(&[5, 5]).unwrap();
        let root = game.initial_state();
        let result = iterative_deepening(
            &game,
            &ZeroEval,
            &root,
            DepthAlgorithm::Maxn,
            SearchBudget::Nodes(1),
            16,
        )
        .unwrap();
        assert_eq!(result.depth, 1);
    }

    #[test]
    fn budget_for_three_depths_returns_the_depth_three_action() {
        let game = TriNim::new(&[3, 2]).unwrap();
        let eval = builtin_heuristic(&game);
        let root = game.initial_state();
        let mut budget = 0u64;
        for depth in 1..=3 {
            let r = maxn_depth(&game, &eval, &root, depth, SearchBudget::unlimited()).unwrap();
            budget += r.nodes;
        }
        let result = iterative_deepening(
            &game,
            &eval,
            &root,
            DepthAlgorithm::Maxn,
            SearchBudget::Nodes(budget),
            16,
        )
        .unwrap();
        assert_eq!(result.depth, 3);
        let want = maxn_depth(&game, &eval, &root, 3, SearchBudget::unlimited()).unwrap();
        assert_eq!(result.chosen_ordinal, want.chosen_ordinal);
        assert_eq!(result.value, want.value);
    }

    #[test]
    fn exact_search_stops_deepening_early() {
        let game = TriNim::new(&[2]).unwrap();
        let root = game.initial_state();
        let result = iterative_deepening(
            &game,
            &ZeroEval,
            &root,
            DepthAlgorithm::Maxn,
            SearchBudget::unlimited(),
            1000,
        )
        .unwrap();
        assert!(result.exact);
        assert!(result.depth <= 3);
    }

    #[test]
    fn scalar_algorithms_deepen_too() {
        let game = TriNim::new(&[2, 1]).unwrap();
        let eval = builtin_heuristic(&game);
        let root = game.initial_state();
        for algorithm in [
            DepthAlgorithm::Paranoid,
            DepthAlgorithm::Brs,
            DepthAlgorithm::BrsPlus,
        ] {
            let result = iterative_deepening(
                &game,
                &eval,
                &root,
                algorithm,
                SearchBudget::Nodes(10_000),
                8,
            )
            .unwrap();
            assert!(result.depth >= 1, "{algorithm:?}");
        }
    }
}
