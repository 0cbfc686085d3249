//! Paranoid reduction: the root player maximizes its own payoff component
//! while every other player is assumed to minimize it, which collapses the
//! game to a two-sided zero-sum search amenable to alpha-beta pruning.
//!
//! Pruning makes leaf order data-dependent, so leaves are evaluated one at
//! a time rather than batched. No transposition table is used; the result
//! is bit-identical to the pruning-free reference.

use crate::eval::Evaluator;
use crate::game::Game;
use crate::payoff::PlayerId;
use crate::search::depth::DepthResult;
use crate::search::{BudgetTracker, SearchBudget, SearchError};

/// Result of a search that optimizes a single scalar component.
#[derive(Clone, Debug)]
pub struct ScalarResult<A> {
    /// Root value of the root player's component.
    pub value: f64,
    pub chosen_ordinal: u16,
    pub chosen: A,
    /// Materialized states.
    pub nodes: u64,
}

impl<A: Copy> ScalarResult<A> {
    pub(crate) fn into_depth_result(self, players: usize, root: PlayerId) -> DepthResult<A> {
        let mut value = crate::payoff::PayoffVector::zeros(players);
        value.set(root, self.value);
        DepthResult {
            value,
            chosen_ordinal: self.chosen_ordinal,
            chosen: self.chosen,
            nodes: self.nodes,
            exact: false,
        }
    }
}

struct Ctx<'a, G: Game, E: Evaluator<G>> {
    game: &'a G,
    evaluator: &'a E,
    root_player: PlayerId,
    tracker: &'a mut BudgetTracker,
}

fn rec<G: Game, E: Evaluator<G>>(
    ctx: &mut Ctx<'_, G, E>,
    state: &G::State,
    depth: u32,
    mut alpha: f64,
    mut beta: f64,
) -> Result<f64, SearchError> {
    if ctx.game.is_terminal(state) {
        return Ok(ctx.game.terminal_payoff(state)?[ctx.root_player]);
    }
    if depth == 0 {
        return Ok(ctx.evaluator.evaluate(ctx.game, state)[ctx.root_player]);
    }
    if ctx.tracker.exhausted() {
        return Err(SearchError::BudgetExhausted);
    }
    let maximizing = ctx.game.current_player(state)? == ctx.root_player;
    let actions = ctx.game.legal_actions(state)?;
    let mut best = if maximizing { f64::MIN } else { f64::MAX };
    for &a in &actions {
        let child = ctx.game.apply(state, a)?;
        ctx.tracker.charge(1);
        let v = rec(ctx, &child, depth - 1, alpha, beta)?;
        if maximizing {
            if v > best {
                best = v;
                alpha = alpha.max(best);
            }
            if alpha >= beta {
                break;
            }
        } else {
            if v < best {
                best = v;
                beta = beta.min(best);
            }
            if beta <= alpha {
                break;
            }
        }
    }
    Ok(best)
}

/// Fixed-depth paranoid alpha-beta from the current player's point of view.
pub fn paranoid<G: Game, E: Evaluator<G>>(
    game: &G,
    evaluator: &E,
    state: &G::State,
    depth: u32,
    budget: SearchBudget,
) -> Result<ScalarResult<G::Action>, SearchError> {
    let mut tracker = BudgetTracker::new(budget)?;
    paranoid_tracked(game, evaluator, state, depth, &mut tracker)
}

pub(crate) fn paranoid_tracked<G: Game, E: Evaluator<G>>(
    game: &G,
    evaluator: &E,
    state: &G::State,
    depth: u32,
    tracker: &mut BudgetTracker,
) -> Result<ScalarResult<G::Action>, SearchError> {
    if game.is_terminal(state) {
        return Err(SearchError::TerminalRoot);
    }
    if depth == 0 {
        return Err(SearchError::Game(crate::game::GameError::BadConfig(
            alloc::format!("search depth must be at least 1"),
        )));
    }
    let root_player = game.current_player(state)?;
    let mut ctx = Ctx {
        game,
        evaluator,
        root_player,
        tracker,
    };
    ctx.tracker.charge(1);
    let actions = game.legal_actions(state)?;
    let mut alpha = f64::MIN;
    let mut best = f64::MIN;
    let mut chosen = 0u16;
    for (i, &a) in actions.iter().enumerate() {
        let child = game.apply(state, a)?;
        ctx.tracker.charge(1);
        let v = rec(&mut ctx, &child, depth - 1, alpha, f64::MAX)?;
        if v > best {
            best = v;
            chosen = i as u16;
            alpha = alpha.max(best);
        }
    }
    Ok(ScalarResult {
        value: best,
        chosen_ordinal: chosen,
        chosen: actions[chosen as usize],
        nodes: ctx.tracker.nodes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::builtin_heuristic;
    use crate::games::TriNim;
    use crate::oracle::solve_paranoid;

    /// Plain minimax on the root component, no pruning.
    fn reference<G: Game, E: Evaluator<G>>(
        game: &G,
        evaluator: &E,
        state: &G::State,
        depth: u32,
        root: PlayerId,
    ) -> f64 {
        if game.is_terminal(state) {
            return game.terminal_payoff(state).unwrap()[root];
        }
        if depth == 0 {
            return evaluator.evaluate(game, state)[root];
        }
        let maximizing = game.current_player(state).unwrap() == root;
        let mut best = if maximizing { f64::MIN } else { f64::MAX };
        for a in game.legal_actions(state).unwrap() {
            let v = reference(game, evaluator, &game.apply(state, a).unwrap(), depth - 1, root);
            if (maximizing && v > best) || (!maximizing && v < best) {
                best = v;
            }
        }
        best
    }

    #[test]
    fn pruning_preserves_value_and_action() {
        let game = TriNim::new(&[3, 2]).unwrap();
        let eval = builtin_heuristic(&game);
        let mut state = game.initial_state();
        let mut guard = 0;
        while !game.is_terminal(&state) {
            for depth in 1..5 {
                let root = game.current_player(&state).unwrap();
                let got =
                    paranoid(&game, &eval, &state, depth, SearchBudget::unlimited()).unwrap();
                // Reference root: plain minimax over each child, strict
                // improvement keeps the lowest ordinal.
                let mut want = f64::MIN;
                let mut want_ordinal = 0u16;
                for (i, a) in game.legal_actions(&state).unwrap().into_iter().enumerate() {
                    let child = game.apply(&state, a).unwrap();
                    let v = reference(&game, &eval, &child, depth - 1, root);
                    if v > want {
                        want = v;
                        want_ordinal = i as u16;
                    }
                }
                assert_eq!(got.value, want, "depth {depth} state {state:?}");
                assert_eq!(got.chosen_ordinal, want_ordinal, "depth {depth} state {state:?}");
            }
            let a = game.legal_actions(&state).unwrap()[0];
            state = game.apply(&state, a).unwrap();
            guard += 1;
            assert!(guard < 20);
        }
    }

    #[test]
    fn deep_search_agrees_with_the_exact_paranoid_solver() {
        let game = TriNim::new(&[2, 1]).unwrap();
        let root = game.initial_state();
        let p0 = PlayerId(0);
        let solved = solve_paranoid(&game, &root, p0, 1 << 16).unwrap();
        let entry = solved.get(game.zobrist_key(&root)).unwrap();
        let got = paranoid(
            &game,
            &crate::eval::ZeroEval,
            &root,
            16,
            SearchBudget::unlimited(),
        )
        .unwrap();
        assert_eq!(got.value, entry.value);
        assert_eq!(Some(got.chosen_ordinal), entry.best);
    }
}
