//! Best-first unbounded max^n search with completion vectors.
//!
//! Each iteration descends from the root along the most promising
//! unresolved edges, expands the first state missing from the table, and
//! backs the refreshed (completion, value) pair up the descent path.
//! Terminal children are resolved the moment their parent is expanded, so
//! descent never steps into a terminal state. An edge becomes resolved
//! when its best child line is itself resolved as a win for the child's
//! mover, or when every action below has been resolved; resolved edges are
//! never descended again, which makes resolution permanent. The search
//! stops early once every root action is resolved, at which point the root
//! completion vectors equal the exact max^n solution of the game.

use alloc::vec::Vec;

use crate::eval::Evaluator;
use crate::game::{Game, GameError};
use crate::payoff::PayoffVector;
use crate::search::tt::{EdgeStats, StoredState, TranspositionTable};
use crate::search::{BudgetTracker, DecisionPolicy, SearchBudget, SearchError};
use crate::zobrist::ZobristKey;

/// What a single iteration did.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct StepReport {
    /// Key of the state expanded this iteration, if any. `None` means the
    /// descent ended in a fully resolved interior state (backup still ran)
    /// or the table refused the insert.
    pub expanded: Option<ZobristKey>,
    /// Length of the descent path in edges.
    pub path_len: usize,
    /// The table was full and the expansion was dropped; the caller should
    /// stop iterating.
    pub table_full: bool,
}

/// Per-root-action statistics in the final result.
#[derive(Clone, Debug)]
pub struct ActionStats<A> {
    pub ordinal: u16,
    pub action: A,
    pub completion: PayoffVector,
    pub value: PayoffVector,
    pub visits: u64,
    pub resolved: bool,
}

/// Outcome of a search run.
#[derive(Clone, Debug)]
pub struct SearchResult<A> {
    pub chosen_ordinal: u16,
    pub chosen: A,
    /// Stats per root action, in canonical action order.
    pub root: Vec<ActionStats<A>>,
    /// Expansions performed (the node budget unit).
    pub expansions: u64,
    pub iterations: u64,
    /// Every root action is resolved: the root stats are exact.
    pub root_resolved: bool,
}

/// Incremental best-first max^n search.
///
/// [`run`](Self::run) drives it to a budget; [`step`](Self::step) exposes
/// single iterations so callers can interleave inspection with search.
pub struct UnboundedMaxn<'a, G: Game, E: Evaluator<G>> {
    game: &'a G,
    evaluator: &'a E,
    root: G::State,
    root_key: ZobristKey,
    table: TranspositionTable,
    expansions: u64,
    iterations: u64,
}

/// Default bound on stored states.
pub const DEFAULT_TABLE_CAPACITY: usize = 1 << 22;

impl<'a, G: Game, E: Evaluator<G>> UnboundedMaxn<'a, G, E> {
    pub fn new(game: &'a G, evaluator: &'a E, root: G::State) -> Result<Self, SearchError> {
        Self::with_capacity(game, evaluator, root, DEFAULT_TABLE_CAPACITY)
    }

    pub fn with_capacity(
        game: &'a G,
        evaluator: &'a E,
        root: G::State,
        capacity: usize,
    ) -> Result<Self, SearchError> {
        if game.is_terminal(&root) {
            return Err(SearchError::TerminalRoot);
        }
        let root_key = game.zobrist_key(&root);
        Ok(UnboundedMaxn {
            game,
            evaluator,
            root,
            root_key,
            table: TranspositionTable::new(capacity.max(1)),
            expansions: 0,
            iterations: 0,
        })
    }

    pub fn table(&self) -> &TranspositionTable {
        &self.table
    }

    pub fn expansions(&self) -> u64 {
        self.expansions
    }

    pub fn iterations(&self) -> u64 {
        self.iterations
    }

    /// All root actions resolved; further iterations would be no-ops.
    pub fn root_resolved(&self) -> bool {
        self.table
            .get(self.root_key)
            .is_some_and(|s| s.all_resolved())
    }

    /// One descend / expand / backup iteration.
    pub fn step(&mut self) -> Result<StepReport, SearchError> {
        if self.root_resolved() {
            return Ok(StepReport {
                expanded: None,
                path_len: 0,
                table_full: false,
            });
        }
        self.iterations += 1;

        // Descend: follow best unresolved edges until we leave the table or
        // hit a state whose actions are all resolved.
        let mut path: Vec<(G::State, ZobristKey, usize)> = Vec::new();
        let mut state = self.root.clone();
        let mut key = self.root_key;
        loop {
            let Some(stored) = self.table.get(key) else {
                break;
            };
            let Some(pick) = stored.best_unresolved_edge() else {
                break;
            };
            let actions = self.game.legal_actions(&state)?;
            debug_assert_eq!(actions.len(), stored.edges.len());
            let next = self.game.apply(&state, actions[pick])?;
            path.push((state, key, pick));
            key = self.game.zobrist_key(&next);
            state = next;
        }

        // Expand the leaf unless it is already stored (fully resolved
        // interior state) or terminal. Terminal leaves cannot be reached by
        // descent, but guard anyway.
        let mut expanded = None;
        let mut table_full = false;
        if self.table.get(key).is_none() && !self.game.is_terminal(&state) {
            let entry = self.expand(&state)?;
            if self.table.insert(key, entry) {
                self.expansions += 1;
                expanded = Some(key);
            } else {
                table_full = true;
            }
        }

        // Backup, deepest edge first. The child of each path entry is the
        // next entry's state, or the descent leaf for the last one.
        let mut child_key = key;
        for (parent_state, parent_key, pick) in path.iter().rev() {
            let (best_value, best_completion, resolved) = {
                let child = self
                    .table
                    .get(child_key)
                    .expect("descent children are stored");
                let b = child.best_edge();
                let e = &child.edges[b];
                (
                    e.value,
                    e.completion,
                    (e.resolved && e.completion[child.mover] == 1.0) || child.all_resolved(),
                )
            };
            let parent = self
                .table
                .get_mut(*parent_key)
                .expect("descent path is stored");
            let edge = &mut parent.edges[*pick];
            edge.visits += 1;
            edge.value = best_value;
            edge.completion = best_completion;
            edge.resolved = resolved;
            let _ = parent_state;
            child_key = *parent_key;
        }

        Ok(StepReport {
            expanded,
            path_len: path.len(),
            table_full,
        })
    }

    fn expand(&self, state: &G::State) -> Result<StoredState, SearchError> {
        let mover = self.game.current_player(state)?;
        let actions = self.game.legal_actions(state)?;
        if actions.is_empty() {
            return Err(SearchError::Game(GameError::IllegalAction(
                alloc::format!("non-terminal state with no legal actions"),
            )));
        }
        let players = self.game.player_count();
        let mut edges: Vec<Option<EdgeStats>> = alloc::vec![None; actions.len()];
        let mut pending: Vec<(usize, G::State)> = Vec::new();
        for (i, &a) in actions.iter().enumerate() {
            let child = self.game.apply(state, a)?;
            if self.game.is_terminal(&child) {
                edges[i] = Some(EdgeStats {
                    completion: self.game.win_loss_vector(&child)?,
                    value: self.game.terminal_payoff(&child)?,
                    visits: 0,
                    resolved: true,
                });
            } else {
                pending.push((i, child));
            }
        }
        if !pending.is_empty() {
            let states: Vec<&G::State> = pending.iter().map(|(_, s)| s).collect();
            let values = self.evaluator.evaluate_batch(self.game, &states);
            debug_assert_eq!(values.len(), pending.len());
            for ((i, _), value) in pending.iter().zip(values) {
                edges[*i] = Some(EdgeStats {
                    completion: PayoffVector::zeros(players),
                    value,
                    visits: 0,
                    resolved: false,
                });
            }
        }
        Ok(StoredState {
            mover,
            edges: edges.into_iter().map(|e| e.unwrap()).collect(),
        })
    }

    /// Iterate until the budget is exhausted, the root is resolved, or the
    /// table fills up, then pick a move.
    pub fn run(
        &mut self,
        budget: SearchBudget,
        policy: DecisionPolicy,
    ) -> Result<SearchResult<G::Action>, SearchError> {
        let mut tracker = BudgetTracker::new(budget)?;
        loop {
            if self.root_resolved() {
                break;
            }
            tracker.nodes = self.expansions;
            if tracker.exhausted() {
                break;
            }
            let report = self.step()?;
            if report.table_full {
                break;
            }
        }
        if self.table.get(self.root_key).is_none() {
            // Nothing expanded: budget allowed zero expansions. Force one
            // iteration so a decision exists; the root expansion is the
            // minimum unit of work.
            self.step()?;
        }
        self.result(policy)
    }

    /// Decision and per-action stats from the current table.
    pub fn result(&self, policy: DecisionPolicy) -> Result<SearchResult<G::Action>, SearchError> {
        let stored = self
            .table
            .get(self.root_key)
            .expect("root expanded before result");
        let actions = self.game.legal_actions(&self.root)?;
        let root: Vec<ActionStats<G::Action>> = stored
            .edges
            .iter()
            .zip(actions.iter())
            .enumerate()
            .map(|(i, (e, &a))| ActionStats {
                ordinal: i as u16,
                action: a,
                completion: e.completion,
                value: e.value,
                visits: e.visits,
                resolved: e.resolved,
            })
            .collect();
        let p = stored.mover;
        let mut pick = 0usize;
        for (i, e) in root.iter().enumerate().skip(1) {
            let b = &root[pick];
            let better = match policy {
                DecisionPolicy::Best => {
                    (e.completion[p], e.value[p]) > (b.completion[p], b.value[p])
                }
                DecisionPolicy::Safe => {
                    (e.completion[p], e.visits as f64, e.value[p])
                        > (b.completion[p], b.visits as f64, b.value[p])
                }
            };
            if better {
                pick = i;
            }
        }
        Ok(SearchResult {
            chosen_ordinal: root[pick].ordinal,
            chosen: root[pick].action,
            root,
            expansions: self.expansions,
            iterations: self.iterations,
            root_resolved: stored.all_resolved(),
        })
    }
}

/// One-shot convenience wrapper around [`UnboundedMaxn`].
pub fn unbounded_maxn<G: Game, E: Evaluator<G>>(
    game: &G,
    evaluator: &E,
    root: &G::State,
    budget: SearchBudget,
    policy: DecisionPolicy,
) -> Result<SearchResult<G::Action>, SearchError> {
    UnboundedMaxn::new(game, evaluator, root.clone())?.run(budget, policy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::ZeroEval;
    use crate::games::{Bandit, TriNim};
    use crate::oracle::solve_maxn;
    use crate::payoff::{PayoffVector, PlayerId};

    fn pv(vals: &[f64]) -> PayoffVector {
        PayoffVector::new(vals)
    }

    #[test]
    fn resolves_single_heap_nim_exactly() {
        let game = TriNim::new(&[4]).unwrap();
        let root = game.initial_state();
        let mut search = UnboundedMaxn::new(&game, &ZeroEval, root.clone()).unwrap();
        let result = search
            .run(SearchBudget::unlimited(), DecisionPolicy::Best)
            .unwrap();
        assert!(result.root_resolved);

        // The exact solver says player 2 wins heaps=[4]; both take-1 and
        // take-2 keep the win, so the tie-break picks take-1 (ordinal 0).
        let oracle = solve_maxn(&game, &root, 1 << 16).unwrap();
        assert_eq!(oracle.value_of(&game, &root).unwrap(), pv(&[-1.0, -1.0, 1.0]));
        for stats in &result.root {
            let child = game.apply(&root, stats.action).unwrap();
            let child_value = oracle.value_of(&game, &child).unwrap();
            assert!(stats.resolved);
            assert_eq!(stats.completion, child_value);
            assert_eq!(stats.value, child_value);
        }
        assert_eq!(result.chosen_ordinal, 0);
    }

    #[test]
    fn bandit_root_is_resolved_after_one_expansion_per_arm() {
        let arms = alloc::vec![
            pv(&[0.2, 0.1, 0.0]),
            pv(&[0.9, -0.3, 0.1]),
            pv(&[0.4, 0.4, 0.4]),
        ];
        let game = Bandit::new(3, arms).unwrap();
        let mut search = UnboundedMaxn::new(&game, &ZeroEval, game.initial_state()).unwrap();
        let result = search
            .run(SearchBudget::Nodes(1), DecisionPolicy::Best)
            .unwrap();
        // All children are terminal, so the single root expansion resolves
        // everything.
        assert_eq!(result.expansions, 1);
        assert!(result.root_resolved);
        assert_eq!(result.chosen_ordinal, 1);
        assert_eq!(result.root[1].value, pv(&[0.9, -0.3, 0.1]));
        assert_eq!(result.root[1].completion, pv(&[1.0, -1.0, -1.0]));
    }

    #[test]
    fn safe_policy_breaks_completion_ties_by_visits() {
        let game = TriNim::new(&[2, 2]).unwrap();
        let root = game.initial_state();
        let mut search = UnboundedMaxn::new(&game, &ZeroEval, root).unwrap();
        let result = search
            .run(SearchBudget::unlimited(), DecisionPolicy::Safe)
            .unwrap();
        assert!(result.root_resolved);
        let best = result.root.iter().map(|s| s.completion[PlayerId(0)]).fold(f64::MIN, f64::max);
        let chosen = &result.root[result.chosen_ordinal as usize];
        assert_eq!(chosen.completion[PlayerId(0)], best);
        for s in &result.root {
            if s.completion[PlayerId(0)] == best && s.ordinal != chosen.ordinal {
                assert!(
                    (chosen.visits, chosen.ordinal) >= (s.visits, s.ordinal),
                    "safe pick must dominate by visits"
                );
            }
        }
    }

    #[test]
    fn zero_node_budget_is_rejected() {
        let game = TriNim::new(&[1]).unwrap();
        let err = unbounded_maxn(
            &game,
            &ZeroEval,
            &game.initial_state(),
            SearchBudget::Nodes(0),
            DecisionPolicy::Best,
        )
        .unwrap_err();
        assert_eq!(err, SearchError::EmptyBudget);
    }

    #[test]
    fn terminal_root_is_rejected() {
        let game = Bandit::new(2, alloc::vec![pv(&[1.0, -1.0])]).unwrap();
        let root = game.initial_state();
        let pulled = game
            .apply(&root, crate::games::BanditAction(0))
            .unwrap();
        match UnboundedMaxn::new(&game, &ZeroEval, pulled) {
            Err(e) => assert_eq!(e, SearchError::TerminalRoot),
            Ok(_) => panic!("terminal root accepted"),
        }
    }
}
