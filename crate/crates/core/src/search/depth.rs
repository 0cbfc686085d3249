//! Depth-limited max^n and the k-best pruning variant.
//!
//! Both search to a fixed depth, evaluate the frontier with a single
//! batched evaluator call per interior node, and memoize values per
//! (state, remaining depth). The node budget counts materialized states,
//! so a given (game, depth) pair always costs the same number of nodes.

use alloc::vec::Vec;

use hashbrown::HashMap;

use crate::eval::Evaluator;
use crate::game::{Game, GameError};
use crate::payoff::PayoffVector;
use crate::search::{BudgetTracker, SearchBudget, SearchError};

/// Result of a depth-limited search.
#[derive(Clone, Debug)]
pub struct DepthResult<A> {
    pub value: PayoffVector,
    pub chosen_ordinal: u16,
    pub chosen: A,
    /// Materialized states.
    pub nodes: u64,
    /// True when no heuristic evaluation fed the result; the value is the
    /// exact max^n value and deeper searches cannot change it.
    pub exact: bool,
}

struct Ctx<'a, G: Game, E: Evaluator<G>> {
    game: &'a G,
    evaluator: &'a E,
    memo: HashMap<(u64, u32), (PayoffVector, u16)>,
    tracker: &'a mut BudgetTracker,
    frontier_evals: u64,
}

impl<'a, G: Game, E: Evaluator<G>> Ctx<'a, G, E> {
    /// Child values in ordinal order. Terminal children score `f_t`,
    /// non-terminal ones either recurse or, at depth 1, come from one
    /// batched frontier evaluation.
    fn child_values(
        &mut self,
        children: &[(G::State, bool)],
        depth: u32,
        recurse: impl Fn(&mut Self, &G::State, u32) -> Result<PayoffVector, SearchError>,
    ) -> Result<Vec<PayoffVector>, SearchError> {
        let mut values: Vec<Option<PayoffVector>> = alloc::vec![None; children.len()];
        let mut frontier: Vec<usize> = Vec::new();
        for (i, (child, terminal)) in children.iter().enumerate() {
            if *terminal {
                values[i] = Some(self.game.terminal_payoff(child)?);
            } else if depth == 1 {
                frontier.push(i);
            } else {
                values[i] = Some(recurse(self, child, depth - 1)?);
            }
        }
        if !frontier.is_empty() {
            let states: Vec<&G::State> = frontier.iter().map(|&i| &children[i].0).collect();
            let evals = self.evaluator.evaluate_batch(self.game, &states);
            self.frontier_evals += evals.len() as u64;
            for (i, v) in frontier.into_iter().zip(evals) {
                values[i] = Some(v);
            }
        }
        Ok(values.into_iter().map(|v| v.unwrap()).collect())
    }

    fn materialize(&mut self, state: &G::State) -> Result<Vec<(G::State, bool)>, SearchError> {
        let actions = self.game.legal_actions(state)?;
        self.tracker.charge(actions.len() as u64);
        let mut children = Vec::with_capacity(actions.len());
        for &a in &actions {
            let child = self.game.apply(state, a)?;
            let terminal = self.game.is_terminal(&child);
            children.push((child, terminal));
        }
        Ok(children)
    }
}

fn argmax_for<G: Game>(
    game: &G,
    state: &G::State,
    values: &[PayoffVector],
) -> Result<(PayoffVector, u16), SearchError> {
    let p = game.current_player(state)?;
    let mut best = 0usize;
    for i in 1..values.len() {
        if values[i][p] > values[best][p] {
            best = i;
        }
    }
    Ok((values[best], best as u16))
}

fn maxn_rec<G: Game, E: Evaluator<G>>(
    ctx: &mut Ctx<'_, G, E>,
    state: &G::State,
    depth: u32,
) -> Result<PayoffVector, SearchError> {
    let key = (game_key(ctx.game, state), depth);
    if let Some((v, _)) = ctx.memo.get(&key) {
        return Ok(*v);
    }
    if ctx.tracker.exhausted() {
        return Err(SearchError::BudgetExhausted);
    }
    let children = ctx.materialize(state)?;
    let values = ctx.child_values(&children, depth, maxn_rec)?;
    let entry = argmax_for(ctx.game, state, &values)?;
    ctx.memo.insert(key, entry);
    Ok(entry.0)
}

fn game_key<G: Game>(game: &G, state: &G::State) -> u64 {
    game.zobrist_key(state).0
}

/// Classic fixed-depth max^n with batched frontier evaluation.
pub fn maxn_depth<G: Game, E: Evaluator<G>>(
    game: &G,
    evaluator: &E,
    state: &G::State,
    depth: u32,
    budget: SearchBudget,
) -> Result<DepthResult<G::Action>, SearchError> {
    let mut tracker = BudgetTracker::new(budget)?;
    maxn_depth_tracked(game, evaluator, state, depth, &mut tracker)
}

pub(crate) fn maxn_depth_tracked<G: Game, E: Evaluator<G>>(
    game: &G,
    evaluator: &E,
    state: &G::State,
    depth: u32,
    tracker: &mut BudgetTracker,
) -> Result<DepthResult<G::Action>, SearchError> {
    check_root(game, state, depth)?;
    let mut ctx = Ctx {
        game,
        evaluator,
        memo: HashMap::new(),
        tracker,
        frontier_evals: 0,
    };
    ctx.tracker.charge(1);
    let children = ctx.materialize(state)?;
    let values = ctx.child_values(&children, depth, maxn_rec)?;
    let (value, ordinal) = argmax_for(game, state, &values)?;
    let actions = game.legal_actions(state)?;
    Ok(DepthResult {
        value,
        chosen_ordinal: ordinal,
        chosen: actions[ordinal as usize],
        nodes: ctx.tracker.nodes,
        exact: ctx.frontier_evals == 0,
    })
}

fn check_root<G: Game>(game: &G, state: &G::State, depth: u32) -> Result<(), SearchError> {
    if depth == 0 {
        return Err(SearchError::Game(GameError::BadConfig(
            alloc::format!("search depth must be at least 1"),
        )));
    }
    if game.is_terminal(state) {
        return Err(SearchError::TerminalRoot);
    }
    Ok(())
}

/// Indices of the k most promising children: highest ordering value first,
/// lowest ordinal on ties, returned in ascending ordinal order.
fn top_k(ordering: &[f64], k: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..ordering.len()).collect();
    idx.sort_by(|&a, &b| {
        ordering[b]
            .partial_cmp(&ordering[a])
            .unwrap_or(core::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    idx.truncate(k);
    idx.sort_unstable();
    idx
}

fn kbest_rec<G: Game, E: Evaluator<G>>(
    ctx: &mut Ctx<'_, G, E>,
    state: &G::State,
    depth: u32,
    k: usize,
) -> Result<PayoffVector, SearchError> {
    let key = (game_key(ctx.game, state), depth);
    if let Some((v, _)) = ctx.memo.get(&key) {
        return Ok(*v);
    }
    if ctx.tracker.exhausted() {
        return Err(SearchError::BudgetExhausted);
    }
    let children = ctx.materialize(state)?;
    let (values, ordinal) = kbest_node(ctx, state, &children, depth, k)?;
    ctx.memo.insert(key, (values, ordinal));
    Ok(values)
}

/// Value of one k-best node given its materialized children.
fn kbest_node<G: Game, E: Evaluator<G>>(
    ctx: &mut Ctx<'_, G, E>,
    state: &G::State,
    children: &[(G::State, bool)],
    depth: u32,
    k: usize,
) -> Result<(PayoffVector, u16), SearchError> {
    let p = ctx.game.current_player(state)?;
    // Ordering pass: terminal children by exact payoff, the rest by one
    // batched evaluation.
    let mut estimates: Vec<Option<PayoffVector>> = alloc::vec![None; children.len()];
    let mut frontier: Vec<usize> = Vec::new();
    for (i, (child, terminal)) in children.iter().enumerate() {
        if *terminal {
            estimates[i] = Some(ctx.game.terminal_payoff(child)?);
        } else {
            frontier.push(i);
        }
    }
    if !frontier.is_empty() {
        let states: Vec<&G::State> = frontier.iter().map(|&i| &children[i].0).collect();
        let evals = ctx.evaluator.evaluate_batch(ctx.game, &states);
        ctx.frontier_evals += evals.len() as u64;
        for (i, v) in frontier.into_iter().zip(evals) {
            estimates[i] = Some(v);
        }
    }
    let estimates: Vec<PayoffVector> = estimates.into_iter().map(|v| v.unwrap()).collect();

    if depth == 1 {
        // Frontier: the estimates are the child values.
        let best = argmax_for(ctx.game, state, &estimates)?;
        return Ok(best);
    }

    let ordering: Vec<f64> = estimates.iter().map(|v| v[p]).collect();
    let selected = top_k(&ordering, k);
    let mut best: Option<(PayoffVector, u16)> = None;
    for &i in &selected {
        let (child, terminal) = &children[i];
        let value = if *terminal {
            estimates[i]
        } else {
            kbest_rec(ctx, child, depth - 1, k)?
        };
        let better = match &best {
            None => true,
            Some((bv, _)) => value[p] > bv[p],
        };
        if better {
            best = Some((value, i as u16));
        }
    }
    Ok(best.expect("at least one child selected"))
}

/// Fixed-depth max^n that expands only the k most promising children of
/// every interior node, ranked by the evaluator from the mover's view.
/// With k at least the branching factor this is exactly [`maxn_depth`].
pub fn kbest_maxn<G: Game, E: Evaluator<G>>(
    game: &G,
    evaluator: &E,
    state: &G::State,
    depth: u32,
    k: u16,
    budget: SearchBudget,
) -> Result<DepthResult<G::Action>, SearchError> {
    let mut tracker = BudgetTracker::new(budget)?;
    kbest_maxn_tracked(game, evaluator, state, depth, k, &mut tracker)
}

pub(crate) fn kbest_maxn_tracked<G: Game, E: Evaluator<G>>(
    game: &G,
    evaluator: &E,
    state: &G::State,
    depth: u32,
    k: u16,
    tracker: &mut BudgetTracker,
) -> Result<DepthResult<G::Action>, SearchError> {
    check_root(game, state, depth)?;
    if k == 0 {
        return Err(SearchError::Game(GameError::BadConfig(
            alloc::format!("k must be at least 1"),
        )));
    }
    let mut ctx = Ctx {
        game,
        evaluator,
        memo: HashMap::new(),
        tracker,
        frontier_evals: 0,
    };
    ctx.tracker.charge(1);
    let children = ctx.materialize(state)?;
    let (value, ordinal) = kbest_node(&mut ctx, state, &children, depth, k as usize)?;
    let actions = game.legal_actions(state)?;
    Ok(DepthResult {
        value,
        chosen_ordinal: ordinal,
        chosen: actions[ordinal as usize],
        nodes: ctx.tracker.nodes,
        exact: ctx.frontier_evals == 0,
    })
}
