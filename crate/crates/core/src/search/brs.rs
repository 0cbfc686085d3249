//! Best-reply search and its legal-move variant BRS+.
//!
//! Plain BRS alternates between layers of the root player's moves and
//! layers holding every (opponent, move) pair, so only the single
//! strongest opponent reply is searched per layer. The intermediate
//! states violate the turn order, which is why it needs the game's
//! out-of-turn capability. BRS+ keeps states turn-legal: between two root
//! moves exactly one designated opponent searches its real moves while the
//! others play a one-ply greedy reply, and the search minimizes over the
//! designation. Both optimize the root player's component with alpha-beta
//! and evaluate leaves lazily.

use alloc::vec::Vec;

use crate::eval::Evaluator;
use crate::game::{Game, GameError};
use crate::payoff::PlayerId;
use crate::search::paranoid::ScalarResult;
use crate::search::{BudgetTracker, SearchBudget, SearchError};

struct Ctx<'a, G: Game, E: Evaluator<G>> {
    game: &'a G,
    evaluator: &'a E,
    root_player: PlayerId,
    tracker: &'a mut BudgetTracker,
}

impl<'a, G: Game, E: Evaluator<G>> Ctx<'a, G, E> {
    fn leaf(&self, state: &G::State) -> Result<f64, SearchError> {
        Ok(self.evaluator.evaluate(self.game, state)[self.root_player])
    }

    fn terminal(&self, state: &G::State) -> Result<f64, SearchError> {
        Ok(self.game.terminal_payoff(state)?[self.root_player])
    }
}

fn brs_rec<G: Game, E: Evaluator<G>>(
    ctx: &mut Ctx<'_, G, E>,
    state: &G::State,
    depth: u32,
    mut alpha: f64,
    mut beta: f64,
    root_turn: bool,
) -> Result<f64, SearchError> {
    if ctx.game.is_terminal(state) {
        return ctx.terminal(state);
    }
    if depth == 0 {
        return ctx.leaf(state);
    }
    if ctx.tracker.exhausted() {
        return Err(SearchError::BudgetExhausted);
    }
    if root_turn {
        let moves = ctx.game.out_of_turn_actions(state, ctx.root_player)?;
        if moves.is_empty() {
            // Nothing to do in this layer; hand the turn over.
            return brs_rec(ctx, state, depth - 1, alpha, beta, false);
        }
        let mut best = f64::MIN;
        for a in moves {
            let child = ctx.game.apply_out_of_turn(state, ctx.root_player, a)?;
            ctx.tracker.charge(1);
            let v = brs_rec(ctx, &child, depth - 1, alpha, beta, false)?;
            if v > best {
                best = v;
                alpha = alpha.max(best);
            }
            if alpha >= beta {
                break;
            }
        }
        Ok(best)
    } else {
        // One layer holds every (opponent, move) pair; only the strongest
        // reply matters.
        let players = ctx.game.player_count();
        let mut best = f64::MAX;
        let mut any = false;
        'outer: for q in 0..players {
            let q = PlayerId(q as u8);
            if q == ctx.root_player {
                continue;
            }
            for a in ctx.game.out_of_turn_actions(state, q)? {
                any = true;
                let child = ctx.game.apply_out_of_turn(state, q, a)?;
                ctx.tracker.charge(1);
                let v = brs_rec(ctx, &child, depth - 1, alpha, beta, true)?;
                if v < best {
                    best = v;
                    beta = beta.min(best);
                }
                if beta <= alpha {
                    break 'outer;
                }
            }
        }
        if !any {
            return brs_rec(ctx, state, depth - 1, alpha, beta, true);
        }
        Ok(best)
    }
}

/// Best-reply search. The root move itself is turn-legal; deeper layers
/// apply moves out of turn. Depth counts layers.
pub fn brs<G: Game, E: Evaluator<G>>(
    game: &G,
    evaluator: &E,
    state: &G::State,
    depth: u32,
    budget: SearchBudget,
) -> Result<ScalarResult<G::Action>, SearchError> {
    let mut tracker = BudgetTracker::new(budget)?;
    brs_tracked(game, evaluator, state, depth, &mut tracker)
}

pub(crate) fn brs_tracked<G: Game, E: Evaluator<G>>(
    game: &G,
    evaluator: &E,
    state: &G::State,
    depth: u32,
    tracker: &mut BudgetTracker,
) -> Result<ScalarResult<G::Action>, SearchError> {
    if !game.supports_out_of_turn() {
        return Err(SearchError::MissingCapability(alloc::format!(
            "{} cannot apply moves out of turn",
            game.name()
        )));
    }
    check_root(game, state, depth)?;
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
        let v = brs_rec(&mut ctx, &child, depth - 1, alpha, f64::MAX, false)?;
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

fn check_root<G: Game>(game: &G, state: &G::State, depth: u32) -> Result<(), SearchError> {
    if game.is_terminal(state) {
        return Err(SearchError::TerminalRoot);
    }
    if depth == 0 {
        return Err(SearchError::Game(GameError::BadConfig(alloc::format!(
            "search depth must be at least 1"
        ))));
    }
    Ok(())
}

/// Greedy one-ply reply for `q`: the move whose successor the evaluator
/// likes best in q's component, terminal successors rated exactly.
fn greedy_step<G: Game, E: Evaluator<G>>(
    ctx: &mut Ctx<'_, G, E>,
    state: &G::State,
    q: PlayerId,
) -> Result<G::State, SearchError> {
    let actions = ctx.game.legal_actions(state)?;
    let mut children = Vec::with_capacity(actions.len());
    for &a in &actions {
        children.push(ctx.game.apply(state, a)?);
    }
    ctx.tracker.charge(children.len() as u64);
    let mut scores: Vec<Option<f64>> = alloc::vec![None; children.len()];
    let mut pending: Vec<usize> = Vec::new();
    for (i, child) in children.iter().enumerate() {
        if ctx.game.is_terminal(child) {
            scores[i] = Some(ctx.game.terminal_payoff(child)?[q]);
        } else {
            pending.push(i);
        }
    }
    if !pending.is_empty() {
        let states: Vec<&G::State> = pending.iter().map(|&i| &children[i]).collect();
        let values = ctx.evaluator.evaluate_batch(ctx.game, &states);
        for (i, v) in pending.into_iter().zip(values) {
            scores[i] = Some(v[q]);
        }
    }
    let mut pick = 0usize;
    for i in 1..children.len() {
        if scores[i].unwrap() > scores[pick].unwrap() {
            pick = i;
        }
    }
    Ok(children.swap_remove(pick))
}

/// Root max node of BRS+: all states here are turn-legal with the root
/// player to move.
fn plus_value<G: Game, E: Evaluator<G>>(
    ctx: &mut Ctx<'_, G, E>,
    state: &G::State,
    depth: u32,
    mut alpha: f64,
    beta: f64,
) -> Result<f64, SearchError> {
    if ctx.game.is_terminal(state) {
        return ctx.terminal(state);
    }
    if depth == 0 {
        return ctx.leaf(state);
    }
    if ctx.tracker.exhausted() {
        return Err(SearchError::BudgetExhausted);
    }
    debug_assert_eq!(ctx.game.current_player(state)?, ctx.root_player);
    let actions = ctx.game.legal_actions(state)?;
    let mut best = f64::MIN;
    for &a in &actions {
        let child = ctx.game.apply(state, a)?;
        ctx.tracker.charge(1);
        let v = plus_phase(ctx, &child, depth - 1, alpha, beta)?;
        if v > best {
            best = v;
            alpha = alpha.max(best);
        }
        if alpha >= beta {
            break;
        }
    }
    Ok(best)
}

/// Opponent phase: minimize over which single opponent gets to search its
/// real moves while the rest reply greedily.
fn plus_phase<G: Game, E: Evaluator<G>>(
    ctx: &mut Ctx<'_, G, E>,
    state: &G::State,
    depth: u32,
    alpha: f64,
    mut beta: f64,
) -> Result<f64, SearchError> {
    if ctx.game.is_terminal(state) {
        return ctx.terminal(state);
    }
    if ctx.game.current_player(state)? == ctx.root_player {
        return plus_value(ctx, state, depth, alpha, beta);
    }
    let players = ctx.game.player_count();
    let mut best = f64::MAX;
    for o in 0..players {
        let o = PlayerId(o as u8);
        if o == ctx.root_player {
            continue;
        }
        let v = plus_walk(ctx, state, o, depth, alpha, beta)?;
        if v < best {
            best = v;
            beta = beta.min(best);
        }
        if beta <= alpha {
            break;
        }
    }
    Ok(best)
}

/// Walk the phase towards the root player's next turn: the designated
/// opponent `o` branches (consuming depth), everyone else replies greedily
/// for free.
fn plus_walk<G: Game, E: Evaluator<G>>(
    ctx: &mut Ctx<'_, G, E>,
    state: &G::State,
    o: PlayerId,
    depth: u32,
    alpha: f64,
    mut beta: f64,
) -> Result<f64, SearchError> {
    if ctx.game.is_terminal(state) {
        return ctx.terminal(state);
    }
    let q = ctx.game.current_player(state)?;
    if q == ctx.root_player {
        return plus_value(ctx, state, depth, alpha, beta);
    }
    if ctx.tracker.exhausted() {
        return Err(SearchError::BudgetExhausted);
    }
    if q == o && depth > 0 {
        let actions = ctx.game.legal_actions(state)?;
        let mut best = f64::MAX;
        for &a in &actions {
            let child = ctx.game.apply(state, a)?;
            ctx.tracker.charge(1);
            let v = plus_walk(ctx, &child, o, depth - 1, alpha, beta)?;
            if v < best {
                best = v;
                beta = beta.min(best);
            }
            if beta <= alpha {
                break;
            }
        }
        Ok(best)
    } else {
        let next = greedy_step(ctx, state, q)?;
        plus_walk(ctx, &next, o, depth, alpha, beta)
    }
}

/// BRS+ on turn-legal states. With two players this reduces to plain
/// alternating alpha-beta.
pub fn brs_plus<G: Game, E: Evaluator<G>>(
    game: &G,
    evaluator: &E,
    state: &G::State,
    depth: u32,
    budget: SearchBudget,
) -> Result<ScalarResult<G::Action>, SearchError> {
    let mut tracker = BudgetTracker::new(budget)?;
    brs_plus_tracked(game, evaluator, state, depth, &mut tracker)
}

pub(crate) fn brs_plus_tracked<G: Game, E: Evaluator<G>>(
    game: &G,
    evaluator: &E,
    state: &G::State,
    depth: u32,
    tracker: &mut BudgetTracker,
) -> Result<ScalarResult<G::Action>, SearchError> {
    check_root(game, state, depth)?;
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
        let v = plus_phase(&mut ctx, &child, depth - 1, alpha, f64::MAX)?;
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
