//! Monte Carlo tree search, plain and heuristic-backed.
//!
//! One tree node per reached state, no transposition handling. Selection
//! is UCT on per-player mean rewards in [0, 1]; unexpanded actions are
//! tried first in ordinal order, one expansion per iteration. `mcts`
//! scores new leaves with a uniform random playout, `mcts_h` asks the
//! evaluator instead and insists on outputs within [0, 1]. Terminal
//! rewards use the win/draw/loss vector mapped into [0, 1] in both
//! variants. The final move is the most visited root child, lowest
//! ordinal on ties.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::eval::Evaluator;
use crate::game::Game;
use crate::payoff::{PayoffVector, PlayerId};
use crate::search::{fmath, BudgetTracker, SearchBudget, SearchError};

/// Knobs for both MCTS variants.
#[derive(Clone, Copy, Debug)]
pub struct MctsParams {
    /// UCT exploration constant.
    pub exploration: f64,
    /// Seed for the playout generator.
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct MctsChildStats {
    pub ordinal: u16,
    pub visits: u64,
    /// Mean reward vector; zeros when never visited.
    pub mean: PayoffVector,
}

#[derive(Clone, Debug)]
pub struct MctsResult<A> {
    pub chosen_ordinal: u16,
    pub chosen: A,
    pub iterations: u64,
    /// One entry per root action, in canonical order.
    pub root: Vec<MctsChildStats>,
}

struct Node<G: Game> {
    state: G::State,
    mover: Option<PlayerId>,
    actions: Vec<G::Action>,
    children: Vec<usize>,
    visits: u64,
    sums: PayoffVector,
    terminal: bool,
}

fn make_node<G: Game>(game: &G, state: G::State) -> Result<Node<G>, SearchError> {
    let terminal = game.is_terminal(&state);
    let (mover, actions) = if terminal {
        (None, Vec::new())
    } else {
        (
            Some(game.current_player(&state)?),
            game.legal_actions(&state)?,
        )
    };
    Ok(Node {
        state,
        mover,
        actions,
        children: Vec::new(),
        visits: 0,
        sums: PayoffVector::zeros(game.player_count()),
        terminal,
    })
}

/// Terminal reward: win/draw/loss vector mapped from [-1, 1] to [0, 1].
fn terminal_reward<G: Game>(game: &G, state: &G::State) -> Result<PayoffVector, SearchError> {
    Ok(game.win_loss_vector(state)?.map(|x| (x + 1.0) / 2.0))
}

fn mcts_engine<G, F>(
    game: &G,
    root: &G::State,
    params: MctsParams,
    budget: SearchBudget,
    mut leaf_reward: F,
) -> Result<MctsResult<G::Action>, SearchError>
where
    G: Game,
    F: FnMut(&G::State) -> Result<PayoffVector, SearchError>,
{
    if game.is_terminal(root) {
        return Err(SearchError::TerminalRoot);
    }
    let mut tracker = BudgetTracker::new(budget)?;
    let mut arena: Vec<Node<G>> = alloc::vec![make_node(game, root.clone())?];
    let mut iterations = 0u64;
    loop {
        if tracker.exhausted() {
            break;
        }
        tracker.charge(1);
        iterations += 1;

        // Select down to a node that is terminal or not fully expanded.
        let mut path = alloc::vec![0usize];
        let mut idx = 0usize;
        loop {
            let node = &arena[idx];
            if node.terminal || node.children.len() < node.actions.len() {
                break;
            }
            let p = node.mover.expect("interior node has a mover");
            let ln_n = fmath::ln(node.visits as f64);
            let mut pick = node.children[0];
            let mut pick_score = f64::MIN;
            for &child in &node.children {
                let c = &arena[child];
                let mean = c.sums[p] / c.visits as f64;
                let score = mean + params.exploration * fmath::sqrt(ln_n / c.visits as f64);
                if score > pick_score {
                    pick_score = score;
                    pick = child;
                }
            }
            idx = pick;
            path.push(idx);
        }

        // Expand one untried action, in ordinal order.
        if !arena[idx].terminal {
            let next = arena[idx].children.len();
            let action = arena[idx].actions[next];
            let child_state = game.apply(&arena[idx].state, action)?;
            let child = make_node(game, child_state)?;
            arena.push(child);
            let new_idx = arena.len() - 1;
            arena[idx].children.push(new_idx);
            idx = new_idx;
            path.push(idx);
        }

        let reward = if arena[idx].terminal {
            terminal_reward(game, &arena[idx].state)?
        } else {
            leaf_reward(&arena[idx].state)?
        };

        for &i in &path {
            let node = &mut arena[i];
            node.visits += 1;
            for p in 0..node.sums.len() {
                let p = PlayerId(p as u8);
                node.sums.set(p, node.sums[p] + reward[p]);
            }
        }
    }

    // Most visited root action wins; unexpanded actions report zeros.
    let root_node = &arena[0];
    let mut stats = Vec::with_capacity(root_node.actions.len());
    for (i, _) in root_node.actions.iter().enumerate() {
        let (visits, mean) = match root_node.children.get(i) {
            Some(&c) => {
                let child = &arena[c];
                (child.visits, child.sums.map(|x| x / child.visits as f64))
            }
            None => (0, PayoffVector::zeros(game.player_count())),
        };
        stats.push(MctsChildStats {
            ordinal: i as u16,
            visits,
            mean,
        });
    }
    let mut chosen = 0usize;
    for (i, s) in stats.iter().enumerate().skip(1) {
        if s.visits > stats[chosen].visits {
            chosen = i;
        }
    }
    Ok(MctsResult {
        chosen_ordinal: chosen as u16,
        chosen: root_node.actions[chosen],
        iterations,
        root: stats,
    })
}

/// MCTS with uniform random playouts. The node budget counts iterations.
pub fn mcts<G: Game>(
    game: &G,
    root: &G::State,
    params: MctsParams,
    budget: SearchBudget,
) -> Result<MctsResult<G::Action>, SearchError> {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    mcts_engine(game, root, params, budget, |leaf| {
        let mut state = leaf.clone();
        while !game.is_terminal(&state) {
            let actions = game.legal_actions(&state)?;
            let a = actions[rng.gen_range(0..actions.len())];
            state = game.apply(&state, a)?;
        }
        terminal_reward(game, &state)
    })
}

/// MCTS that rates new leaves with the evaluator instead of playing out.
/// The evaluator must emit components in [0, 1], e.g. via normalization.
pub fn mcts_h<G: Game, E: Evaluator<G>>(
    game: &G,
    evaluator: &E,
    root: &G::State,
    params: MctsParams,
    budget: SearchBudget,
) -> Result<MctsResult<G::Action>, SearchError> {
    mcts_engine(game, root, params, budget, |leaf| {
        let value = evaluator.evaluate(game, leaf);
        for p in 0..value.len() {
            let p = PlayerId(p as u8);
            if !(0.0..=1.0).contains(&value[p]) {
                return Err(SearchError::EvaluatorRange {
                    state: game.encode_state(leaf),
                    player: p,
                    value: value[p],
                });
            }
        }
        Ok(value)
    })
}
