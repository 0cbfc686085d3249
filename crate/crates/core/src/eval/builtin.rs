//! Built-in handcrafted heuristic families.
//!
//! Each game ships one weighted-feature heuristic (its "family"); seeded
//! weight jitter turns that single heuristic into an arbitrarily large
//! family of distinct variants, with variant 0 always the unperturbed one.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::marker::PhantomData;

use crate::eval::{jitter_weights, Evaluator};
use crate::game::Game;
use crate::payoff::PayoffVector;

/// Games carrying a built-in weighted-feature heuristic.
pub trait HeuristicGame: Game {
    /// Family name used in evaluator identifiers.
    fn heuristic_family(&self) -> &'static str;

    /// Unperturbed feature weights.
    fn base_weights(&self) -> Vec<f64>;

    /// Evaluate a non-terminal state under the given weights.
    fn heuristic(&self, state: &Self::State, weights: &[f64]) -> PayoffVector;
}

/// One member of a game's built-in evaluator family.
pub struct BuiltinEval<G: HeuristicGame> {
    id: String,
    weights: Vec<f64>,
    _game: PhantomData<fn(&G)>,
}

impl<G: HeuristicGame> BuiltinEval<G> {
    /// The `variant`th member of `game`'s family; variant 0 is unperturbed.
    pub fn new(game: &G, variant: u32) -> BuiltinEval<G> {
        let family = game.heuristic_family();
        BuiltinEval {
            id: builtin_heuristic_id(game.name(), family, variant),
            weights: jitter_weights(&game.base_weights(), game.name(), family, variant),
            _game: PhantomData,
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

impl<G: HeuristicGame> Evaluator<G> for BuiltinEval<G> {
    fn id(&self) -> String {
        self.id.clone()
    }

    fn evaluate(&self, game: &G, state: &G::State) -> PayoffVector {
        game.heuristic(state, &self.weights)
    }
}

pub fn builtin_heuristic_id(game: &str, family: &str, variant: u32) -> String {
    format!("{game}:{family}:{variant}")
}

/// Unperturbed built-in heuristic of a game.
pub fn builtin_heuristic<G: HeuristicGame>(game: &G) -> BuiltinEval<G> {
    BuiltinEval::new(game, 0)
}
