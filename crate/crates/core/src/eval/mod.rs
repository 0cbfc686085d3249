//! Heuristic evaluation of non-terminal states.
//!
//! An [`Evaluator`] maps a non-terminal state to one heuristic component per
//! player. Raw heuristics live on a game-specific scale; [`normalize`] wraps
//! them into `[0, 1]` per component with a clamped affine map whose bounds
//! come from [`calibrate_bounds`].

mod builtin;

pub use builtin::{builtin_heuristic, builtin_heuristic_id, BuiltinEval, HeuristicGame};

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::game::{Game, GameError};
use crate::payoff::{PayoffVector, PlayerId};
use crate::zobrist::FeatureStream;

#[derive(Clone, PartialEq, Debug)]
pub enum EvalError {
    /// Evaluators are undefined on terminal states. `index` names the
    /// offending position inside a batch.
    TerminalState { index: usize },
    /// Evaluator output length does not match the player count.
    WrongArity { got: usize, expected: usize },
    /// A component never varied over the calibration sample.
    ConstantComponent { player: PlayerId },
    /// Normalization bounds with `m >= M` in some component.
    InvalidBounds { player: PlayerId },
    /// No such evaluator family for this game.
    UnknownFamily(String),
    Game(GameError),
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::TerminalState { index } => {
                write!(f, "cannot evaluate a terminal state (batch index {index})")
            }
            EvalError::WrongArity { got, expected } => {
                write!(f, "evaluator returned {got} components, expected {expected}")
            }
            EvalError::ConstantComponent { player } => {
                write!(f, "component {player} is constant over the calibration sample")
            }
            EvalError::InvalidBounds { player } => {
                write!(f, "normalization bounds need m < M in component {player}")
            }
            EvalError::UnknownFamily(name) => write!(f, "unknown evaluator family '{name}'"),
            EvalError::Game(e) => write!(f, "{e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for EvalError {}

impl From<GameError> for EvalError {
    fn from(e: GameError) -> EvalError {
        EvalError::Game(e)
    }
}

/// Per-player heuristic evaluation of non-terminal states.
///
/// Implementations may assume their input is non-terminal; use [`evaluate`]
/// and [`evaluate_batch`] when that has not been established by the caller.
pub trait Evaluator<G: Game> {
    /// Stable identifier, `<game>:<family>:<variant>` for game heuristics.
    fn id(&self) -> String;

    fn evaluate(&self, game: &G, state: &G::State) -> PayoffVector;

    /// Evaluate several states in one call, preserving order. Must agree
    /// exactly with mapping [`Evaluator::evaluate`] over the slice.
    fn evaluate_batch(&self, game: &G, states: &[&G::State]) -> Vec<PayoffVector> {
        states.iter().map(|s| self.evaluate(game, s)).collect()
    }
}

impl<G: Game, E: Evaluator<G> + ?Sized> Evaluator<G> for &E {
    fn id(&self) -> String {
        (**self).id()
    }

    fn evaluate(&self, game: &G, state: &G::State) -> PayoffVector {
        (**self).evaluate(game, state)
    }

    fn evaluate_batch(&self, game: &G, states: &[&G::State]) -> Vec<PayoffVector> {
        (**self).evaluate_batch(game, states)
    }
}

/// Checked single-state evaluation: rejects terminal input and wrong arity.
pub fn evaluate<G: Game, E: Evaluator<G>>(
    evaluator: &E,
    game: &G,
    state: &G::State,
) -> Result<PayoffVector, EvalError> {
    if game.is_terminal(state) {
        return Err(EvalError::TerminalState { index: 0 });
    }
    let out = evaluator.evaluate(game, state);
    if out.len() != game.player_count() {
        return Err(EvalError::WrongArity {
            got: out.len(),
            expected: game.player_count(),
        });
    }
    Ok(out)
}

/// Checked batch evaluation; reports the index of the first terminal state.
pub fn evaluate_batch<G: Game, E: Evaluator<G>>(
    evaluator: &E,
    game: &G,
    states: &[&G::State],
) -> Result<Vec<PayoffVector>, EvalError> {
    for (index, s) in states.iter().enumerate() {
        if game.is_terminal(s) {
            return Err(EvalError::TerminalState { index });
        }
    }
    let out = evaluator.evaluate_batch(game, states);
    for v in &out {
        if v.len() != game.player_count() {
            return Err(EvalError::WrongArity {
                got: v.len(),
                expected: game.player_count(),
            });
        }
    }
    Ok(out)
}

/// Evaluator returning all zeros; useful as a strategically blind baseline.
pub struct ZeroEval;

impl<G: Game> Evaluator<G> for ZeroEval {
    fn id(&self) -> String {
        String::from("zero")
    }

    fn evaluate(&self, game: &G, _state: &G::State) -> PayoffVector {
        PayoffVector::zeros(game.player_count())
    }
}

/// Per-component clamping bounds for normalization.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct NormalizationBounds {
    pub lower: PayoffVector,
    pub upper: PayoffVector,
}

impl NormalizationBounds {
    pub fn new(lower: PayoffVector, upper: PayoffVector) -> Result<Self, EvalError> {
        assert_eq!(lower.len(), upper.len());
        for p in 0..lower.len() {
            let p = PlayerId(p as u8);
            if !(lower[p] < upper[p]) {
                return Err(EvalError::InvalidBounds { player: p });
            }
        }
        Ok(NormalizationBounds { lower, upper })
    }
}

/// `evaluator` rescaled into `[0, 1]` component-wise: the output is clamped
/// to `[m, M]` and mapped affinely, `(clamp(f, m, M) - m) / (M - m)`.
pub struct Normalized<E> {
    inner: E,
    bounds: NormalizationBounds,
}

impl<E> Normalized<E> {
    pub fn bounds(&self) -> &NormalizationBounds {
        &self.bounds
    }
}

/// Wrap an evaluator with calibrated normalization bounds.
pub fn normalize<E>(evaluator: E, bounds: NormalizationBounds) -> Normalized<E> {
    Normalized {
        inner: evaluator,
        bounds,
    }
}

fn normalize_vector(v: PayoffVector, bounds: &NormalizationBounds) -> PayoffVector {
    PayoffVector::from_fn(v.len(), |p| {
        let m = bounds.lower[p];
        let big_m = bounds.upper[p];
        (v[p].min(big_m).max(m) - m) / (big_m - m)
    })
}

impl<G: Game, E: Evaluator<G>> Evaluator<G> for Normalized<E> {
    fn id(&self) -> String {
        format!("norm({})", self.inner.id())
    }

    fn evaluate(&self, game: &G, state: &G::State) -> PayoffVector {
        normalize_vector(self.inner.evaluate(game, state), &self.bounds)
    }

    fn evaluate_batch(&self, game: &G, states: &[&G::State]) -> Vec<PayoffVector> {
        self.inner
            .evaluate_batch(game, states)
            .into_iter()
            .map(|v| normalize_vector(v, &self.bounds))
            .collect()
    }
}

/// Move selection used for calibration self-play.
pub enum CalibrationPolicy {
    /// Uniformly random legal action.
    Random,
    /// 1-ply greedy on the calibrated evaluator's own component with the
    /// given exploration rate, so the sample both follows the evaluator and
    /// still spreads over the state space.
    EpsilonGreedy { epsilon: f64 },
}

/// Estimate normalization bounds by playing `sample_budget` seeded self-play
/// matches and taking the component-wise min/max of the evaluator over every
/// non-terminal state visited.
pub fn calibrate_bounds<G: Game, E: Evaluator<G>>(
    evaluator: &E,
    game: &G,
    policy: CalibrationPolicy,
    sample_budget: u32,
    seed: u64,
) -> Result<NormalizationBounds, EvalError> {
    let players = game.player_count();
    let mut lower = PayoffVector::from_fn(players, |_| f64::INFINITY);
    let mut upper = PayoffVector::from_fn(players, |_| f64::NEG_INFINITY);
    let mut states = Vec::new();
    for match_index in 0..sample_budget.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (match_index as u64).wrapping_mul(0x9E37));
        let mut state = game.initial_state();
        while !game.is_terminal(&state) {
            states.push(state.clone());
            let actions = game.legal_actions(&state)?;
            let choice = match &policy {
                CalibrationPolicy::Random => rng.gen_range(0..actions.len()),
                CalibrationPolicy::EpsilonGreedy { epsilon } => {
                    if rng.gen_bool(epsilon.clamp(0.0, 1.0)) {
                        rng.gen_range(0..actions.len())
                    } else {
                        greedy_choice(game, evaluator, &state, &actions)?
                    }
                }
            };
            state = game.apply(&state, actions[choice])?;
        }
    }
    for chunk in states.chunks(256) {
        let refs: Vec<&G::State> = chunk.iter().collect();
        for v in evaluate_batch(evaluator, game, &refs)? {
            for p in 0..players {
                let p = PlayerId(p as u8);
                if v[p] < lower[p] {
                    lower.set(p, v[p]);
                }
                if v[p] > upper[p] {
                    upper.set(p, v[p]);
                }
            }
        }
    }
    for p in 0..players {
        let p = PlayerId(p as u8);
        if !(lower[p] < upper[p]) {
            return Err(EvalError::ConstantComponent { player: p });
        }
    }
    NormalizationBounds::new(lower, upper)
}

/// Ordinal of the action maximising the mover's own component one ply deep;
/// terminal children are valued by their game score.
fn greedy_choice<G: Game, E: Evaluator<G>>(
    game: &G,
    evaluator: &E,
    state: &G::State,
    actions: &[G::Action],
) -> Result<usize, EvalError> {
    let mover = game.current_player(state)?;
    let mut children = Vec::with_capacity(actions.len());
    for &a in actions {
        children.push(game.apply(state, a)?);
    }
    let mut heuristic_states: Vec<&G::State> = Vec::new();
    let mut slots: Vec<Option<f64>> = Vec::with_capacity(children.len());
    for child in &children {
        if game.is_terminal(child) {
            slots.push(Some(game.terminal_payoff(child)?[mover]));
        } else {
            slots.push(None);
            heuristic_states.push(child);
        }
    }
    let evaluated = evaluator.evaluate_batch(game, &heuristic_states);
    let mut it = evaluated.into_iter();
    let values: Vec<f64> = slots
        .into_iter()
        .map(|s| s.unwrap_or_else(|| it.next().expect("one result per state")[mover]))
        .collect();
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    Ok(best)
}

/// Deterministic weight jitter for evaluator families. Variant 0 keeps the
/// base weights untouched; other variants rescale every weight by a factor
/// drawn from `[0.5, 1.5]`, seeded by (game, family, variant) so the family
/// is stable across runs.
pub fn jitter_weights(base: &[f64], game_name: &str, family: &str, variant: u32) -> Vec<f64> {
    if variant == 0 {
        return base.to_vec();
    }
    let seed = FeatureStream::new(&format!("{game_name}:{family}:{variant}")).next_value();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    base.iter()
        .map(|w| w * (1.0 + (rng.gen::<f64>() - 0.5)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::TriNim;

    struct TokensLeft;

    impl Evaluator<TriNim> for TokensLeft {
        fn id(&self) -> String {
            String::from("trinim:test:0")
        }

        fn evaluate(&self, _game: &TriNim, state: &crate::games::TriNimState) -> PayoffVector {
            let t: f64 = state.heaps.iter().map(|&h| h as f64).sum();
            PayoffVector::from_fn(3, |p| if p == state.mover { t } else { -t })
        }
    }

    #[test]
    fn checked_evaluate_rejects_terminal() {
        let g = TriNim::new(&[1]).unwrap();
        let s = g
            .apply(&g.initial_state(), crate::games::TriNimAction { heap: 0, take: 1 })
            .unwrap();
        let err = evaluate(&ZeroEval, &g, &s).unwrap_err();
        assert_eq!(err, EvalError::TerminalState { index: 0 });
        let root = g.initial_state();
        let err = evaluate_batch(&ZeroEval, &g, &[&root, &s]).unwrap_err();
        assert_eq!(err, EvalError::TerminalState { index: 1 });
    }

    #[test]
    fn normalization_formula() {
        let g = TriNim::new(&[6]).unwrap();
        let bounds = NormalizationBounds::new(
            PayoffVector::new(&[-4.0, -4.0, -4.0]),
            PayoffVector::new(&[4.0, 4.0, 4.0]),
        )
        .unwrap();
        let norm = normalize(TokensLeft, bounds);
        // Raw value (6, -6, -6) clamps to (4, -4, -4) and maps to (1, 0, 0).
        let v = norm.evaluate(&g, &g.initial_state());
        assert_eq!(v, PayoffVector::new(&[1.0, 0.0, 0.0]));
    }

    #[test]
    fn degenerate_bounds_rejected() {
        let m = PayoffVector::new(&[0.0, 0.0, 0.0]);
        let err = NormalizationBounds::new(m, m).unwrap_err();
        assert_eq!(err, EvalError::InvalidBounds { player: PlayerId(0) });
    }

    #[test]
    fn calibration_rejects_constant_evaluator() {
        let g = TriNim::new(&[4]).unwrap();
        let err =
            calibrate_bounds(&ZeroEval, &g, CalibrationPolicy::Random, 4, 7).unwrap_err();
        assert!(matches!(err, EvalError::ConstantComponent { .. }));
    }

    #[test]
    fn calibration_is_deterministic() {
        let g = TriNim::new(&[5, 3]).unwrap();
        let a = calibrate_bounds(
            &TokensLeft,
            &g,
            CalibrationPolicy::EpsilonGreedy { epsilon: 0.2 },
            6,
            11,
        )
        .unwrap();
        let b = calibrate_bounds(
            &TokensLeft,
            &g,
            CalibrationPolicy::EpsilonGreedy { epsilon: 0.2 },
            6,
            11,
        )
        .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn jitter_variant_zero_is_identity() {
        let base = [1.0, 0.25];
        assert_eq!(jitter_weights(&base, "g", "f", 0), base.to_vec());
        let v1 = jitter_weights(&base, "g", "f", 1);
        assert_ne!(v1, base.to_vec());
        assert_eq!(v1, jitter_weights(&base, "g", "f", 1));
        for (w, b) in v1.iter().zip(base.iter()) {
            assert!(*w > 0.0 && (w / b - 1.0).abs() <= 0.5 + 1e-12);
        }
    }
}
