//! Name-keyed game construction, plus the cross-game operations the
//! harness drives: perft and hex connection checks on encoded states.
//!
//! `AnyGame` is deliberately not a `Game` itself (state types differ);
//! callers monomorphize with [`with_game!`].

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::game::{perft, Game, GameError};
use crate::games::{
    Bandit, HeyFish, Quadamazons, Quadrothello, Teamhex, TeamhexGoal, ThreePlayerHex, Threehex,
    TriNim, Triinversion,
};
use crate::payoff::{PayoffVector, PlayerId};

pub const GAME_NAMES: [&str; 9] = [
    "three_player_hex",
    "threehex",
    "separed_teamhex",
    "quadamazons",
    "quadrothello",
    "triinversion",
    "hey_fish",
    "trinim",
    "bandit",
];

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ParamValue {
    Int(i64),
    IntList(Vec<i64>),
}

/// Game parameters as parsed from CLI flags or a JSON config.
pub type GameParams = BTreeMap<String, ParamValue>;

pub enum AnyGame {
    ThreePlayerHex(ThreePlayerHex),
    Threehex(Threehex),
    Teamhex(Teamhex),
    Quadamazons(Quadamazons),
    Quadrothello(Quadrothello),
    Triinversion(Triinversion),
    HeyFish(HeyFish),
    TriNim(TriNim),
    Bandit(Bandit),
}

/// Run `$body` with `$g` bound to the concrete game inside an [`AnyGame`].
#[macro_export]
macro_rules! with_game {
    ($any:expr, |$g:ident| $body:expr) => {
        match $any {
            $crate::games::registry::AnyGame::ThreePlayerHex($g) => $body,
            $crate::games::registry::AnyGame::Threehex($g) => $body,
            $crate::games::registry::AnyGame::Teamhex($g) => $body,
            $crate::games::registry::AnyGame::Quadamazons($g) => $body,
            $crate::games::registry::AnyGame::Quadrothello($g) => $body,
            $crate::games::registry::AnyGame::Triinversion($g) => $body,
            $crate::games::registry::AnyGame::HeyFish($g) => $body,
            $crate::games::registry::AnyGame::TriNim($g) => $body,
            $crate::games::registry::AnyGame::Bandit($g) => $body,
        }
    };
}

impl core::fmt::Debug for AnyGame {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "AnyGame({})", self.name())
    }
}

impl AnyGame {
    pub fn name(&self) -> &str {
        with_game!(self, |g| g.name())
    }

    pub fn player_count(&self) -> usize {
        with_game!(self, |g| g.player_count())
    }

    pub fn supports_out_of_turn(&self) -> bool {
        with_game!(self, |g| g.supports_out_of_turn())
    }
}

fn int_of(params: &GameParams, key: &str, default: i64) -> Result<i64, GameError> {
    match params.get(key) {
        None => Ok(default),
        Some(ParamValue::Int(v)) => Ok(*v),
        Some(ParamValue::IntList(_)) => Err(GameError::BadConfig(format!(
            "parameter '{key}' must be a single integer"
        ))),
    }
}

fn size_of(params: &GameParams, key: &str, default: i64) -> Result<usize, GameError> {
    let v = int_of(params, key, default)?;
    usize::try_from(v)
        .map_err(|_| GameError::BadConfig(format!("parameter '{key}' must not be negative")))
}

fn seed_of(params: &GameParams, key: &str) -> Result<u64, GameError> {
    let v = int_of(params, key, 0)?;
    u64::try_from(v)
        .map_err(|_| GameError::BadConfig(format!("parameter '{key}' must not be negative")))
}

fn reject_unknown(params: &GameParams, allowed: &[&str]) -> Result<(), GameError> {
    for key in params.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(GameError::BadConfig(format!(
                "unknown parameter '{key}' (expected one of {allowed:?})"
            )));
        }
    }
    Ok(())
}

/// Build a game by name. Missing parameters fall back to each game's
/// default size; unknown names and parameters are rejected.
pub fn make_game(name: &str, params: &GameParams) -> Result<AnyGame, GameError> {
    match name {
        "three_player_hex" => {
            reject_unknown(params, &["side"])?;
            let side = int_of(params, "side", 7)?;
            let side = u32::try_from(side)
                .map_err(|_| GameError::BadConfig("side must not be negative".to_string()))?;
            Ok(AnyGame::ThreePlayerHex(ThreePlayerHex::new(side)?))
        }
        "threehex" => {
            reject_unknown(params, &["side"])?;
            let side = int_of(params, "side", 7)?;
            let side = u32::try_from(side)
                .map_err(|_| GameError::BadConfig("side must not be negative".to_string()))?;
            Ok(AnyGame::Threehex(Threehex::new(side)?))
        }
        "separed_teamhex" => {
            reject_unknown(params, &["n"])?;
            Ok(AnyGame::Teamhex(Teamhex::new(size_of(
                params, "n", 20,
            )?)?))
        }
        "quadamazons" => {
            reject_unknown(params, &["n", "d"])?;
            let n = size_of(params, "n", 14)?;
            let d = size_of(params, "d", 2)?;
            Ok(AnyGame::Quadamazons(Quadamazons::new(n, d)?))
        }
        "quadrothello" => {
            reject_unknown(params, &["n"])?;
            Ok(AnyGame::Quadrothello(Quadrothello::new(size_of(
                params, "n", 14,
            )?)?))
        }
        "triinversion" => {
            reject_unknown(params, &["l"])?;
            let l = int_of(params, "l", 6)?;
            let l = u32::try_from(l)
                .map_err(|_| GameError::BadConfig("l must not be negative".to_string()))?;
            Ok(AnyGame::Triinversion(Triinversion::new(l)?))
        }
        "hey_fish" => {
            reject_unknown(params, &["rows", "cols", "penguins", "seed"])?;
            let rows = size_of(params, "rows", 5)?;
            let cols = size_of(params, "cols", 5)?;
            let penguins = size_of(params, "penguins", 2)?;
            let seed = seed_of(params, "seed")?;
            Ok(AnyGame::HeyFish(HeyFish::new(rows, cols, penguins, seed)?))
        }
        "trinim" => {
            reject_unknown(params, &["heaps"])?;
            let heaps: Vec<u8> = match params.get("heaps") {
                None => alloc::vec![5, 4, 3],
                Some(ParamValue::IntList(list)) => list
                    .iter()
                    .map(|&v| u8::try_from(v))
                    .collect::<Result<_, _>>()
                    .map_err(|_| {
                        GameError::BadConfig("heap sizes must fit in 0..=255".to_string())
                    })?,
                Some(ParamValue::Int(v)) => {
                    alloc::vec![u8::try_from(*v).map_err(|_| {
                        GameError::BadConfig("heap sizes must fit in 0..=255".to_string())
                    })?]
                }
            };
            Ok(AnyGame::TriNim(TriNim::new(&heaps)?))
        }
        "bandit" => {
            reject_unknown(params, &["players", "arms", "seed"])?;
            let players = size_of(params, "players", 3)?;
            let arm_count = size_of(params, "arms", 5)?;
            let seed = seed_of(params, "seed")?;
            if !(1..=64).contains(&arm_count) {
                return Err(GameError::BadConfig("bandit needs 1..=64 arms".to_string()));
            }
            // Seeded payoff table, uniform per component in [-1, 1].
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let arms: Vec<PayoffVector> = (0..arm_count)
                .map(|_| {
                    PayoffVector::from_fn(players.min(8), |_| rng.gen_range(-1.0..=1.0))
                })
                .collect();
            Ok(AnyGame::Bandit(Bandit::new(players, arms)?))
        }
        "blokus" => Err(GameError::BadConfig(
            "blokus is not supported by this engine".to_string(),
        )),
        _ => Err(GameError::BadConfig(format!(
            "unknown game '{name}' (expected one of {GAME_NAMES:?})"
        ))),
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ConnectionTarget {
    Player(PlayerId),
    Team(u8),
}

/// Whether the player's (or team's) stones link their goal edges in the
/// given encoded position. Only the hex family supports this.
pub fn connection_check(
    game: &AnyGame,
    state_text: &str,
    target: ConnectionTarget,
) -> Result<bool, GameError> {
    match (game, target) {
        (AnyGame::ThreePlayerHex(g), ConnectionTarget::Player(p)) => {
            Ok(g.connected(&g.parse_state(state_text)?, p))
        }
        (AnyGame::Threehex(g), ConnectionTarget::Player(p)) => {
            Ok(g.connected(&g.parse_state(state_text)?, p))
        }
        (AnyGame::Teamhex(g), ConnectionTarget::Player(p)) => {
            Ok(g.connected(&g.parse_state(state_text)?, TeamhexGoal::Strong(p)))
        }
        (AnyGame::Teamhex(g), ConnectionTarget::Team(t)) => {
            if t > 1 {
                return Err(GameError::BadConfig("teams are 0 and 1".to_string()));
            }
            Ok(g.connected(&g.parse_state(state_text)?, TeamhexGoal::Team(t)))
        }
        (AnyGame::ThreePlayerHex(_) | AnyGame::Threehex(_), ConnectionTarget::Team(_)) => Err(
            GameError::BadConfig("this game has no teams".to_string()),
        ),
        _ => Err(GameError::BadConfig(format!(
            "connection checks are unsupported for {}",
            game.name()
        ))),
    }
}

/// Perft on an encoded state (or the initial position when absent).
pub fn perft_check(game: &AnyGame, state_text: Option<&str>, depth: u32) -> Result<u64, GameError> {
    with_game!(game, |g| {
        let state = match state_text {
            Some(text) => g.parse_state(text)?,
            None => g.initial_state(),
        };
        Ok(perft(g, &state, depth))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(pairs: &[(&str, ParamValue)]) -> GameParams {
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), v.clone()))
            .collect()
    }

    #[test]
    fn every_listed_game_builds_at_default_size() {
        for name in GAME_NAMES {
            let g = make_game(name, &GameParams::new()).unwrap();
            assert_eq!(g.name(), name);
            assert!(matches!(g.player_count(), 3 | 4));
            // The initial position is playable everywhere.
            with_game!(&g, |game| {
                let s = game.initial_state();
                assert!(!game.is_terminal(&s));
                assert!(!game.legal_actions(&s).unwrap().is_empty());
            });
        }
    }

    #[test]
    fn seat_counts_match_the_benchmark_line_up() {
        for (name, seats) in [
            ("three_player_hex", 3),
            ("threehex", 3),
            ("triinversion", 3),
            ("hey_fish", 3),
            ("trinim", 3),
            ("bandit", 3),
            ("separed_teamhex", 4),
            ("quadamazons", 4),
            ("quadrothello", 4),
        ] {
            let g = make_game(name, &GameParams::new()).unwrap();
            assert_eq!(g.player_count(), seats, "{name}");
        }
    }

    #[test]
    fn quadrothello_small_board_starts_with_sixteen_stones() {
        let g = make_game("quadrothello", &params(&[("n", ParamValue::Int(6))])).unwrap();
        let AnyGame::Quadrothello(q) = &g else {
            panic!("wrong variant");
        };
        let s = q.initial_state();
        let stones: usize = (0..36u16).filter(|&i| s.stone(i).is_some()).count();
        assert_eq!(stones, 16);
    }

    #[test]
    fn unsupported_and_unknown_names_are_rejected() {
        let e = make_game("blokus", &GameParams::new()).unwrap_err();
        assert!(matches!(e, GameError::BadConfig(ref m) if m.contains("not supported")));
        let e = make_game("rolit", &GameParams::new()).unwrap_err();
        assert!(matches!(e, GameError::BadConfig(ref m) if m.contains("unknown game")));
    }

    #[test]
    fn bad_parameters_are_rejected() {
        // Odd board for a zoned square game.
        assert!(make_game("quadrothello", &params(&[("n", ParamValue::Int(7))])).is_err());
        // d too large for the band split.
        assert!(make_game(
            "quadamazons",
            &params(&[("n", ParamValue::Int(6)), ("d", ParamValue::Int(3))])
        )
        .is_err());
        // Degenerate hex side.
        assert!(make_game("threehex", &params(&[("side", ParamValue::Int(1))])).is_err());
        // Typos do not fall back to defaults silently.
        assert!(make_game("threehex", &params(&[("sides", ParamValue::Int(4))])).is_err());
    }

    #[test]
    fn seeded_bandit_tables_are_reproducible() {
        let build = |seed| {
            let g = make_game(
                "bandit",
                &params(&[("arms", ParamValue::Int(4)), ("seed", ParamValue::Int(seed))]),
            )
            .unwrap();
            let AnyGame::Bandit(b) = g else { panic!("wrong variant") };
            b.arm_payoffs().to_vec()
        };
        assert_eq!(build(9), build(9));
        assert_ne!(build(9), build(10));
    }

    #[test]
    fn connection_checks_dispatch_across_the_hex_family() {
        // A straight chain of player 0 stones between their sides.
        let hex3 = make_game("threehex", &params(&[("side", ParamValue::Int(2))])).unwrap();
        let chain = "0./.0./.0 m1 p0";
        assert!(connection_check(&hex3, chain, ConnectionTarget::Player(PlayerId(0))).unwrap());
        assert!(!connection_check(&hex3, chain, ConnectionTarget::Player(PlayerId(1))).unwrap());
        assert!(matches!(
            connection_check(&hex3, chain, ConnectionTarget::Team(0)),
            Err(GameError::BadConfig(_))
        ));
        let teamhex = make_game("separed_teamhex", &params(&[("n", ParamValue::Int(4))])).unwrap();
        let joined = "..../00../.222/.... s0";
        assert!(connection_check(&teamhex, joined, ConnectionTarget::Team(0)).unwrap());
        assert!(!connection_check(&teamhex, joined, ConnectionTarget::Team(1)).unwrap());
        assert!(
            !connection_check(&teamhex, joined, ConnectionTarget::Player(PlayerId(0))).unwrap()
        );
        let fish = make_game("hey_fish", &GameParams::new()).unwrap();
        assert!(matches!(
            connection_check(&fish, "x", ConnectionTarget::Player(PlayerId(0))),
            Err(GameError::BadConfig(_))
        ));
    }

    #[test]
    fn perft_dispatches_on_any_game() {
        let g = make_game("threehex", &params(&[("side", ParamValue::Int(2))])).unwrap();
        assert_eq!(perft_check(&g, None, 0).unwrap(), 1);
        assert_eq!(perft_check(&g, None, 1).unwrap(), 7);
        let q = make_game("quadrothello", &params(&[("n", ParamValue::Int(6))])).unwrap();
        let first = with_game!(&q, |game| game
            .legal_actions(&game.initial_state())
            .unwrap()
            .len() as u64);
        assert_eq!(perft_check(&q, None, 1).unwrap(), first);
    }
}
