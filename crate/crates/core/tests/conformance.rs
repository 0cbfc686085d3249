//! Shared conformance suite: every registered game, played out under a
//! seeded policy, must honor the whole game contract at every ply.

use maxn_core::game::{Game, GameError};
use maxn_core::games::{make_game, GameParams, ParamValue, GAME_NAMES};
use maxn_core::with_game;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Desk-scale parameters keeping random playouts short.
fn desk_params(name: &str) -> GameParams {
    let pairs: &[(&str, ParamValue)] = match name {
        "three_player_hex" | "threehex" => &[("side", ParamValue::Int(3))],
        "separed_teamhex" => &[("n", ParamValue::Int(6))],
        "quadamazons" => &[("n", ParamValue::Int(6)), ("d", ParamValue::Int(1))],
        "quadrothello" => &[("n", ParamValue::Int(6))],
        "triinversion" => &[("l", ParamValue::Int(3))],
        "hey_fish" => &[
            ("rows", ParamValue::Int(4)),
            ("cols", ParamValue::Int(4)),
            ("penguins", ParamValue::Int(1)),
        ],
        _ => &[],
    };
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

/// Play `seeds` random games, checking the contract at every ply and
/// feeding each transition to a per-game invariant.
fn run_conformance<G: Game>(
    game: &G,
    seeds: std::ops::Range<u64>,
    max_plies: u32,
    mut invariant: impl FnMut(&G::State, &G::State),
) {
    for seed in seeds {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut state = game.initial_state();
        let mut plies = 0u32;
        while !game.is_terminal(&state) {
            assert!(
                matches!(game.terminal_payoff(&state), Err(GameError::NotTerminal)),
                "{}: payoff must refuse non-terminal states",
                game.name()
            );
            let mover = game.current_player(&state).unwrap();
            assert!(mover.index() < game.player_count());
            let actions = game.legal_actions(&state).unwrap();
            assert!(
                !actions.is_empty(),
                "{}: non-terminal state with no actions",
                game.name()
            );
            let action = actions[rng.gen_range(0..actions.len())];
            let child = game.apply(&state, action).unwrap();
            assert_eq!(
                child,
                game.apply(&state, action).unwrap(),
                "{}: apply must be deterministic",
                game.name()
            );
            assert!(
                game.progress_measure(&child) > game.progress_measure(&state),
                "{}: progress must strictly increase",
                game.name()
            );
            assert_ne!(
                game.zobrist_key(&child),
                game.zobrist_key(&state),
                "{}: a move must change the hash",
                game.name()
            );
            let text = game.encode_state(&child);
            assert_eq!(
                game.parse_state(&text).unwrap(),
                child,
                "{}: state text must roundtrip",
                game.name()
            );
            invariant(&state, &child);
            state = child;
            plies += 1;
            assert!(plies <= max_plies, "{}: playout too long", game.name());
        }
        assert!(matches!(
            game.current_player(&state),
            Err(GameError::Terminal)
        ));
        assert!(matches!(
            game.legal_actions(&state),
            Err(GameError::Terminal)
        ));
        let payoff = game.terminal_payoff(&state).unwrap();
        assert_eq!(payoff.len(), game.player_count());
        assert!(payoff.components().iter().all(|v| v.is_finite()));
        let wl = game.win_loss_vector(&state).unwrap();
        assert!(wl
            .components()
            .iter()
            .all(|&v| v == -1.0 || v == 0.0 || v == 1.0));
        // Ties aside, someone tops the ranking.
        assert!(wl.components().iter().any(|&v| v >= 0.0));
    }
}

#[test]
fn every_game_honors_the_contract_in_random_play() {
    for name in GAME_NAMES {
        let any = make_game(name, &desk_params(name)).unwrap();
        with_game!(&any, |g| run_conformance(g, 0..12, 400, |_, _| {}));
    }
}

#[test]
fn out_of_turn_probing_respects_the_capability_flag() {
    for name in GAME_NAMES {
        let any = make_game(name, &desk_params(name)).unwrap();
        with_game!(&any, |g| {
            let state = g.initial_state();
            let mover = g.current_player(&state).unwrap();
            let rival = maxn_core::payoff::PlayerId(
                ((mover.index() + 1) % g.player_count()) as u8,
            );
            if g.supports_out_of_turn() {
                let probes = g.out_of_turn_actions(&state, rival).unwrap();
                assert!(!probes.is_empty(), "{name}: rival has no probe at the start");
                let probed = g.apply_out_of_turn(&state, rival, probes[0]).unwrap();
                assert!(
                    g.progress_measure(&probed) > g.progress_measure(&state),
                    "{name}: probing must make progress"
                );
            } else {
                assert!(matches!(
                    g.out_of_turn_actions(&state, rival),
                    Err(GameError::OutOfTurnUnsupported)
                ));
            }
        });
    }
}

#[test]
fn stones_are_never_removed_in_the_inversion_games() {
    for (name, side_key, side) in [("quadrothello", "n", 6), ("triinversion", "l", 3)] {
        let mut params = GameParams::new();
        params.insert(side_key.to_string(), ParamValue::Int(side));
        let any = make_game(name, &params).unwrap();
        match any {
            maxn_core::games::AnyGame::Quadrothello(g) => {
                run_conformance(&g, 0..8, 200, |parent, child| {
                    let before: u32 = parent.stone_counts().iter().sum();
                    let after: u32 = child.stone_counts().iter().sum();
                    assert_eq!(after, before + 1, "a placement adds exactly one stone");
                });
            }
            maxn_core::games::AnyGame::Triinversion(g) => {
                run_conformance(&g, 0..8, 200, |parent, child| {
                    let before: u32 = parent.piece_counts().iter().sum();
                    let after: u32 = child.piece_counts().iter().sum();
                    assert!(after >= before, "pieces change owner, never vanish");
                });
            }
            _ => unreachable!(),
        }
    }
}

#[test]
fn quadamazons_pieces_never_leave_the_board() {
    let mut params = GameParams::new();
    params.insert("n".to_string(), ParamValue::Int(6));
    params.insert("d".to_string(), ParamValue::Int(1));
    let maxn_core::games::AnyGame::Quadamazons(g) = make_game("quadamazons", &params).unwrap()
    else {
        panic!("wrong variant");
    };
    run_conformance(&g, 0..8, 400, |parent, child| {
        assert!(child.arrow_count() >= parent.arrow_count());
        let amazons = |s: &maxn_core::games::QuadamazonsState| {
            (0..36u16).filter(|&i| matches!(s.cell(i), 1..=4)).count()
        };
        assert_eq!(amazons(child), 16);
        assert_eq!(amazons(parent), 16);
    });
}

#[test]
fn heyfish_banks_and_board_conserve_the_deal() {
    let maxn_core::games::AnyGame::HeyFish(g) =
        make_game("hey_fish", &desk_params("hey_fish")).unwrap()
    else {
        panic!("wrong variant");
    };
    let dealt = g.initial_state().board_fish();
    run_conformance(&g, 0..8, 200, |_, child| {
        let banked: u32 = child.scores().iter().map(|&v| u32::from(v)).sum();
        assert_eq!(child.board_fish() + banked, dealt);
    });
}

#[test]
fn threehex_stacks_stay_legal() {
    let maxn_core::games::AnyGame::Threehex(g) =
        make_game("threehex", &desk_params("threehex")).unwrap()
    else {
        panic!("wrong variant");
    };
    run_conformance(&g, 0..8, 200, |_, child| {
        for idx in 0..19u16 {
            if let Some((bottom, top)) = child.stones(idx) {
                if let Some(top) = top {
                    assert_ne!(top, bottom, "stack owners must differ");
                }
            }
        }
    });
}
