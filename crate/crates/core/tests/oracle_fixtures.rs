//! Frozen expected values for the exhaustive solvers.
//!
//! The TriNim table below was computed by hand on paper (the single-heap-4
//! game has nine reachable states) before the solver existed, and is kept
//! verbatim as an independent reference.

use maxn_core::games::{Bandit, TriNim, TriNimState};
use maxn_core::oracle::{count_states, solve_maxn, solve_paranoid};
use maxn_core::{Game, PayoffVector, PlayerId};

fn e(p: usize) -> PayoffVector {
    PayoffVector::from_fn(3, |q| if q.index() == p { 1.0 } else { -1.0 })
}

fn st(tokens: u8, mover: u8, last: Option<u8>) -> TriNimState {
    TriNimState {
        heaps: vec![tokens],
        mover: PlayerId(mover),
        last_mover: last.map(PlayerId),
    }
}

/// Hand-computed solution of single-heap TriNim with 4 tokens.
///
/// "take 1" has ordinal 0, "take 2" ordinal 1. With the lowest-ordinal
/// tie-break, heap 4 is lost for the mover and won by the player two seats
/// later: the mover takes 1 (tie between two losing moves), the next player
/// faces heap 3 which is also lost for them, and the third player wins from
/// heap 2 by taking both tokens.
#[rustfmt::skip]
fn hand_table() -> Vec<(TriNimState, PayoffVector, Option<u16>)> {
    vec![
        (st(4, 0, None),    e(2), Some(0)),
        (st(3, 1, Some(0)), e(2), Some(0)),
        (st(2, 1, Some(0)), e(1), Some(1)),
        (st(2, 2, Some(1)), e(2), Some(1)),
        (st(1, 2, Some(1)), e(2), Some(0)),
        (st(1, 0, Some(2)), e(0), Some(0)),
        (st(0, 2, Some(1)), e(1), None),
        (st(0, 0, Some(2)), e(2), None),
        (st(0, 1, Some(0)), e(0), None),
    ]
}

#[test]
fn trinim_heap4_matches_hand_computation() {
    let game = TriNim::new(&[4]).unwrap();
    let table = solve_maxn(&game, &game.initial_state(), 1000).unwrap();
    let hand = hand_table();
    assert_eq!(table.len(), hand.len(), "reachable state count");
    for (state, value, best) in hand {
        let entry = table
            .get(game.zobrist_key(&state))
            .unwrap_or_else(|| panic!("state {state:?} missing from the solve"));
        assert_eq!(entry.value, value, "value of {state:?}");
        assert_eq!(entry.best, best, "best action of {state:?}");
    }
}

#[test]
fn trinim_heap4_state_census() {
    let game = TriNim::new(&[4]).unwrap();
    let count = count_states(&game, &game.initial_state(), 1000).unwrap();
    assert_eq!(count.states, 9);
    assert_eq!(count.distinct_keys, 9);
}

#[test]
fn trinim_heap2_is_a_first_player_win() {
    let game = TriNim::new(&[2]).unwrap();
    let table = solve_maxn(&game, &game.initial_state(), 1000).unwrap();
    let root = table.get(game.zobrist_key(&game.initial_state())).unwrap();
    assert_eq!(root.value, e(0));
    assert_eq!(root.best, Some(1));

    let paranoid = solve_paranoid(&game, &game.initial_state(), PlayerId(0), 1000).unwrap();
    let entry = paranoid.get(game.zobrist_key(&game.initial_state())).unwrap();
    assert_eq!(entry.value, 1.0);
    assert_eq!(entry.best, Some(1));
}

#[test]
fn trinim_heap4_is_paranoid_loss_for_everyone_at_the_root() {
    // Under joint minimisation the heap-4 mover still loses: every line
    // gives the opponents the last token.
    let game = TriNim::new(&[4]).unwrap();
    let paranoid = solve_paranoid(&game, &game.initial_state(), PlayerId(0), 1000).unwrap();
    let entry = paranoid.get(game.zobrist_key(&game.initial_state())).unwrap();
    assert_eq!(entry.value, -1.0);
}

#[test]
fn bandit_census_is_arms_plus_one() {
    let arms = vec![
        PayoffVector::new(&[0.1, 0.2, 0.3]),
        PayoffVector::new(&[0.5, 0.4, 0.3]),
        PayoffVector::new(&[0.2, 0.2, 0.2]),
        PayoffVector::new(&[0.9, 0.0, 0.1]),
    ];
    let game = Bandit::new(3, arms).unwrap();
    let count = count_states(&game, &game.initial_state(), 100).unwrap();
    assert_eq!(count.states, 5);
}

#[test]
fn bandit_solve_picks_the_mover_best_arm() {
    let arms = vec![
        PayoffVector::new(&[0.1, 0.2, 0.3]),
        PayoffVector::new(&[0.5, 0.4, 0.3]),
        PayoffVector::new(&[0.5, 0.9, 0.2]),
    ];
    let game = Bandit::new(3, arms).unwrap();
    let table = solve_maxn(&game, &game.initial_state(), 100).unwrap();
    let root = table.get(game.zobrist_key(&game.initial_state())).unwrap();
    // Arms 1 and 2 tie on the mover's component; lowest ordinal wins.
    assert_eq!(root.best, Some(1));
    assert_eq!(root.value, PayoffVector::new(&[0.5, 0.4, 0.3]));
}

#[test]
fn oracle_cap_is_enforced() {
    let game = TriNim::new(&[8, 8]).unwrap();
    let err = solve_maxn(&game, &game.initial_state(), 10).unwrap_err();
    assert!(matches!(
        err,
        maxn_core::oracle::OracleError::CapExceeded { cap: 10 }
    ));
}
