//! Threehex: three-player hex connection with two-high stacking.
//!
//! Players own opposite side pairs of a hexagon-shaped board, as in
//! 3-Player Hex. Besides placing on an empty cell, the mover may place on
//! top of a single stone belonging to the one opponent who is not next in
//! turn, so stacks are at most two high and a covered stone still counts
//! toward its owner's connection. A player with no placement must pass;
//! three consecutive passes end the game in a draw.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::game::{Game, GameError};
use crate::games::hexgrid::HexHexBoard;
use crate::payoff::{PayoffVector, PlayerId};
use crate::zobrist::{FeatureStream, ZobristKey};

pub const THREEHEX_PLAYERS: usize = 3;

/// Cell contents: 0 empty, 1..=3 a single stone of player v-1, 4..=6 a
/// stack whose bottom is player v-4 (its top is always the player allowed
/// to cover that bottom, (v-4+1) mod 3).
const SINGLE: u8 = 1;
const STACK: u8 = 4;

fn stack_top(bottom: u8) -> u8 {
    (bottom + 1) % 3
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ThreehexState {
    cells: Vec<u8>,
    mover: PlayerId,
    /// Consecutive passes so far; three in a row draw the game.
    passes: u8,
    outcome: Option<Option<PlayerId>>,
}

impl ThreehexState {
    pub fn winner(&self) -> Option<PlayerId> {
        self.outcome.flatten()
    }

    /// (bottom, top) owners of the cell, if occupied.
    pub fn stones(&self, idx: u16) -> Option<(PlayerId, Option<PlayerId>)> {
        match self.cells[idx as usize] {
            0 => None,
            v if v < STACK => Some((PlayerId(v - SINGLE), None)),
            v => {
                let bottom = v - STACK;
                Some((PlayerId(bottom), Some(PlayerId(stack_top(bottom)))))
            }
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ThreehexAction {
    /// Place on an empty cell or on a coverable single stone.
    Place(u16),
    /// Only legal when no placement exists.
    Pass,
}

pub struct Threehex {
    board: HexHexBoard,
    cell_features: Vec<[u64; 6]>,
    mover_features: [u64; THREEHEX_PLAYERS],
    pass_features: [u64; 4],
}

impl Threehex {
    pub fn new(side: u32) -> Result<Threehex, GameError> {
        if !(2..=16).contains(&side) {
            return Err(GameError::BadConfig("threehex needs side 2..=16".to_string()));
        }
        let board = HexHexBoard::new(side);
        let mut stream = FeatureStream::new(&format!("threehex:{side}"));
        let cell_features = (0..board.cell_count())
            .map(|_| {
                let mut f = [0u64; 6];
                for v in &mut f {
                    *v = stream.next_value();
                }
                f
            })
            .collect();
        let mut mover_features = [0u64; THREEHEX_PLAYERS];
        for v in &mut mover_features {
            *v = stream.next_value();
        }
        let mut pass_features = [0u64; 4];
        for v in &mut pass_features {
            *v = stream.next_value();
        }
        Ok(Threehex {
            board,
            cell_features,
            mover_features,
            pass_features,
        })
    }

    pub fn board(&self) -> &HexHexBoard {
        &self.board
    }

    /// Whether the cell counts for `player`'s connection (single stone,
    /// stack bottom or stack top).
    fn counts_for(v: u8, player: u8) -> bool {
        match v {
            0 => false,
            v if v < STACK => v - SINGLE == player,
            v => {
                let bottom = v - STACK;
                bottom == player || stack_top(bottom) == player
            }
        }
    }

    /// Whether `player` may place on a cell currently holding `v`: empty, or
    /// a single stone of the opponent who is not next in turn after them.
    fn placeable(v: u8, player: u8) -> bool {
        v == 0 || v == SINGLE + (player + 2) % 3
    }

    fn placements(&self, state: &ThreehexState, player: u8) -> Vec<ThreehexAction> {
        (0..state.cells.len() as u16)
            .filter(|&i| Self::placeable(state.cells[i as usize], player))
            .map(ThreehexAction::Place)
            .collect()
    }

    /// Whether `player`'s stones (covered ones included) join their pair of
    /// opposite sides.
    pub fn connected(&self, state: &ThreehexState, player: PlayerId) -> bool {
        self.board.sides_connected(
            |i| Self::counts_for(state.cells[i as usize], player.0),
            player.index(),
            player.index() + 3,
        )
    }

    fn place(
        &self,
        state: &ThreehexState,
        player: u8,
        cell: u16,
    ) -> Result<Vec<u8>, GameError> {
        let idx = cell as usize;
        if idx >= state.cells.len() {
            return Err(GameError::IllegalAction(format!("no cell {cell}")));
        }
        let v = state.cells[idx];
        if !Self::placeable(v, player) {
            return Err(GameError::IllegalAction(
                "cell is neither empty nor a coverable single stone".to_string(),
            ));
        }
        let mut cells = state.cells.clone();
        cells[idx] = if v == 0 {
            SINGLE + player
        } else {
            // Covering the stone of player (player+2)%3; the stack encodes
            // its bottom.
            STACK + (v - SINGLE)
        };
        Ok(cells)
    }
}

impl Game for Threehex {
    type State = ThreehexState;
    type Action = ThreehexAction;

    fn name(&self) -> &str {
        "threehex"
    }

    fn player_count(&self) -> usize {
        THREEHEX_PLAYERS
    }

    fn initial_state(&self) -> ThreehexState {
        ThreehexState {
            cells: alloc::vec![0; self.board.cell_count()],
            mover: PlayerId(0),
            passes: 0,
            outcome: None,
        }
    }

    fn is_terminal(&self, state: &ThreehexState) -> bool {
        state.outcome.is_some()
    }

    fn current_player(&self, state: &ThreehexState) -> Result<PlayerId, GameError> {
        if self.is_terminal(state) {
            return Err(GameError::Terminal);
        }
        Ok(state.mover)
    }

    fn legal_actions(&self, state: &ThreehexState) -> Result<Vec<ThreehexAction>, GameError> {
        if self.is_terminal(state) {
            return Err(GameError::Terminal);
        }
        let placements = self.placements(state, state.mover.0);
        if placements.is_empty() {
            Ok(alloc::vec![ThreehexAction::Pass])
        } else {
            Ok(placements)
        }
    }

    fn apply(
        &self,
        state: &ThreehexState,
        action: ThreehexAction,
    ) -> Result<ThreehexState, GameError> {
        if self.is_terminal(state) {
            return Err(GameError::Terminal);
        }
        match action {
            ThreehexAction::Pass => {
                if !self.placements(state, state.mover.0).is_empty() {
                    return Err(GameError::IllegalAction(
                        "pass is only legal without a placement".to_string(),
                    ));
                }
                let passes = state.passes + 1;
                Ok(ThreehexState {
                    cells: state.cells.clone(),
                    mover: state.mover.next(THREEHEX_PLAYERS),
                    passes,
                    outcome: if passes >= 3 { Some(None) } else { None },
                })
            }
            ThreehexAction::Place(cell) => {
                let cells = self.place(state, state.mover.0, cell)?;
                let mut next = ThreehexState {
                    cells,
                    mover: state.mover.next(THREEHEX_PLAYERS),
                    passes: 0,
                    outcome: None,
                };
                if self.connected(&next, state.mover) {
                    next.outcome = Some(Some(state.mover));
                }
                Ok(next)
            }
        }
    }

    fn terminal_payoff(&self, state: &ThreehexState) -> Result<PayoffVector, GameError> {
        match state.outcome {
            None => Err(GameError::NotTerminal),
            Some(None) => Ok(PayoffVector::zeros(THREEHEX_PLAYERS)),
            Some(Some(winner)) => Ok(PayoffVector::from_fn(THREEHEX_PLAYERS, |p| {
                if p == winner {
                    1.0
                } else {
                    -1.0
                }
            })),
        }
    }

    fn zobrist_key(&self, state: &ThreehexState) -> ZobristKey {
        let mut key = self.mover_features[state.mover.index()]
            ^ self.pass_features[state.passes.min(3) as usize];
        for (i, &v) in state.cells.iter().enumerate() {
            if v != 0 {
                key ^= self.cell_features[i][(v - 1) as usize];
            }
        }
        ZobristKey(key)
    }

    fn progress_measure(&self, state: &ThreehexState) -> u64 {
        let stones: u64 = state
            .cells
            .iter()
            .map(|&v| match v {
                0 => 0,
                v if v < STACK => 1,
                _ => 2,
            })
            .sum();
        4 * stones + state.passes as u64
    }

    fn supports_out_of_turn(&self) -> bool {
        true
    }

    fn out_of_turn_actions(
        &self,
        state: &ThreehexState,
        player: PlayerId,
    ) -> Result<Vec<ThreehexAction>, GameError> {
        if self.is_terminal(state) {
            return Err(GameError::Terminal);
        }
        Ok(self.placements(state, player.0))
    }

    fn apply_out_of_turn(
        &self,
        state: &ThreehexState,
        player: PlayerId,
        action: ThreehexAction,
    ) -> Result<ThreehexState, GameError> {
        if self.is_terminal(state) {
            return Err(GameError::Terminal);
        }
        let cell = match action {
            ThreehexAction::Place(cell) => cell,
            ThreehexAction::Pass => {
                return Err(GameError::IllegalAction(
                    "out-of-turn moves are placements".to_string(),
                ))
            }
        };
        let cells = self.place(state, player.0, cell)?;
        let mut next = ThreehexState {
            cells,
            mover: state.mover,
            passes: 0,
            outcome: None,
        };
        if self.connected(&next, player) {
            next.outcome = Some(Some(player));
        }
        Ok(next)
    }

    fn encode_state(&self, state: &ThreehexState) -> String {
        let mut out = String::new();
        let mut prev_r = None;
        for (i, &(_, r)) in self.board.cells().iter().enumerate() {
            if prev_r.is_some() && prev_r != Some(r) {
                out.push('/');
            }
            prev_r = Some(r);
            out.push(match state.cells[i] {
                0 => '.',
                v if v < STACK => (b'0' + v - SINGLE) as char,
                v => (b'A' + v - STACK) as char,
            });
        }
        format!("{out} m{} p{}", state.mover, state.passes)
    }

    fn parse_state(&self, text: &str) -> Result<ThreehexState, GameError> {
        let bad = |m: &str| GameError::ParseError(m.to_string());
        let mut parts = text.split_whitespace();
        let rows = parts.next().ok_or_else(|| bad("missing board"))?;
        let mover_part = parts.next().ok_or_else(|| bad("missing mover"))?;
        let pass_part = parts.next().ok_or_else(|| bad("missing pass counter"))?;
        let mut cells = Vec::with_capacity(self.board.cell_count());
        for ch in rows.chars() {
            match ch {
                '/' => {}
                '.' => cells.push(0),
                '0'..='2' => cells.push(SINGLE + ch as u8 - b'0'),
                'A'..='C' => cells.push(STACK + ch as u8 - b'A'),
                _ => return Err(bad("cells must be '.', '0'..'2' or 'A'..'C'")),
            }
        }
        if cells.len() != self.board.cell_count() {
            return Err(bad("wrong cell count for this board"));
        }
        let mover: u8 = mover_part
            .strip_prefix('m')
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad("mover field must be m<digit>"))?;
        if mover as usize >= THREEHEX_PLAYERS {
            return Err(bad("mover out of range"));
        }
        let passes: u8 = pass_part
            .strip_prefix('p')
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad("pass field must be p<count>"))?;
        if passes > 3 {
            return Err(bad("pass counter out of range"));
        }
        let mut state = ThreehexState {
            cells,
            mover: PlayerId(mover),
            passes,
            outcome: None,
        };
        let winner = (0..THREEHEX_PLAYERS as u8)
            .map(PlayerId)
            .find(|&p| self.connected(&state, p));
        state.outcome = match winner {
            Some(p) => Some(Some(p)),
            None if passes >= 3 => Some(None),
            None => None,
        };
        Ok(state)
    }

    fn action_text(&self, _state: &ThreehexState, action: ThreehexAction) -> String {
        match action {
            ThreehexAction::Pass => "pass".to_string(),
            ThreehexAction::Place(cell) => {
                let (q, r) = self.board.coords(cell);
                format!("({q},{r})")
            }
        }
    }
}

impl crate::eval::HeuristicGame for Threehex {
    fn heuristic_family(&self) -> &'static str {
        "connectivity"
    }

    fn base_weights(&self) -> Vec<f64> {
        alloc::vec![1.0]
    }

    /// Connection-potential differential, counting both free cells and
    /// coverable enemy singles as one placement each.
    fn heuristic(&self, state: &ThreehexState, weights: &[f64]) -> PayoffVector {
        let blocked_cost = self.board.cell_count() as u32 + 1;
        let mut need = [0u32; THREEHEX_PLAYERS];
        for p in 0..THREEHEX_PLAYERS {
            let player = p as u8;
            need[p] = self
                .board
                .connection_cost(
                    |i| {
                        let v = state.cells[i as usize];
                        if Threehex::counts_for(v, player) {
                            Some(0)
                        } else if Threehex::placeable(v, player) {
                            Some(1)
                        } else {
                            None
                        }
                    },
                    p,
                    p + 3,
                )
                .unwrap_or(blocked_cost);
        }
        let scale = self.board.side_len() as f64;
        PayoffVector::from_fn(THREEHEX_PLAYERS, |p| {
            let rival = (0..THREEHEX_PLAYERS)
                .filter(|&q| q != p.index())
                .map(|q| need[q])
                .min()
                .unwrap();
            weights[0] * (rival as f64 - need[p.index()] as f64) / scale
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::perft;

    fn side2() -> Threehex {
        Threehex::new(2).unwrap()
    }

    #[test]
    fn side_seven_board_has_127_cells() {
        let g = Threehex::new(7).unwrap();
        assert_eq!(g.legal_actions(&g.initial_state()).unwrap().len(), 127);
    }

    #[test]
    fn perft_on_the_small_board() {
        let g = side2();
        let s = g.initial_state();
        assert_eq!(perft(&g, &s, 0), 1);
        assert_eq!(perft(&g, &s, 1), 7);
    }

    #[test]
    fn stacking_is_allowed_only_on_the_previous_player() {
        let g = side2();
        let mut s = g.initial_state();
        s = g.apply(&s, ThreehexAction::Place(3)).unwrap(); // p0 single
        s = g.apply(&s, ThreehexAction::Place(0)).unwrap(); // p1 single
        s = g.apply(&s, ThreehexAction::Place(6)).unwrap(); // p2 single
        // Player 0 may cover player 2's stone but not player 1's.
        let actions = g.legal_actions(&s).unwrap();
        assert!(actions.contains(&ThreehexAction::Place(6)));
        assert!(!actions.contains(&ThreehexAction::Place(0)));
        assert!(!actions.contains(&ThreehexAction::Place(3)));
        let err = g.apply(&s, ThreehexAction::Place(0)).unwrap_err();
        assert!(matches!(err, GameError::IllegalAction(_)));
        let next = g.apply(&s, ThreehexAction::Place(6)).unwrap();
        assert_eq!(
            next.stones(6),
            Some((PlayerId(2), Some(PlayerId(0))))
        );
    }

    #[test]
    fn covered_stones_still_connect() {
        let g = side2();
        let mut s = g.initial_state();
        s = g.apply(&s, ThreehexAction::Place(0)).unwrap(); // p0 (0,-1)
        s = g.apply(&s, ThreehexAction::Place(0)).unwrap(); // p1 covers p0
        s = g.apply(&s, ThreehexAction::Place(2)).unwrap(); // p2
        s = g.apply(&s, ThreehexAction::Place(3)).unwrap(); // p0 (0,0)
        s = g.apply(&s, ThreehexAction::Place(4)).unwrap(); // p1
        s = g.apply(&s, ThreehexAction::Place(5)).unwrap(); // p2
        s = g.apply(&s, ThreehexAction::Place(6)).unwrap(); // p0 (0,1)
        assert!(g.is_terminal(&s));
        assert_eq!(s.winner(), Some(PlayerId(0)));
        assert_eq!(
            g.terminal_payoff(&s).unwrap(),
            PayoffVector::new(&[1.0, -1.0, -1.0])
        );
    }

    #[test]
    fn three_passes_draw_the_game() {
        let g = side2();
        // Every cell stacked, and each player's own sides are walled off by
        // the one stack type that does not count for them: nobody can place
        // and nobody is connected.
        let mut s = g.parse_state("BB/CAA/CA m0 p0").unwrap();
        assert!(!g.is_terminal(&s));
        for expected_passes in 1..=3u8 {
            assert_eq!(g.legal_actions(&s).unwrap(), [ThreehexAction::Pass]);
            s = g.apply(&s, ThreehexAction::Pass).unwrap();
            assert_eq!(s.passes, expected_passes);
        }
        assert!(g.is_terminal(&s));
        assert_eq!(g.terminal_payoff(&s).unwrap(), PayoffVector::zeros(3));
    }

    #[test]
    fn out_of_turn_placement_keeps_the_mover() {
        let g = side2();
        let s = g.initial_state();
        let actions = g.out_of_turn_actions(&s, PlayerId(2)).unwrap();
        assert_eq!(actions.len(), 7);
        let next = g
            .apply_out_of_turn(&s, PlayerId(2), ThreehexAction::Place(4))
            .unwrap();
        assert_eq!(next.mover, PlayerId(0));
        assert_eq!(next.stones(4), Some((PlayerId(2), None)));
    }

    #[test]
    fn state_text_roundtrip() {
        let g = side2();
        let mut s = g.initial_state();
        s = g.apply(&s, ThreehexAction::Place(1)).unwrap();
        s = g.apply(&s, ThreehexAction::Place(1)).unwrap();
        let text = g.encode_state(&s);
        assert_eq!(text, ".A/.../.. m2 p0");
        assert_eq!(g.parse_state(&text).unwrap(), s);
    }
}
