//! 3-Player Hex on a hexagon-shaped board.
//!
//! Each player owns one of the three pairs of opposite board sides and tries
//! to join their pair with an unbroken chain of their own stones. The game is
//! a draw as soon as none of the three players can still potentially connect
//! (own stones plus empty cells), which also covers a full board without a
//! winner. Terminal values are the plain win/loss vector.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::game::{Game, GameError};
use crate::games::hexgrid::HexHexBoard;
use crate::payoff::{PayoffVector, PlayerId};
use crate::zobrist::{FeatureStream, ZobristKey};

pub const HEX_PLAYERS: usize = 3;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ThreePlayerHexState {
    /// 0 empty, 1 + p for a stone of player p. Row-major board order.
    cells: Vec<u8>,
    mover: PlayerId,
    /// `Some(Some(p))` once p has connected, `Some(None)` for the blocked
    /// draw. Derived from the board; cached at construction.
    outcome: Option<Option<PlayerId>>,
}

impl ThreePlayerHexState {
    pub fn cell(&self, idx: u16) -> Option<PlayerId> {
        match self.cells[idx as usize] {
            0 => None,
            v => Some(PlayerId(v - 1)),
        }
    }

    pub fn winner(&self) -> Option<PlayerId> {
        self.outcome.flatten()
    }
}

/// Place a stone on the cell with this board index.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ThreePlayerHexAction(pub u16);

pub struct ThreePlayerHex {
    board: HexHexBoard,
    cell_features: Vec<[u64; HEX_PLAYERS]>,
    mover_features: [u64; HEX_PLAYERS],
}

impl ThreePlayerHex {
    pub fn new(side: u32) -> Result<ThreePlayerHex, GameError> {
        if !(2..=16).contains(&side) {
            return Err(GameError::BadConfig(
                "three_player_hex needs side 2..=16".to_string(),
            ));
        }
        let board = HexHexBoard::new(side);
        let mut stream = FeatureStream::new(&format!("three_player_hex:{side}"));
        let cell_features = (0..board.cell_count())
            .map(|_| [stream.next_value(), stream.next_value(), stream.next_value()])
            .collect();
        let mover_features = [stream.next_value(), stream.next_value(), stream.next_value()];
        Ok(ThreePlayerHex {
            board,
            cell_features,
            mover_features,
        })
    }

    pub fn board(&self) -> &HexHexBoard {
        &self.board
    }

    /// Whether `player`'s stones join their pair of opposite sides.
    pub fn connected(&self, state: &ThreePlayerHexState, player: PlayerId) -> bool {
        let own = 1 + player.0;
        self.board.sides_connected(
            |i| state.cells[i as usize] == own,
            player.index(),
            player.index() + 3,
        )
    }

    /// Whether `player` could still connect using their stones plus every
    /// currently empty cell.
    pub fn can_potentially_connect(&self, state: &ThreePlayerHexState, player: PlayerId) -> bool {
        let own = 1 + player.0;
        self.board.sides_connected(
            |i| {
                let v = state.cells[i as usize];
                v == 0 || v == own
            },
            player.index(),
            player.index() + 3,
        )
    }

    fn outcome_after(&self, state: &ThreePlayerHexState, placer: PlayerId) -> Option<Option<PlayerId>> {
        if self.connected(state, placer) {
            return Some(Some(placer));
        }
        let blocked = (0..HEX_PLAYERS as u8)
            .all(|p| !self.can_potentially_connect(state, PlayerId(p)));
        if blocked {
            Some(None)
        } else {
            None
        }
    }

    fn place(
        &self,
        state: &ThreePlayerHexState,
        player: PlayerId,
        action: ThreePlayerHexAction,
    ) -> Result<Vec<u8>, GameError> {
        let idx = action.0 as usize;
        if idx >= state.cells.len() {
            return Err(GameError::IllegalAction(format!("no cell {}", action.0)));
        }
        if state.cells[idx] != 0 {
            return Err(GameError::IllegalAction("cell is occupied".to_string()));
        }
        let mut cells = state.cells.clone();
        cells[idx] = 1 + player.0;
        Ok(cells)
    }
}

impl Game for ThreePlayerHex {
    type State = ThreePlayerHexState;
    type Action = ThreePlayerHexAction;

    fn name(&self) -> &str {
        "three_player_hex"
    }

    fn player_count(&self) -> usize {
        HEX_PLAYERS
    }

    fn initial_state(&self) -> ThreePlayerHexState {
        ThreePlayerHexState {
            cells: alloc::vec![0; self.board.cell_count()],
            mover: PlayerId(0),
            outcome: None,
        }
    }

    fn is_terminal(&self, state: &ThreePlayerHexState) -> bool {
        state.outcome.is_some()
    }

    fn current_player(&self, state: &ThreePlayerHexState) -> Result<PlayerId, GameError> {
        if self.is_terminal(state) {
            return Err(GameError::Terminal);
        }
        Ok(state.mover)
    }

    fn legal_actions(
        &self,
        state: &ThreePlayerHexState,
    ) -> Result<Vec<ThreePlayerHexAction>, GameError> {
        if self.is_terminal(state) {
            return Err(GameError::Terminal);
        }
        Ok((0..state.cells.len() as u16)
            .filter(|&i| state.cells[i as usize] == 0)
            .map(ThreePlayerHexAction)
            .collect())
    }

    fn apply(
        &self,
        state: &ThreePlayerHexState,
        action: ThreePlayerHexAction,
    ) -> Result<ThreePlayerHexState, GameError> {
        if self.is_terminal(state) {
            return Err(GameError::Terminal);
        }
        let cells = self.place(state, state.mover, action)?;
        let mut next = ThreePlayerHexState {
            cells,
            mover: state.mover.next(HEX_PLAYERS),
            outcome: None,
        };
        next.outcome = self.outcome_after(&next, state.mover);
        Ok(next)
    }

    fn terminal_payoff(&self, state: &ThreePlayerHexState) -> Result<PayoffVector, GameError> {
        match state.outcome {
            None => Err(GameError::NotTerminal),
            Some(None) => Ok(PayoffVector::zeros(HEX_PLAYERS)),
            Some(Some(winner)) => Ok(PayoffVector::from_fn(HEX_PLAYERS, |p| {
                if p == winner {
                    1.0
                } else {
                    -1.0
                }
            })),
        }
    }

    fn zobrist_key(&self, state: &ThreePlayerHexState) -> ZobristKey {
        let mut key = self.mover_features[state.mover.index()];
        for (i, &v) in state.cells.iter().enumerate() {
            if v != 0 {
                key ^= self.cell_features[i][(v - 1) as usize];
            }
        }
        ZobristKey(key)
    }

    fn progress_measure(&self, state: &ThreePlayerHexState) -> u64 {
        state.cells.iter().filter(|&&v| v != 0).count() as u64
    }

    fn supports_out_of_turn(&self) -> bool {
        true
    }

    fn out_of_turn_actions(
        &self,
        state: &ThreePlayerHexState,
        _player: PlayerId,
    ) -> Result<Vec<ThreePlayerHexAction>, GameError> {
        // Placement legality does not depend on the seat.
        self.legal_actions(state)
    }

    fn apply_out_of_turn(
        &self,
        state: &ThreePlayerHexState,
        player: PlayerId,
        action: ThreePlayerHexAction,
    ) -> Result<ThreePlayerHexState, GameError> {
        if self.is_terminal(state) {
            return Err(GameError::Terminal);
        }
        let cells = self.place(state, player, action)?;
        let mut next = ThreePlayerHexState {
            cells,
            mover: state.mover,
            outcome: None,
        };
        next.outcome = self.outcome_after(&next, player);
        Ok(next)
    }

    fn encode_state(&self, state: &ThreePlayerHexState) -> String {
        let mut out = String::new();
        let mut prev_r = None;
        for (i, &(_, r)) in self.board.cells().iter().enumerate() {
            if prev_r.is_some() && prev_r != Some(r) {
                out.push('/');
            }
            prev_r = Some(r);
            out.push(match state.cells[i] {
                0 => '.',
                v => (b'0' + v - 1) as char,
            });
        }
        format!("{out} m{}", state.mover)
    }

    fn parse_state(&self, text: &str) -> Result<ThreePlayerHexState, GameError> {
        let bad = |m: &str| GameError::ParseError(m.to_string());
        let mut parts = text.split_whitespace();
        let rows = parts.next().ok_or_else(|| bad("missing board"))?;
        let mover_part = parts.next().ok_or_else(|| bad("missing mover"))?;
        let mut cells = Vec::with_capacity(self.board.cell_count());
        for ch in rows.chars() {
            match ch {
                '/' => {}
                '.' => cells.push(0),
                '0'..='2' => cells.push(1 + ch as u8 - b'0'),
                _ => return Err(bad("cells must be '.', '0', '1' or '2'")),
            }
        }
        if cells.len() != self.board.cell_count() {
            return Err(bad("wrong cell count for this board"));
        }
        let mover: u8 = mover_part
            .strip_prefix('m')
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad("mover field must be m<digit>"))?;
        if mover as usize >= HEX_PLAYERS {
            return Err(bad("mover out of range"));
        }
        let mut state = ThreePlayerHexState {
            cells,
            mover: PlayerId(mover),
            outcome: None,
        };
        // Recompute the cached outcome: first connected player by seat
        // order, else the blocked draw.
        let winner = (0..HEX_PLAYERS as u8).map(PlayerId).find(|&p| self.connected(&state, p));
        state.outcome = match winner {
            Some(p) => Some(Some(p)),
            None => {
                if (0..HEX_PLAYERS as u8)
                    .all(|p| !self.can_potentially_connect(&state, PlayerId(p)))
                {
                    Some(None)
                } else {
                    None
                }
            }
        };
        Ok(state)
    }

    fn action_text(&self, _state: &ThreePlayerHexState, action: ThreePlayerHexAction) -> String {
        let (q, r) = self.board.coords(action.0);
        format!("({q},{r})")
    }
}

impl crate::eval::HeuristicGame for ThreePlayerHex {
    fn heuristic_family(&self) -> &'static str {
        "connectivity"
    }

    fn base_weights(&self) -> Vec<f64> {
        alloc::vec![1.0]
    }

    /// Connection-potential differential: how many more empty cells the
    /// nearest opponent still needs than the player itself.
    fn heuristic(&self, state: &ThreePlayerHexState, weights: &[f64]) -> PayoffVector {
        let blocked_cost = self.board.cell_count() as u32 + 1;
        let mut need = [0u32; HEX_PLAYERS];
        for p in 0..HEX_PLAYERS {
            let own = 1 + p as u8;
            need[p] = self
                .board
                .connection_cost(
                    |i| match state.cells[i as usize] {
                        0 => Some(1),
                        v if v == own => Some(0),
                        _ => None,
                    },
                    p,
                    p + 3,
                )
                .unwrap_or(blocked_cost);
        }
        let scale = self.board.side_len() as f64;
        PayoffVector::from_fn(HEX_PLAYERS, |p| {
            let rival = (0..HEX_PLAYERS)
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

    fn side2() -> ThreePlayerHex {
        ThreePlayerHex::new(2).unwrap()
    }

    // Board indices for side 2, in row order:
    //   0 (0,-1)  1 (1,-1)
    //   2 (-1,0)  3 (0,0)  4 (1,0)
    //   5 (-1,1)  6 (0,1)
    #[test]
    fn vertical_chain_wins_for_player_zero() {
        let g = side2();
        let mut s = g.initial_state();
        for cell in [0u16, 1, 2, 3, 4, 5] {
            s = g.apply(&s, ThreePlayerHexAction(cell)).unwrap();
            assert!(!g.is_terminal(&s));
        }
        s = g.apply(&s, ThreePlayerHexAction(6)).unwrap();
        assert!(g.is_terminal(&s));
        assert_eq!(s.winner(), Some(PlayerId(0)));
        assert_eq!(
            g.terminal_payoff(&s).unwrap(),
            PayoffVector::new(&[1.0, -1.0, -1.0])
        );
    }

    #[test]
    fn blocked_board_is_a_draw() {
        let g = side2();
        // No player can reach both of their sides through the lone empty
        // centre cell.
        let s = g.parse_state("12/1.0/02 m0").unwrap();
        assert!(g.is_terminal(&s));
        assert_eq!(s.winner(), None);
        assert_eq!(g.terminal_payoff(&s).unwrap(), PayoffVector::zeros(3));
        assert_eq!(g.win_loss_vector(&s).unwrap(), PayoffVector::zeros(3));
    }

    #[test]
    fn perft_counts_every_placement() {
        let g = side2();
        let s = g.initial_state();
        assert_eq!(perft(&g, &s, 0), 1);
        assert_eq!(perft(&g, &s, 1), 7);
        assert_eq!(perft(&g, &s, 2), 42);
        // No game on this board can end within three stones.
        assert_eq!(perft(&g, &s, 3), 210);
    }

    #[test]
    fn out_of_turn_placement_changes_board_only() {
        let g = side2();
        let s = g.initial_state();
        let next = g
            .apply_out_of_turn(&s, PlayerId(2), ThreePlayerHexAction(3))
            .unwrap();
        assert_eq!(next.cell(3), Some(PlayerId(2)));
        assert_eq!(next.mover, s.mover);
        assert!(!g.is_terminal(&next));
    }

    #[test]
    fn state_text_roundtrip() {
        let g = side2();
        let mut s = g.initial_state();
        s = g.apply(&s, ThreePlayerHexAction(3)).unwrap();
        s = g.apply(&s, ThreePlayerHexAction(0)).unwrap();
        let text = g.encode_state(&s);
        assert_eq!(text, "1./.0./.. m2");
        assert_eq!(g.parse_state(&text).unwrap(), s);
    }

    #[test]
    fn heuristic_prefers_the_player_about_to_connect() {
        let g = ThreePlayerHex::new(3).unwrap();
        // Player 0 holds the q=0 column except its middle cell.
        let mut s = g.initial_state();
        for (cell, player) in [
            (0u16, 0u8),
            (4, 0),
            (14, 0),
            (18, 0),
            (2, 1),
            (6, 1),
            (7, 2),
        ] {
            s = g
                .apply_out_of_turn(&s, PlayerId(player), ThreePlayerHexAction(cell))
                .unwrap();
        }
        let h = crate::eval::builtin_heuristic(&g);
        let v = crate::eval::evaluate(&h, &g, &s).unwrap();
        assert!(v[PlayerId(0)] > v[PlayerId(1)]);
        assert!(v[PlayerId(0)] > v[PlayerId(2)]);
    }

    #[test]
    fn connectivity_matches_a_union_find_reference() {
        let g = ThreePlayerHex::new(4).unwrap();
        let cells = g.board.cell_count();
        let mut rng = crate::zobrist::FeatureStream::new("hex-conformance");
        for _ in 0..1000 {
            let board: Vec<u8> = (0..cells).map(|_| (rng.next_value() % 4) as u8).collect();
            let state = ThreePlayerHexState {
                cells: board,
                mover: PlayerId(0),
                outcome: None,
            };
            for p in 0..3u8 {
                let player = PlayerId(p);
                assert_eq!(
                    g.connected(&state, player),
                    union_find_connected(&g, &state, p),
                );
            }
        }
    }

    /// Independent connectivity check: union-find over same-colour
    /// neighbours with two virtual side nodes.
    fn union_find_connected(g: &ThreePlayerHex, state: &ThreePlayerHexState, p: u8) -> bool {
        let n = g.board.cell_count();
        let mut parent: Vec<usize> = (0..n + 2).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            if parent[x] != x {
                let root = find(parent, parent[x]);
                parent[x] = root;
            }
            parent[x]
        }
        let union = |parent: &mut Vec<usize>, a: usize, b: usize| {
            let (ra, rb) = (find(parent, a), find(parent, b));
            parent[ra] = rb;
        };
        let own = 1 + p;
        for i in 0..n as u16 {
            if state.cells[i as usize] != own {
                continue;
            }
            if g.board.on_side(i, p as usize) {
                union(&mut parent, i as usize, n);
            }
            if g.board.on_side(i, p as usize + 3) {
                union(&mut parent, i as usize, n + 1);
            }
            for nb in g.board.neighbors(i) {
                if state.cells[nb as usize] == own {
                    union(&mut parent, i as usize, nb as usize);
                }
            }
        }
        find(&mut parent, n) == find(&mut parent, n + 1)
    }
}
