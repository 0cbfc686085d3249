//! Triinversion: three-player inversion on a hexagonal board.
//!
//! Each player has a direct opponent (the previous player in turn order)
//! and an indirect opponent. A placement must surround a line of the
//! direct opponent's pieces between the new piece and a piece that is
//! either the mover's own or the indirect opponent's; every such line is
//! converted to the mover's color. The central cell is never playable and
//! is transparent: lines continue straight across it. A player without a
//! placement passes, and three consecutive passes end the game. Final
//! score is a player's piece count plus their indirect opponent's.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::game::{Game, GameError};
use crate::games::hexgrid::{HexHexBoard, AXIAL_DIRS, NO_CELL};
use crate::payoff::{PayoffVector, PlayerId};
use crate::zobrist::{FeatureStream, ZobristKey};

pub const TRIINVERSION_PLAYERS: usize = 3;

fn direct_opponent(player: u8) -> u8 {
    (player + 2) % 3
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TriinversionState {
    /// 0 empty (the center stays 0 forever), 1..=3 a piece of player v-1.
    cells: Vec<u8>,
    mover: PlayerId,
    passes: u8,
}

impl TriinversionState {
    pub fn piece(&self, idx: u16) -> Option<PlayerId> {
        match self.cells[idx as usize] {
            0 => None,
            v => Some(PlayerId(v - 1)),
        }
    }

    pub fn piece_counts(&self) -> [u32; TRIINVERSION_PLAYERS] {
        let mut counts = [0u32; TRIINVERSION_PLAYERS];
        for &v in &self.cells {
            if v != 0 {
                counts[(v - 1) as usize] += 1;
            }
        }
        counts
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TriinversionAction {
    Place(u16),
    Pass,
}

pub struct Triinversion {
    board: HexHexBoard,
    center: u16,
    /// step[idx][dir]: the next cell along `dir`, skipping straight over
    /// the transparent center; NO_CELL past the edge.
    step: Vec<[u16; 6]>,
    cell_features: Vec<[u64; 3]>,
    mover_features: [u64; 3],
    pass_features: [u64; 4],
}

impl Triinversion {
    pub fn new(side: u32) -> Result<Triinversion, GameError> {
        if !(2..=16).contains(&side) {
            return Err(GameError::BadConfig(
                "triinversion needs side 2..=16".to_string(),
            ));
        }
        let board = HexHexBoard::new(side);
        let center = board.index_of(0, 0).unwrap();
        let step = (0..board.cell_count() as u16)
            .map(|idx| {
                let (q, r) = board.coords(idx);
                let mut row = [NO_CELL; 6];
                for (d, &(dq, dr)) in AXIAL_DIRS.iter().enumerate() {
                    let (mut nq, mut nr) = (q + dq, r + dr);
                    if (nq, nr) == (0, 0) {
                        nq += dq;
                        nr += dr;
                    }
                    row[d] = board.index_of(nq, nr).unwrap_or(NO_CELL);
                }
                row
            })
            .collect();
        let mut stream = FeatureStream::new(&format!("triinversion:{side}"));
        let cell_features = (0..board.cell_count())
            .map(|_| {
                let mut f = [0u64; 3];
                for v in &mut f {
                    *v = stream.next_value();
                }
                f
            })
            .collect();
        let mut mover_features = [0u64; 3];
        for v in &mut mover_features {
            *v = stream.next_value();
        }
        let mut pass_features = [0u64; 4];
        for v in &mut pass_features {
            *v = stream.next_value();
        }
        Ok(Triinversion {
            board,
            center,
            step,
            cell_features,
            mover_features,
            pass_features,
        })
    }

    pub fn board(&self) -> &HexHexBoard {
        &self.board
    }

    /// Pieces captured by `player` placing at `at`, in every direction.
    /// Empty means the placement is illegal.
    fn flips(&self, cells: &[u8], player: u8, at: u16) -> Vec<u16> {
        let direct = 1 + direct_opponent(player);
        let mut flipped = Vec::new();
        if at == self.center || cells[at as usize] != 0 {
            return flipped;
        }
        for d in 0..6 {
            let mut cur = self.step[at as usize][d];
            let run_start = flipped.len();
            while cur != NO_CELL && cells[cur as usize] == direct {
                flipped.push(cur);
                cur = self.step[cur as usize][d];
            }
            // The run counts only when closed by a piece, and the scan can
            // only have stopped on the mover's own or the indirect
            // opponent's.
            let closed = flipped.len() > run_start && cur != NO_CELL && cells[cur as usize] != 0;
            if !closed {
                flipped.truncate(run_start);
            }
        }
        flipped
    }

    fn placements(&self, state: &TriinversionState, player: u8) -> Vec<TriinversionAction> {
        (0..state.cells.len() as u16)
            .filter(|&i| !self.flips(&state.cells, player, i).is_empty())
            .map(TriinversionAction::Place)
            .collect()
    }

    fn place(
        &self,
        state: &TriinversionState,
        player: u8,
        cell: u16,
    ) -> Result<Vec<u8>, GameError> {
        if cell as usize >= state.cells.len() {
            return Err(GameError::IllegalAction(format!("no cell {cell}")));
        }
        let flipped = self.flips(&state.cells, player, cell);
        if flipped.is_empty() {
            return Err(GameError::IllegalAction(
                "placement must surround a line of the direct opponent".to_string(),
            ));
        }
        let mut cells = state.cells.clone();
        cells[cell as usize] = 1 + player;
        for idx in flipped {
            cells[idx as usize] = 1 + player;
        }
        Ok(cells)
    }

    pub fn scores(&self, state: &TriinversionState) -> [u32; TRIINVERSION_PLAYERS] {
        let counts = state.piece_counts();
        let mut scores = [0u32; TRIINVERSION_PLAYERS];
        for p in 0..TRIINVERSION_PLAYERS {
            scores[p] = counts[p] + counts[(p + 1) % 3];
        }
        scores
    }
}

impl Game for Triinversion {
    type State = TriinversionState;
    type Action = TriinversionAction;

    fn name(&self) -> &str {
        "triinversion"
    }

    fn player_count(&self) -> usize {
        TRIINVERSION_PLAYERS
    }

    fn initial_state(&self) -> TriinversionState {
        let mut cells = alloc::vec![0; self.board.cell_count()];
        for (k, &(dq, dr)) in AXIAL_DIRS.iter().enumerate() {
            let idx = self.board.index_of(dq, dr).unwrap();
            cells[idx as usize] = 1 + (k % 3) as u8;
        }
        TriinversionState {
            cells,
            mover: PlayerId(0),
            passes: 0,
        }
    }

    fn is_terminal(&self, state: &TriinversionState) -> bool {
        state.passes >= 3
    }

    fn current_player(&self, state: &TriinversionState) -> Result<PlayerId, GameError> {
        if self.is_terminal(state) {
            return Err(GameError::Terminal);
        }
        Ok(state.mover)
    }

    fn legal_actions(&self, state: &TriinversionState) -> Result<Vec<TriinversionAction>, GameError> {
        if self.is_terminal(state) {
            return Err(GameError::Terminal);
        }
        let placements = self.placements(state, state.mover.0);
        if placements.is_empty() {
            Ok(alloc::vec![TriinversionAction::Pass])
        } else {
            Ok(placements)
        }
    }

    fn apply(
        &self,
        state: &TriinversionState,
        action: TriinversionAction,
    ) -> Result<TriinversionState, GameError> {
        if self.is_terminal(state) {
            return Err(GameError::Terminal);
        }
        match action {
            TriinversionAction::Pass => {
                if !self.placements(state, state.mover.0).is_empty() {
                    return Err(GameError::IllegalAction(
                        "pass is only legal without a placement".to_string(),
                    ));
                }
                Ok(TriinversionState {
                    cells: state.cells.clone(),
                    mover: state.mover.next(TRIINVERSION_PLAYERS),
                    passes: state.passes + 1,
                })
            }
            TriinversionAction::Place(cell) => Ok(TriinversionState {
                cells: self.place(state, state.mover.0, cell)?,
                mover: state.mover.next(TRIINVERSION_PLAYERS),
                passes: 0,
            }),
        }
    }

    fn terminal_payoff(&self, state: &TriinversionState) -> Result<PayoffVector, GameError> {
        if !self.is_terminal(state) {
            return Err(GameError::NotTerminal);
        }
        let scores = self.scores(state);
        Ok(PayoffVector::from_fn(TRIINVERSION_PLAYERS, |p| {
            scores[p.index()] as f64
        }))
    }

    fn zobrist_key(&self, state: &TriinversionState) -> ZobristKey {
        let mut key = self.mover_features[state.mover.index()]
            ^ self.pass_features[state.passes.min(3) as usize];
        for (i, &v) in state.cells.iter().enumerate() {
            if v != 0 {
                key ^= self.cell_features[i][(v - 1) as usize];
            }
        }
        ZobristKey(key)
    }

    fn progress_measure(&self, state: &TriinversionState) -> u64 {
        let stones = state.cells.iter().filter(|&&v| v != 0).count() as u64;
        4 * stones + state.passes as u64
    }

    fn supports_out_of_turn(&self) -> bool {
        true
    }

    fn out_of_turn_actions(
        &self,
        state: &TriinversionState,
        player: PlayerId,
    ) -> Result<Vec<TriinversionAction>, GameError> {
        if self.is_terminal(state) {
            return Err(GameError::Terminal);
        }
        Ok(self.placements(state, player.0))
    }

    fn apply_out_of_turn(
        &self,
        state: &TriinversionState,
        player: PlayerId,
        action: TriinversionAction,
    ) -> Result<TriinversionState, GameError> {
        if self.is_terminal(state) {
            return Err(GameError::Terminal);
        }
        let cell = match action {
            TriinversionAction::Place(cell) => cell,
            TriinversionAction::Pass => {
                return Err(GameError::IllegalAction(
                    "out-of-turn moves are placements".to_string(),
                ))
            }
        };
        Ok(TriinversionState {
            cells: self.place(state, player.0, cell)?,
            mover: state.mover,
            passes: 0,
        })
    }

    fn encode_state(&self, state: &TriinversionState) -> String {
        let mut out = String::new();
        let mut prev_r = None;
        for (i, &(_, r)) in self.board.cells().iter().enumerate() {
            if prev_r.is_some() && prev_r != Some(r) {
                out.push('/');
            }
            prev_r = Some(r);
            out.push(if i as u16 == self.center {
                '*'
            } else {
                match state.cells[i] {
                    0 => '.',
                    v => (b'0' + v - 1) as char,
                }
            });
        }
        format!("{out} m{} p{}", state.mover, state.passes)
    }

    fn parse_state(&self, text: &str) -> Result<TriinversionState, GameError> {
        let bad = |m: &str| GameError::ParseError(m.to_string());
        let mut parts = text.split_whitespace();
        let rows = parts.next().ok_or_else(|| bad("missing board"))?;
        let mover_part = parts.next().ok_or_else(|| bad("missing mover"))?;
        let pass_part = parts.next().ok_or_else(|| bad("missing pass counter"))?;
        let mut cells = Vec::with_capacity(self.board.cell_count());
        for ch in rows.chars() {
            match ch {
                '/' => {}
                '.' | '*' => cells.push(0),
                '0'..='2' => cells.push(1 + ch as u8 - b'0'),
                _ => return Err(bad("cells must be '.', '*' or '0'..'2'")),
            }
        }
        if cells.len() != self.board.cell_count() {
            return Err(bad("wrong cell count for this board"));
        }
        if cells[self.center as usize] != 0 {
            return Err(bad("the central cell cannot hold a piece"));
        }
        let mover: u8 = mover_part
            .strip_prefix('m')
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad("mover field must be m<digit>"))?;
        if mover as usize >= TRIINVERSION_PLAYERS {
            return Err(bad("mover out of range"));
        }
        let passes: u8 = pass_part
            .strip_prefix('p')
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad("pass field must be p<count>"))?;
        if passes > 3 {
            return Err(bad("pass counter out of range"));
        }
        Ok(TriinversionState {
            cells,
            mover: PlayerId(mover),
            passes,
        })
    }

    fn action_text(&self, _state: &TriinversionState, action: TriinversionAction) -> String {
        match action {
            TriinversionAction::Pass => "pass".to_string(),
            TriinversionAction::Place(cell) => {
                let (q, r) = self.board.coords(cell);
                format!("({q},{r})")
            }
        }
    }
}

impl crate::eval::HeuristicGame for Triinversion {
    fn heuristic_family(&self) -> &'static str {
        "material"
    }

    fn base_weights(&self) -> Vec<f64> {
        alloc::vec![1.0]
    }

    /// Score differential against the other players' average.
    fn heuristic(&self, state: &TriinversionState, weights: &[f64]) -> PayoffVector {
        let scores = self.scores(state);
        let scale = self.board.cell_count() as f64;
        PayoffVector::from_fn(TRIINVERSION_PLAYERS, |p| {
            let others: u32 = (0..TRIINVERSION_PLAYERS)
                .filter(|&q| q != p.index())
                .map(|q| scores[q])
                .sum();
            weights[0] * (scores[p.index()] as f64 - others as f64 / 2.0) / scale
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coords_of(g: &Triinversion, actions: &[TriinversionAction]) -> Vec<(i32, i32)> {
        actions
            .iter()
            .map(|a| match a {
                TriinversionAction::Place(i) => g.board.coords(*i),
                TriinversionAction::Pass => panic!("unexpected pass"),
            })
            .collect()
    }

    #[test]
    fn initial_ring_and_opening_moves() {
        for side in [3u32, 6] {
            let g = Triinversion::new(side).unwrap();
            let s = g.initial_state();
            assert_eq!(s.piece_counts(), [2, 2, 2]);
            // Chords beside the two direct-opponent (color 2) ring pieces;
            // the diameters through the center fail on an empty closure.
            let actions = g.legal_actions(&s).unwrap();
            assert_eq!(
                coords_of(&g, &actions),
                [(1, -2), (-1, -1), (1, 1), (-1, 2)],
                "side {side}"
            );
        }
    }

    #[test]
    fn lines_continue_across_the_transparent_center() {
        let g = Triinversion::new(3).unwrap();
        // Color 2 on both sides of the center, closed by color 0 at (0,2).
        let s = g.parse_state(".../.2../..*../..2./..0 m0 p0").unwrap();
        let at = g.board.index_of(0, -2).unwrap();
        let next = g.apply(&s, TriinversionAction::Place(at)).unwrap();
        assert_eq!(next.piece(g.board.index_of(0, -1).unwrap()), Some(PlayerId(0)));
        assert_eq!(next.piece(g.board.index_of(0, 1).unwrap()), Some(PlayerId(0)));
        assert_eq!(next.piece_counts(), [4, 0, 0]);
    }

    #[test]
    fn forced_pass_rotates_the_mover() {
        let g = Triinversion::new(3).unwrap();
        // Only color-1 pieces on the board: player 1 (direct opponent is
        // player 0) has nothing to capture and must pass.
        let s = g.parse_state(".../.1../..*../..1./... m1 p0").unwrap();
        assert_eq!(g.legal_actions(&s).unwrap(), [TriinversionAction::Pass]);
        let next = g.apply(&s, TriinversionAction::Pass).unwrap();
        assert_eq!(next.mover, PlayerId(2));
        assert_eq!(next.passes, 1);
        assert!(!g.is_terminal(&next));
    }

    #[test]
    fn full_board_scores_count_the_indirect_opponent() {
        let g = Triinversion::new(3).unwrap();
        // 7 pieces for player 0, 6 for player 1, 5 for player 2.
        let mut s = g
            .parse_state("000/0001/11*11/1222/220 m0 p0")
            .unwrap();
        assert_eq!(s.piece_counts(), [7, 6, 5]);
        for _ in 0..3 {
            assert_eq!(g.legal_actions(&s).unwrap(), [TriinversionAction::Pass]);
            s = g.apply(&s, TriinversionAction::Pass).unwrap();
        }
        assert!(g.is_terminal(&s));
        assert_eq!(
            g.terminal_payoff(&s).unwrap(),
            PayoffVector::new(&[13.0, 11.0, 12.0])
        );
        assert_eq!(
            g.win_loss_vector(&s).unwrap(),
            PayoffVector::new(&[1.0, -1.0, -1.0])
        );
    }

    #[test]
    fn capture_needs_a_closing_piece() {
        let g = Triinversion::new(3).unwrap();
        // A lone color-2 piece next to an empty cell: no closure anywhere.
        let s = g.parse_state(".../.2../..*../..../... m0 p0").unwrap();
        assert_eq!(g.legal_actions(&s).unwrap(), [TriinversionAction::Pass]);
    }

    #[test]
    fn out_of_turn_placement_keeps_the_mover() {
        let g = Triinversion::new(6).unwrap();
        let s = g.initial_state();
        // Player 1 captures color 0; its chords mirror player 0's.
        let actions = g.out_of_turn_actions(&s, PlayerId(1)).unwrap();
        assert_eq!(actions.len(), 4);
        let TriinversionAction::Place(at) = actions[0] else {
            panic!("expected a placement");
        };
        let next = g.apply_out_of_turn(&s, PlayerId(1), actions[0]).unwrap();
        assert_eq!(next.mover, PlayerId(0));
        assert_eq!(next.piece(at), Some(PlayerId(1)));
        let counts = next.piece_counts();
        assert_eq!(counts[0], 1);
        assert_eq!(counts[1], 4);
    }

    #[test]
    fn state_text_roundtrip() {
        let g = Triinversion::new(3).unwrap();
        let s = g.initial_state();
        let text = g.encode_state(&s);
        assert_eq!(text, ".../.21./.0*0./.12./... m0 p0");
        assert_eq!(g.parse_state(&text).unwrap(), s);
    }

    #[test]
    fn total_pieces_never_decrease() {
        let g = Triinversion::new(3).unwrap();
        let mut s = g.initial_state();
        let mut pieces = 6u32;
        while !g.is_terminal(&s) {
            let actions = g.legal_actions(&s).unwrap();
            let action = actions[actions.len() / 2];
            s = g.apply(&s, action).unwrap();
            let now: u32 = s.piece_counts().iter().sum();
            match action {
                TriinversionAction::Place(_) => assert_eq!(now, pieces + 1),
                TriinversionAction::Pass => assert_eq!(now, pieces),
            }
            pieces = now;
        }
    }
}
