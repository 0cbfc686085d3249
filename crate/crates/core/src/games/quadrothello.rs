//! Quadrothello: four-player Othello on a square board with placement
//! zones.
//!
//! Player 0 places only in the top half, player 1 in the right half,
//! player 2 in the bottom half and player 3 in the left half. A placement
//! must flank, in one of the eight directions, a run of one or more
//! opponent stones (any colors) closed by one of the mover's own stones;
//! every flanked run changes owner. Captures are not zone-restricted.
//! Moveless players are skipped automatically and the game ends when
//! nobody can place; final score is the stone count.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::game::{Game, GameError};
use crate::payoff::{PayoffVector, PlayerId};
use crate::zobrist::{FeatureStream, ZobristKey};

pub const QUADROTHELLO_PLAYERS: usize = 4;

const DIRS8: [(i32, i32); 8] = [
    (-1, -1),
    (-1, 0),
    (-1, 1),
    (0, -1),
    (0, 1),
    (1, -1),
    (1, 0),
    (1, 1),
];

/// Central 4x4 opening block, 90-degree rotationally symmetric with the
/// colors shifted by one per quarter turn; each player starts with four
/// stones and one flanking move.
const OPENING: [[u8; 4]; 4] = [[0, 1, 0, 1], [3, 0, 1, 2], [0, 3, 2, 1], [3, 2, 3, 2]];

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QuadrothelloState {
    /// 0 empty, 1..=4 a stone of player v-1.
    cells: Vec<u8>,
    mover: PlayerId,
    terminal: bool,
}

impl QuadrothelloState {
    pub fn stone(&self, idx: u16) -> Option<PlayerId> {
        match self.cells[idx as usize] {
            0 => None,
            v => Some(PlayerId(v - 1)),
        }
    }

    pub fn stone_counts(&self) -> [u32; QUADROTHELLO_PLAYERS] {
        let mut counts = [0u32; QUADROTHELLO_PLAYERS];
        for &v in &self.cells {
            if v != 0 {
                counts[(v - 1) as usize] += 1;
            }
        }
        counts
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct QuadrothelloAction(pub u16);

pub struct Quadrothello {
    n: usize,
    cell_features: Vec<[u64; 4]>,
    mover_features: [u64; 4],
}

impl Quadrothello {
    pub fn new(n: usize) -> Result<Quadrothello, GameError> {
        if n % 2 != 0 || !(6..=64).contains(&n) {
            return Err(GameError::BadConfig(
                "quadrothello needs an even board side in 6..=64".to_string(),
            ));
        }
        let mut stream = FeatureStream::new(&format!("quadrothello:{n}"));
        let cell_features = (0..n * n)
            .map(|_| {
                let mut f = [0u64; 4];
                for v in &mut f {
                    *v = stream.next_value();
                }
                f
            })
            .collect();
        let mut mover_features = [0u64; 4];
        for v in &mut mover_features {
            *v = stream.next_value();
        }
        Ok(Quadrothello {
            n,
            cell_features,
            mover_features,
        })
    }

    pub fn side(&self) -> usize {
        self.n
    }

    fn index(&self, r: usize, c: usize) -> u16 {
        (r * self.n + c) as u16
    }

    pub fn in_zone(&self, player: u8, r: usize, c: usize) -> bool {
        let h = self.n / 2;
        match player {
            0 => r < h,
            1 => c >= h,
            2 => r >= h,
            _ => c < h,
        }
    }

    /// Stones captured by `player` placing at cell index `at`; empty means
    /// the placement is illegal (zone violations included).
    fn flips(&self, cells: &[u8], player: u8, at: u16) -> Vec<u16> {
        let mut flipped = Vec::new();
        let (r, c) = ((at as usize) / self.n, (at as usize) % self.n);
        if cells[at as usize] != 0 || !self.in_zone(player, r, c) {
            return flipped;
        }
        let own = 1 + player;
        for (dr, dc) in DIRS8 {
            let run_start = flipped.len();
            let (mut cr, mut cc) = (r as i32 + dr, c as i32 + dc);
            loop {
                if cr < 0 || cc < 0 || cr >= self.n as i32 || cc >= self.n as i32 {
                    flipped.truncate(run_start);
                    break;
                }
                let v = cells[cr as usize * self.n + cc as usize];
                if v == 0 {
                    flipped.truncate(run_start);
                    break;
                }
                if v == own {
                    break;
                }
                flipped.push(self.index(cr as usize, cc as usize));
                cr += dr;
                cc += dc;
            }
        }
        flipped
    }

    fn placements(&self, cells: &[u8], player: u8) -> Vec<QuadrothelloAction> {
        (0..cells.len() as u16)
            .filter(|&i| !self.flips(cells, player, i).is_empty())
            .map(QuadrothelloAction)
            .collect()
    }

    fn has_move(&self, cells: &[u8], player: u8) -> bool {
        (0..cells.len() as u16).any(|i| !self.flips(cells, player, i).is_empty())
    }

    /// First player at or after `from` with a placement; None ends the
    /// game.
    fn seat_with_moves(&self, cells: &[u8], from: u8) -> Option<u8> {
        (0..QUADROTHELLO_PLAYERS as u8)
            .map(|k| (from + k) % QUADROTHELLO_PLAYERS as u8)
            .find(|&p| self.has_move(cells, p))
    }

    fn canonicalize(&self, cells: Vec<u8>, from: u8) -> QuadrothelloState {
        match self.seat_with_moves(&cells, from) {
            Some(p) => QuadrothelloState {
                cells,
                mover: PlayerId(p),
                terminal: false,
            },
            None => QuadrothelloState {
                cells,
                mover: PlayerId(0),
                terminal: true,
            },
        }
    }

    pub fn scores(&self, state: &QuadrothelloState) -> [u32; QUADROTHELLO_PLAYERS] {
        state.stone_counts()
    }
}

impl Game for Quadrothello {
    type State = QuadrothelloState;
    type Action = QuadrothelloAction;

    fn name(&self) -> &str {
        "quadrothello"
    }

    fn player_count(&self) -> usize {
        QUADROTHELLO_PLAYERS
    }

    fn initial_state(&self) -> QuadrothelloState {
        let mut cells = alloc::vec![0u8; self.n * self.n];
        let offset = self.n / 2 - 2;
        for (lr, row) in OPENING.iter().enumerate() {
            for (lc, &color) in row.iter().enumerate() {
                cells[(offset + lr) * self.n + offset + lc] = 1 + color;
            }
        }
        QuadrothelloState {
            cells,
            mover: PlayerId(0),
            terminal: false,
        }
    }

    fn is_terminal(&self, state: &QuadrothelloState) -> bool {
        state.terminal
    }

    fn current_player(&self, state: &QuadrothelloState) -> Result<PlayerId, GameError> {
        if state.terminal {
            return Err(GameError::Terminal);
        }
        Ok(state.mover)
    }

    fn legal_actions(&self, state: &QuadrothelloState) -> Result<Vec<QuadrothelloAction>, GameError> {
        if state.terminal {
            return Err(GameError::Terminal);
        }
        Ok(self.placements(&state.cells, state.mover.0))
    }

    fn apply(
        &self,
        state: &QuadrothelloState,
        action: QuadrothelloAction,
    ) -> Result<QuadrothelloState, GameError> {
        if state.terminal {
            return Err(GameError::Terminal);
        }
        let at = action.0;
        if at as usize >= state.cells.len() {
            return Err(GameError::IllegalAction(format!("no cell {at}")));
        }
        let flipped = self.flips(&state.cells, state.mover.0, at);
        if flipped.is_empty() {
            return Err(GameError::IllegalAction(
                "placement must flank an opponent run inside the mover's zone".to_string(),
            ));
        }
        let mut cells = state.cells.clone();
        cells[at as usize] = 1 + state.mover.0;
        for idx in flipped {
            cells[idx as usize] = 1 + state.mover.0;
        }
        Ok(self.canonicalize(cells, state.mover.0 + 1))
    }

    fn terminal_payoff(&self, state: &QuadrothelloState) -> Result<PayoffVector, GameError> {
        if !state.terminal {
            return Err(GameError::NotTerminal);
        }
        let counts = state.stone_counts();
        Ok(PayoffVector::from_fn(QUADROTHELLO_PLAYERS, |p| {
            counts[p.index()] as f64
        }))
    }

    fn zobrist_key(&self, state: &QuadrothelloState) -> ZobristKey {
        let mut key = self.mover_features[state.mover.index()];
        for (i, &v) in state.cells.iter().enumerate() {
            if v != 0 {
                key ^= self.cell_features[i][(v - 1) as usize];
            }
        }
        ZobristKey(key)
    }

    fn progress_measure(&self, state: &QuadrothelloState) -> u64 {
        state.cells.iter().filter(|&&v| v != 0).count() as u64
    }

    fn supports_out_of_turn(&self) -> bool {
        true
    }

    fn out_of_turn_actions(
        &self,
        state: &QuadrothelloState,
        player: PlayerId,
    ) -> Result<Vec<QuadrothelloAction>, GameError> {
        if state.terminal {
            return Err(GameError::Terminal);
        }
        Ok(self.placements(&state.cells, player.0))
    }

    fn apply_out_of_turn(
        &self,
        state: &QuadrothelloState,
        player: PlayerId,
        action: QuadrothelloAction,
    ) -> Result<QuadrothelloState, GameError> {
        if state.terminal {
            return Err(GameError::Terminal);
        }
        let flipped = self.flips(&state.cells, player.0, action.0);
        if flipped.is_empty() {
            return Err(GameError::IllegalAction(
                "placement must flank an opponent run inside the player's zone".to_string(),
            ));
        }
        let mut cells = state.cells.clone();
        cells[action.0 as usize] = 1 + player.0;
        for idx in flipped {
            cells[idx as usize] = 1 + player.0;
        }
        Ok(QuadrothelloState {
            cells,
            mover: state.mover,
            terminal: false,
        })
    }

    fn encode_state(&self, state: &QuadrothelloState) -> String {
        let mut out = String::new();
        for r in 0..self.n {
            if r > 0 {
                out.push('/');
            }
            for c in 0..self.n {
                out.push(match state.cells[r * self.n + c] {
                    0 => '.',
                    v => (b'0' + v - 1) as char,
                });
            }
        }
        format!("{out} m{}", state.mover)
    }

    /// The mover is advanced past moveless seats exactly as `apply` would,
    /// so unreachable mover assignments normalize away.
    fn parse_state(&self, text: &str) -> Result<QuadrothelloState, GameError> {
        let bad = |m: &str| GameError::ParseError(m.to_string());
        let mut parts = text.split_whitespace();
        let rows = parts.next().ok_or_else(|| bad("missing board"))?;
        let mover_part = parts.next().ok_or_else(|| bad("missing mover"))?;
        let mut cells = Vec::with_capacity(self.n * self.n);
        for ch in rows.chars() {
            match ch {
                '/' => {}
                '.' => cells.push(0),
                '0'..='3' => cells.push(1 + ch as u8 - b'0'),
                _ => return Err(bad("cells must be '.' or '0'..'3'")),
            }
        }
        if cells.len() != self.n * self.n {
            return Err(bad("wrong cell count for this board"));
        }
        let mover: u8 = mover_part
            .strip_prefix('m')
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad("mover field must be m<digit>"))?;
        if mover as usize >= QUADROTHELLO_PLAYERS {
            return Err(bad("mover out of range"));
        }
        Ok(self.canonicalize(cells, mover))
    }

    fn action_text(&self, _state: &QuadrothelloState, action: QuadrothelloAction) -> String {
        let (r, c) = ((action.0 as usize) / self.n, (action.0 as usize) % self.n);
        format!("({r},{c})")
    }
}

impl crate::eval::HeuristicGame for Quadrothello {
    fn heuristic_family(&self) -> &'static str {
        "material"
    }

    fn base_weights(&self) -> Vec<f64> {
        alloc::vec![1.0, 0.25]
    }

    /// Stone-count differential plus a corner bonus.
    fn heuristic(&self, state: &QuadrothelloState, weights: &[f64]) -> PayoffVector {
        let counts = state.stone_counts();
        let total: u32 = counts.iter().sum();
        let mut corners = [0u32; QUADROTHELLO_PLAYERS];
        for idx in [
            self.index(0, 0),
            self.index(0, self.n - 1),
            self.index(self.n - 1, 0),
            self.index(self.n - 1, self.n - 1),
        ] {
            if let Some(owner) = state.stone(idx) {
                corners[owner.index()] += 1;
            }
        }
        let diff = |vals: &[u32; 4], p: usize| {
            let others: u32 = (0..QUADROTHELLO_PLAYERS).filter(|&q| q != p).map(|q| vals[q]).sum();
            vals[p] as f64 - others as f64 / 3.0
        };
        PayoffVector::from_fn(QUADROTHELLO_PLAYERS, |p| {
            weights[0] * diff(&counts, p.index()) / total.max(1) as f64
                + weights[1] * diff(&corners, p.index()) / 4.0
        })
    }
}
