//! Quadamazons: four-player Amazons on a square board with overlapping
//! movement bands.
//!
//! Each player owns a band of the board (top rows, right columns, bottom
//! rows or left columns, (N/2+d) wide) split into two sub-zones at the
//! midline. A turn is two steps, each a queen move of one amazon followed
//! by an arrow shot from the moved amazon; the second step's move must end
//! in the other sub-zone than the first's, and an arrow must land in the
//! moved amazon's sub-zone or exactly on the square the amazon vacated.
//! A player with no move at the start of their turn is eliminated for
//! good; with no second-step move, the step is passed. Scores rank the
//! elimination order; a lone survivor scores their remaining move count.
//!
//! The initial placement reconstructs the source's fixed edge setup: four
//! amazons per player spread evenly along the outer edge of their band,
//! rotated 90 degrees per player.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::game::{Game, GameError};
use crate::payoff::{PayoffVector, PlayerId};
use crate::zobrist::{FeatureStream, ZobristKey};

pub const QUADAMAZONS_PLAYERS: usize = 4;

const ARROW: u8 = 5;
const NOT_ELIMINATED: u8 = 0xFF;

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

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct AwaitShot {
    /// Where the moved amazon now stands.
    pub amazon: u16,
    /// The square it vacated; always a legal arrow target.
    pub origin: u16,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QuadamazonsState {
    /// 0 empty, 1..=4 an amazon of player v-1, 5 an arrow.
    cells: Vec<u8>,
    mover: PlayerId,
    /// Whether the turn's first step is already done.
    second_step: bool,
    /// Sub-zone the first step's amazon ended in; 0 outside a second step.
    first_sub: u8,
    awaiting: Option<AwaitShot>,
    /// Players in elimination order, padded with 0xFF.
    elim_order: [u8; 4],
}

impl QuadamazonsState {
    pub fn cell(&self, idx: u16) -> u8 {
        self.cells[idx as usize]
    }

    pub fn is_eliminated(&self, player: PlayerId) -> bool {
        self.elim_order.contains(&player.0)
    }

    pub fn eliminated_count(&self) -> usize {
        self.elim_order.iter().filter(|&&v| v != NOT_ELIMINATED).count()
    }

    pub fn arrow_count(&self) -> usize {
        self.cells.iter().filter(|&&v| v == ARROW).count()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum QuadamazonsAction {
    Move { from: u16, to: u16 },
    Shoot { target: u16 },
}

enum Settled {
    Next(u8),
    Survivor(u8),
    AllOut,
}

pub struct Quadamazons {
    n: usize,
    d: usize,
    cell_features: Vec<[u64; 5]>,
    mover_features: [u64; 4],
    second_feature: u64,
    sub_features: [u64; 2],
    await_amazon: Vec<u64>,
    await_origin: Vec<u64>,
    elim_features: [[u64; 4]; 4],
}

impl Quadamazons {
    pub fn new(n: usize, d: usize) -> Result<Quadamazons, GameError> {
        if n % 2 != 0 || !(6..=64).contains(&n) {
            return Err(GameError::BadConfig(
                "quadamazons needs an even board side in 6..=64".to_string(),
            ));
        }
        if d == 0 || d >= n / 2 {
            return Err(GameError::BadConfig(
                "quadamazons needs 1 <= d < N/2".to_string(),
            ));
        }
        let mut stream = FeatureStream::new(&format!("quadamazons:{n}:{d}"));
        let cell_features = (0..n * n)
            .map(|_| {
                let mut f = [0u64; 5];
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
        let second_feature = stream.next_value();
        let sub_features = [stream.next_value(), stream.next_value()];
        let await_amazon = stream.take(n * n);
        let await_origin = stream.take(n * n);
        let mut elim_features = [[0u64; 4]; 4];
        for slot in &mut elim_features {
            for v in slot.iter_mut() {
                *v = stream.next_value();
            }
        }
        Ok(Quadamazons {
            n,
            d,
            cell_features,
            mover_features,
            second_feature,
            sub_features,
            await_amazon,
            await_origin,
            elim_features,
        })
    }

    pub fn side(&self) -> usize {
        self.n
    }

    fn index(&self, r: usize, c: usize) -> u16 {
        (r * self.n + c) as u16
    }

    fn coords(&self, idx: u16) -> (usize, usize) {
        ((idx as usize) / self.n, (idx as usize) % self.n)
    }

    /// The (N/2+d)-wide band the player's amazons live in.
    pub fn in_band(&self, player: u8, r: usize, c: usize) -> bool {
        let h = self.n / 2;
        match player {
            0 => r < h + self.d,
            1 => c >= h - self.d,
            2 => r >= h - self.d,
            _ => c < h + self.d,
        }
    }

    /// Which half of the player's band a cell falls in, split at the
    /// midline perpendicular to the band.
    pub fn sub_zone(&self, player: u8, r: usize, c: usize) -> u8 {
        let h = self.n / 2;
        let along = if player % 2 == 0 { c } else { r };
        u8::from(along >= h)
    }

    /// Queen moves for `player`, optionally constrained to a destination
    /// sub-zone, sorted by (from, to).
    fn moves_of(&self, cells: &[u8], player: u8, require_sub: Option<u8>) -> Vec<(u16, u16)> {
        let mut out = Vec::new();
        let own = 1 + player;
        for from in 0..cells.len() as u16 {
            if cells[from as usize] != own {
                continue;
            }
            let (fr, fc) = self.coords(from);
            for (dr, dc) in DIRS8 {
                let (mut r, mut c) = (fr as i32, fc as i32);
                loop {
                    r += dr;
                    c += dc;
                    if r < 0 || c < 0 || r >= self.n as i32 || c >= self.n as i32 {
                        break;
                    }
                    let (ur, uc) = (r as usize, c as usize);
                    if cells[ur * self.n + uc] != 0 {
                        break;
                    }
                    // A straight ray that leaves the band can never
                    // re-enter it.
                    if !self.in_band(player, ur, uc) {
                        break;
                    }
                    if require_sub.map_or(true, |s| self.sub_zone(player, ur, uc) == s) {
                        out.push((from, self.index(ur, uc)));
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Arrow targets from the moved amazon: its own sub-zone or the exact
    /// origin square, sorted.
    fn shots_of(&self, cells: &[u8], player: u8, wait: AwaitShot) -> Vec<u16> {
        let mut out = Vec::new();
        let (ar, ac) = self.coords(wait.amazon);
        let sub = self.sub_zone(player, ar, ac);
        for (dr, dc) in DIRS8 {
            let (mut r, mut c) = (ar as i32, ac as i32);
            loop {
                r += dr;
                c += dc;
                if r < 0 || c < 0 || r >= self.n as i32 || c >= self.n as i32 {
                    break;
                }
                let (ur, uc) = (r as usize, c as usize);
                let idx = self.index(ur, uc);
                if cells[ur * self.n + uc] != 0 {
                    break;
                }
                if idx == wait.origin
                    || (self.in_band(player, ur, uc) && self.sub_zone(player, ur, uc) == sub)
                {
                    out.push(idx);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Walk seats from `from`, eliminating moveless ones, until a seat can
    /// play or nobody is left.
    fn settle(&self, cells: &[u8], elim_order: &mut [u8; 4], from: u8) -> Settled {
        for k in 0..QUADAMAZONS_PLAYERS as u8 {
            let cand = (from + k) % QUADAMAZONS_PLAYERS as u8;
            if elim_order.contains(&cand) {
                continue;
            }
            if self.moves_of(cells, cand, None).is_empty() {
                let slot = elim_order.iter().position(|&v| v == NOT_ELIMINATED).unwrap();
                elim_order[slot] = cand;
                continue;
            }
            let alive =
                QUADAMAZONS_PLAYERS - elim_order.iter().filter(|&&v| v != NOT_ELIMINATED).count();
            return if alive == 1 {
                Settled::Survivor(cand)
            } else {
                Settled::Next(cand)
            };
        }
        Settled::AllOut
    }

    fn settled_state(
        &self,
        cells: Vec<u8>,
        mut elim_order: [u8; 4],
        from: u8,
    ) -> QuadamazonsState {
        let mover = match self.settle(&cells, &mut elim_order, from) {
            Settled::Next(p) | Settled::Survivor(p) => PlayerId(p),
            Settled::AllOut => PlayerId(elim_order[3]),
        };
        QuadamazonsState {
            cells,
            mover,
            second_step: false,
            first_sub: 0,
            awaiting: None,
            elim_order,
        }
    }
}

impl Game for Quadamazons {
    type State = QuadamazonsState;
    type Action = QuadamazonsAction;

    fn name(&self) -> &str {
        "quadamazons"
    }

    fn player_count(&self) -> usize {
        QUADAMAZONS_PLAYERS
    }

    fn initial_state(&self) -> QuadamazonsState {
        let n = self.n;
        let mut cells = alloc::vec![0u8; n * n];
        for k in 0..4usize {
            // Evenly spread along the band's outer edge, rotated per seat.
            let c = 1 + (2 * k * (n - 3) + 3) / 6;
            cells[c] = 1;
            cells[c * n + (n - 1)] = 2;
            cells[(n - 1) * n + (n - 1 - c)] = 3;
            cells[(n - 1 - c) * n] = 4;
        }
        QuadamazonsState {
            cells,
            mover: PlayerId(0),
            second_step: false,
            first_sub: 0,
            awaiting: None,
            elim_order: [NOT_ELIMINATED; 4],
        }
    }

    fn is_terminal(&self, state: &QuadamazonsState) -> bool {
        state.eliminated_count() >= 3
    }

    fn current_player(&self, state: &QuadamazonsState) -> Result<PlayerId, GameError> {
        if self.is_terminal(state) {
            return Err(GameError::Terminal);
        }
        Ok(state.mover)
    }

    fn legal_actions(&self, state: &QuadamazonsState) -> Result<Vec<QuadamazonsAction>, GameError> {
        if self.is_terminal(state) {
            return Err(GameError::Terminal);
        }
        if let Some(wait) = state.awaiting {
            return Ok(self
                .shots_of(&state.cells, state.mover.0, wait)
                .into_iter()
                .map(|target| QuadamazonsAction::Shoot { target })
                .collect());
        }
        let require = state.second_step.then_some(1 - state.first_sub);
        Ok(self
            .moves_of(&state.cells, state.mover.0, require)
            .into_iter()
            .map(|(from, to)| QuadamazonsAction::Move { from, to })
            .collect())
    }

    fn apply(
        &self,
        state: &QuadamazonsState,
        action: QuadamazonsAction,
    ) -> Result<QuadamazonsState, GameError> {
        if self.is_terminal(state) {
            return Err(GameError::Terminal);
        }
        match (state.awaiting, action) {
            (None, QuadamazonsAction::Move { from, to }) => {
                let require = state.second_step.then_some(1 - state.first_sub);
                if !self
                    .moves_of(&state.cells, state.mover.0, require)
                    .contains(&(from, to))
                {
                    return Err(GameError::IllegalAction(
                        "not a legal amazon move this step".to_string(),
                    ));
                }
                let mut cells = state.cells.clone();
                cells[from as usize] = 0;
                cells[to as usize] = 1 + state.mover.0;
                Ok(QuadamazonsState {
                    awaiting: Some(AwaitShot {
                        amazon: to,
                        origin: from,
                    }),
                    cells,
                    ..state.clone()
                })
            }
            (Some(wait), QuadamazonsAction::Shoot { target }) => {
                if !self.shots_of(&state.cells, state.mover.0, wait).contains(&target) {
                    return Err(GameError::IllegalAction(
                        "not a legal arrow square".to_string(),
                    ));
                }
                let mut cells = state.cells.clone();
                cells[target as usize] = ARROW;
                if !state.second_step {
                    let (ar, ac) = self.coords(wait.amazon);
                    let first_sub = self.sub_zone(state.mover.0, ar, ac);
                    // Pass the second step when no move can reach the other
                    // sub-zone.
                    if !self.moves_of(&cells, state.mover.0, Some(1 - first_sub)).is_empty() {
                        return Ok(QuadamazonsState {
                            cells,
                            second_step: true,
                            first_sub,
                            awaiting: None,
                            ..state.clone()
                        });
                    }
                }
                Ok(self.settled_state(cells, state.elim_order, state.mover.0 + 1))
            }
            (None, QuadamazonsAction::Shoot { .. }) => Err(GameError::IllegalAction(
                "an amazon must move before shooting".to_string(),
            )),
            (Some(_), QuadamazonsAction::Move { .. }) => Err(GameError::IllegalAction(
                "the moved amazon must shoot first".to_string(),
            )),
        }
    }

    fn terminal_payoff(&self, state: &QuadamazonsState) -> Result<PayoffVector, GameError> {
        let filled = state.eliminated_count();
        if filled < 3 {
            return Err(GameError::NotTerminal);
        }
        let mut scores = [0.0f64; QUADAMAZONS_PLAYERS];
        if filled == QUADAMAZONS_PLAYERS {
            // Reverse elimination order: 1, 0, -1, -2.
            for (slot, &p) in state.elim_order.iter().enumerate() {
                scores[p as usize] = slot as f64 - 2.0;
            }
        } else {
            let survivor = state.mover;
            let s = self.moves_of(&state.cells, survivor.0, None).len() as f64;
            scores[survivor.index()] = s;
            scores[state.elim_order[2] as usize] = 0.0;
            scores[state.elim_order[1] as usize] = -s;
            scores[state.elim_order[0] as usize] = -2.0 * s;
        }
        Ok(PayoffVector::new(&scores))
    }

    fn zobrist_key(&self, state: &QuadamazonsState) -> ZobristKey {
        let mut key = self.mover_features[state.mover.index()];
        for (i, &v) in state.cells.iter().enumerate() {
            if v != 0 {
                key ^= self.cell_features[i][(v - 1) as usize];
            }
        }
        if state.second_step {
            key ^= self.second_feature;
            key ^= self.sub_features[state.first_sub as usize];
        }
        if let Some(wait) = state.awaiting {
            key ^= self.await_amazon[wait.amazon as usize];
            key ^= self.await_origin[wait.origin as usize];
        }
        for (slot, &p) in state.elim_order.iter().enumerate() {
            if p != NOT_ELIMINATED {
                key ^= self.elim_features[slot][p as usize];
            }
        }
        ZobristKey(key)
    }

    fn progress_measure(&self, state: &QuadamazonsState) -> u64 {
        2 * state.arrow_count() as u64 + u64::from(state.awaiting.is_some())
    }

    fn encode_state(&self, state: &QuadamazonsState) -> String {
        let mut out = String::new();
        for r in 0..self.n {
            if r > 0 {
                out.push('/');
            }
            for c in 0..self.n {
                out.push(match state.cells[r * self.n + c] {
                    0 => '.',
                    ARROW => 'x',
                    v => (b'0' + v - 1) as char,
                });
            }
        }
        let wait = match state.awaiting {
            Some(w) => format!("a{}:{}", w.amazon, w.origin),
            None => "a-".to_string(),
        };
        let sub = if state.second_step {
            format!("f{}", state.first_sub)
        } else {
            "f-".to_string()
        };
        let elim: Vec<String> = state
            .elim_order
            .iter()
            .take_while(|&&p| p != NOT_ELIMINATED)
            .map(|p| p.to_string())
            .collect();
        let elim = if elim.is_empty() {
            "e-".to_string()
        } else {
            format!("e{}", elim.join(","))
        };
        format!(
            "{out} m{} s{} {wait} {sub} {elim}",
            state.mover,
            u8::from(state.second_step)
        )
    }

    fn parse_state(&self, text: &str) -> Result<QuadamazonsState, GameError> {
        let bad = |m: &str| GameError::ParseError(m.to_string());
        let mut parts = text.split_whitespace();
        let rows = parts.next().ok_or_else(|| bad("missing board"))?;
        let mover_part = parts.next().ok_or_else(|| bad("missing mover"))?;
        let step_part = parts.next().ok_or_else(|| bad("missing step flag"))?;
        let wait_part = parts.next().ok_or_else(|| bad("missing shot field"))?;
        let sub_part = parts.next().ok_or_else(|| bad("missing sub-zone field"))?;
        let elim_part = parts.next().ok_or_else(|| bad("missing elimination field"))?;
        let mut cells = Vec::with_capacity(self.n * self.n);
        for ch in rows.chars() {
            match ch {
                '/' => {}
                '.' => cells.push(0),
                'x' => cells.push(ARROW),
                '0'..='3' => cells.push(1 + ch as u8 - b'0'),
                _ => return Err(bad("cells must be '.', 'x' or '0'..'3'")),
            }
        }
        if cells.len() != self.n * self.n {
            return Err(bad("wrong cell count for this board"));
        }
        let mover: u8 = mover_part
            .strip_prefix('m')
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad("mover field must be m<digit>"))?;
        if mover as usize >= QUADAMAZONS_PLAYERS {
            return Err(bad("mover out of range"));
        }
        let second_step = match step_part {
            "s0" => false,
            "s1" => true,
            _ => return Err(bad("step field must be s0 or s1")),
        };
        let awaiting = match wait_part.strip_prefix('a').ok_or_else(|| bad("bad shot field"))? {
            "-" => None,
            pair => {
                let (amazon, origin) = pair
                    .split_once(':')
                    .ok_or_else(|| bad("shot field must be a<amazon>:<origin>"))?;
                let amazon: u16 = amazon.parse().map_err(|_| bad("bad amazon index"))?;
                let origin: u16 = origin.parse().map_err(|_| bad("bad origin index"))?;
                if amazon as usize >= cells.len() || origin as usize >= cells.len() {
                    return Err(bad("shot indices out of range"));
                }
                if cells[amazon as usize] != 1 + mover {
                    return Err(bad("awaiting amazon is not the mover's"));
                }
                Some(AwaitShot { amazon, origin })
            }
        };
        let first_sub = match sub_part {
            "f-" => {
                if second_step {
                    return Err(bad("second step needs its first sub-zone"));
                }
                0
            }
            "f0" => 0,
            "f1" => 1,
            _ => return Err(bad("sub-zone field must be f-, f0 or f1")),
        };
        if !second_step && sub_part != "f-" {
            return Err(bad("first step cannot carry a sub-zone"));
        }
        let mut elim_order = [NOT_ELIMINATED; 4];
        if elim_part != "e-" {
            let list = elim_part
                .strip_prefix('e')
                .ok_or_else(|| bad("bad elimination field"))?;
            for (slot, item) in list.split(',').enumerate() {
                if slot >= 4 {
                    return Err(bad("too many eliminated players"));
                }
                let p: u8 = item.parse().map_err(|_| bad("bad eliminated player"))?;
                if p as usize >= QUADAMAZONS_PLAYERS || elim_order.contains(&p) {
                    return Err(bad("invalid elimination list"));
                }
                elim_order[slot] = p;
            }
        }
        let filled = elim_order.iter().filter(|&&v| v != NOT_ELIMINATED).count();
        if filled >= 3 {
            // Terminal; keep the encoded fields as they are.
            return Ok(QuadamazonsState {
                cells,
                mover: PlayerId(mover),
                second_step: false,
                first_sub: 0,
                awaiting: None,
                elim_order,
            });
        }
        if elim_order.contains(&mover) {
            return Err(bad("the mover is eliminated"));
        }
        if let Some(wait) = awaiting {
            let state = QuadamazonsState {
                cells,
                mover: PlayerId(mover),
                second_step,
                first_sub,
                awaiting: Some(wait),
                elim_order,
            };
            if self.shots_of(&state.cells, mover, wait).is_empty() {
                return Err(bad("no arrow square available"));
            }
            return Ok(state);
        }
        if second_step {
            // Mirror the in-game auto-pass when the other sub-zone is
            // unreachable.
            if !self.moves_of(&cells, mover, Some(1 - first_sub)).is_empty() {
                return Ok(QuadamazonsState {
                    cells,
                    mover: PlayerId(mover),
                    second_step,
                    first_sub,
                    awaiting: None,
                    elim_order,
                });
            }
            return Ok(self.settled_state(cells, elim_order, mover + 1));
        }
        // Start of a turn: the seat walk mirrors apply, eliminating the
        // mover too when they cannot play.
        Ok(self.settled_state(cells, elim_order, mover))
    }

    fn action_text(&self, _state: &QuadamazonsState, action: QuadamazonsAction) -> String {
        match action {
            QuadamazonsAction::Move { from, to } => {
                let (fr, fc) = self.coords(from);
                let (tr, tc) = self.coords(to);
                format!("({fr},{fc})-({tr},{tc})")
            }
            QuadamazonsAction::Shoot { target } => {
                let (r, c) = self.coords(target);
                format!("x({r},{c})")
            }
        }
    }
}

impl crate::eval::HeuristicGame for Quadamazons {
    fn heuristic_family(&self) -> &'static str {
        "mobility"
    }

    fn base_weights(&self) -> Vec<f64> {
        alloc::vec![1.0]
    }

    /// Queen-move mobility differential; eliminated players count zero.
    fn heuristic(&self, state: &QuadamazonsState, weights: &[f64]) -> PayoffVector {
        let mobility: Vec<f64> = (0..QUADAMAZONS_PLAYERS as u8)
            .map(|p| {
                if state.elim_order.contains(&p) {
                    0.0
                } else {
                    self.moves_of(&state.cells, p, None).len() as f64
                }
            })
            .collect();
        let scale = (self.n * self.n) as f64;
        PayoffVector::from_fn(QUADAMAZONS_PLAYERS, |p| {
            let others: f64 = (0..QUADAMAZONS_PLAYERS)
                .filter(|&q| q != p.index())
                .map(|q| mobility[q])
                .sum();
            weights[0] * (mobility[p.index()] - others / 3.0) / scale
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn game() -> Quadamazons {
        Quadamazons::new(6, 1).unwrap()
    }

    #[test]
    fn initial_layout_and_default_sizes() {
        let g = game();
        let s = g.initial_state();
        let mut amazons = [0u32; 4];
        for idx in 0..36u16 {
            match s.cell(idx) {
                0 => {}
                v => amazons[(v - 1) as usize] += 1,
            }
        }
        assert_eq!(amazons, [4, 4, 4, 4]);
        let wide = Quadamazons::new(14, 2).unwrap();
        let ws = wide.initial_state();
        for (idx, owner) in [(1u16, 1u8), (5, 1), (8, 1), (12, 1)] {
            assert_eq!(ws.cell(idx), owner, "row-0 amazon at column {idx}");
        }
    }

    #[test]
    fn a_turn_is_move_shoot_move_shoot() {
        let g = game();
        let mut s = g.initial_state();
        assert_eq!(g.current_player(&s).unwrap(), PlayerId(0));
        let moves = g.legal_actions(&s).unwrap();
        assert!(moves
            .iter()
            .all(|a| matches!(a, QuadamazonsAction::Move { .. })));
        s = g.apply(&s, moves[0]).unwrap();
        let shots = g.legal_actions(&s).unwrap();
        assert!(shots
            .iter()
            .all(|a| matches!(a, QuadamazonsAction::Shoot { .. })));
        s = g.apply(&s, shots[0]).unwrap();
        // Second step: still player 0, moving again.
        assert_eq!(g.current_player(&s).unwrap(), PlayerId(0));
        assert!(s.second_step);
        let moves = g.legal_actions(&s).unwrap();
        assert!(moves
            .iter()
            .all(|a| matches!(a, QuadamazonsAction::Move { .. })));
        s = g.apply(&s, moves[0]).unwrap();
        let shots = g.legal_actions(&s).unwrap();
        s = g.apply(&s, shots[0]).unwrap();
        assert_eq!(g.current_player(&s).unwrap(), PlayerId(1));
        assert_eq!(s.arrow_count(), 2);
    }

    #[test]
    fn second_move_must_reach_the_other_sub_zone() {
        let g = game();
        let mut s = g.initial_state();
        let QuadamazonsAction::Move { to, .. } = g.legal_actions(&s).unwrap()[0] else {
            panic!("expected a move");
        };
        s = g.apply(&s, QuadamazonsAction::Move { from: 1, to }).unwrap();
        let first_sub = g.sub_zone(0, to as usize / 6, to as usize % 6);
        let shots = g.legal_actions(&s).unwrap();
        s = g.apply(&s, shots[0]).unwrap();
        for action in g.legal_actions(&s).unwrap() {
            let QuadamazonsAction::Move { to, .. } = action else {
                panic!("expected a move");
            };
            let (r, c) = (to as usize / 6, to as usize % 6);
            assert_eq!(g.sub_zone(0, r, c), 1 - first_sub);
        }
    }

    #[test]
    fn vacated_square_is_always_a_legal_arrow_target() {
        let g = game();
        let s = g.initial_state();
        for action in g.legal_actions(&s).unwrap() {
            let QuadamazonsAction::Move { from, .. } = action else {
                panic!("expected a move");
            };
            let next = g.apply(&s, action).unwrap();
            let shots = g.legal_actions(&next).unwrap();
            assert!(
                shots.contains(&QuadamazonsAction::Shoot { target: from }),
                "origin {from} missing from arrow targets"
            );
        }
    }

    #[test]
    fn lone_survivor_scores_their_move_count() {
        let g = game();
        // Player 1 is out; players 2 and 3 are walled in. Player 0's only
        // amazon with liberty sits in a one-row corridor.
        let s = g
            .parse_state("0xxxxx/0x0.../0x1111/33xxxx/xxxxx2/33x222 m0 s0 a- f- e1")
            .unwrap();
        assert_eq!(g.current_player(&s).unwrap(), PlayerId(0));
        let from = g.index(1, 2);
        let to = g.index(1, 3);
        let mut s = g.apply(&s, QuadamazonsAction::Move { from, to }).unwrap();
        // Shooting back into the vacated square leaves no second-step move
        // into the left sub-zone, so the step passes and the seat walk
        // eliminates players 2 and 3.
        s = g.apply(&s, QuadamazonsAction::Shoot { target: from }).unwrap();
        assert!(g.is_terminal(&s));
        assert_eq!(s.elim_order, [1, 2, 3, NOT_ELIMINATED]);
        assert_eq!(
            g.terminal_payoff(&s).unwrap(),
            PayoffVector::new(&[2.0, -4.0, -2.0, 0.0])
        );
        assert_eq!(
            g.win_loss_vector(&s).unwrap(),
            PayoffVector::new(&[1.0, -1.0, -1.0, -1.0])
        );
    }

    #[test]
    fn full_elimination_ranks_by_reverse_order() {
        let g = game();
        // Players 0 and 1 are already out; player 3 walls themself in with
        // their final shot, leaving player 2 (also walled) and then player
        // 3 to be eliminated.
        let s = g
            .parse_state("xxx.0./x3x..1/x.x.../x.x.../xxx.xx/....x2 m3 s0 a- f- e0,1")
            .unwrap();
        assert_eq!(g.current_player(&s).unwrap(), PlayerId(3));
        let b = g.index(1, 1);
        let mid = g.index(2, 1);
        let low = g.index(3, 1);
        let mut s = g
            .apply(&s, QuadamazonsAction::Move { from: b, to: mid })
            .unwrap();
        s = g.apply(&s, QuadamazonsAction::Shoot { target: b }).unwrap();
        assert!(!g.is_terminal(&s));
        s = g
            .apply(&s, QuadamazonsAction::Move { from: mid, to: low })
            .unwrap();
        s = g.apply(&s, QuadamazonsAction::Shoot { target: mid }).unwrap();
        assert!(g.is_terminal(&s));
        assert_eq!(s.elim_order, [0, 1, 2, 3]);
        assert_eq!(
            g.terminal_payoff(&s).unwrap(),
            PayoffVector::new(&[-2.0, -1.0, 0.0, 1.0])
        );
    }

    #[test]
    fn out_of_turn_probing_is_unsupported() {
        let g = game();
        let s = g.initial_state();
        assert!(!g.supports_out_of_turn());
        assert!(matches!(
            g.out_of_turn_actions(&s, PlayerId(1)),
            Err(GameError::OutOfTurnUnsupported)
        ));
    }

    #[test]
    fn state_text_roundtrip() {
        let g = game();
        let s = g.initial_state();
        let text = g.encode_state(&s);
        assert_eq!(
            text,
            ".0000./3....1/3....1/3....1/3....1/.2222. m0 s0 a- f- e-"
        );
        assert_eq!(g.parse_state(&text).unwrap(), s);
        // Mid-turn fields survive the trip too.
        let actions = g.legal_actions(&s).unwrap();
        let next = g.apply(&s, actions[0]).unwrap();
        let text = g.encode_state(&next);
        assert_eq!(g.parse_state(&text).unwrap(), next);
    }

    #[test]
    fn random_playout_reaches_a_ranked_ending() {
        use rand::{Rng, SeedableRng};
        let g = game();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut s = g.initial_state();
        let mut arrows = 0usize;
        let mut plies = 0u32;
        let mut progress = g.progress_measure(&s);
        while !g.is_terminal(&s) {
            let actions = g.legal_actions(&s).unwrap();
            assert!(!actions.is_empty());
            s = g.apply(&s, actions[rng.gen_range(0..actions.len())]).unwrap();
            assert!(s.arrow_count() >= arrows, "arrows are permanent");
            arrows = s.arrow_count();
            let now = g.progress_measure(&s);
            assert!(now > progress);
            progress = now;
            plies += 1;
            assert!(plies < 10_000, "playout failed to terminate");
        }
        let payoff = g.terminal_payoff(&s).unwrap();
        assert_eq!(payoff.len(), 4);
        let amazons = (0..36u16).filter(|&i| matches!(s.cell(i), 1..=4)).count();
        assert_eq!(amazons, 16, "amazons never leave the board");
    }
}
