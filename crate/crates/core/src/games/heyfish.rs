//! Hey, That's My Fish!: penguins slide across a melting hexagonal ice
//! field, collecting the fish printed on every tile they leave behind.
//!
//! The board is a rows-by-cols odd-r offset hex grid. A move slides one
//! of the mover's penguins in a straight hex line over present, empty
//! tiles; the departed tile is collected (its fish credited) and removed.
//! Any penguin left without a move is taken off the board at once,
//! collecting the tile it stood on, so every penguin still standing can
//! move. A player with no penguins left is skipped; the game ends when
//! the ice is empty of penguins and the fish totals are the final score.
//!
//! Set-up is seeded: tile values are dealt by shuffle (a sixth threes, a
//! third twos, ones elsewhere) and penguins take the first shuffled
//! one-fish tiles in round-robin seat order.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::game::{Game, GameError};
use crate::games::hexgrid::AXIAL_DIRS;
use crate::payoff::{PayoffVector, PlayerId};
use crate::zobrist::{FeatureStream, ZobristKey};

pub const HEYFISH_PLAYERS: usize = 3;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct HeyFishState {
    /// Fish per tile, 0 for a removed tile.
    tiles: Vec<u8>,
    /// 0 for none, otherwise 1 + owning player.
    penguins: Vec<u8>,
    scores: [u16; HEYFISH_PLAYERS],
    mover: PlayerId,
}

impl HeyFishState {
    pub fn fish_at(&self, idx: u16) -> u8 {
        self.tiles[idx as usize]
    }

    pub fn penguin_at(&self, idx: u16) -> Option<PlayerId> {
        match self.penguins[idx as usize] {
            0 => None,
            v => Some(PlayerId(v - 1)),
        }
    }

    pub fn scores(&self) -> [u16; HEYFISH_PLAYERS] {
        self.scores
    }

    pub fn board_fish(&self) -> u32 {
        self.tiles.iter().map(|&f| u32::from(f)).sum()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct HeyFishAction {
    pub from: u16,
    pub to: u16,
}

pub struct HeyFish {
    rows: usize,
    cols: usize,
    penguins: usize,
    seed: u64,
    tile_features: Vec<[u64; 3]>,
    penguin_features: Vec<[u64; HEYFISH_PLAYERS]>,
    score_features: Vec<[u64; HEYFISH_PLAYERS]>,
    mover_features: [u64; HEYFISH_PLAYERS],
}

impl HeyFish {
    pub fn new(rows: usize, cols: usize, penguins: usize, seed: u64) -> Result<HeyFish, GameError> {
        if !(2..=16).contains(&rows) || !(2..=16).contains(&cols) {
            return Err(GameError::BadConfig(
                "hey_fish needs rows and cols in 2..=16".to_string(),
            ));
        }
        if !(1..=4).contains(&penguins) {
            return Err(GameError::BadConfig(
                "hey_fish needs 1..=4 penguins per player".to_string(),
            ));
        }
        let total = rows * cols;
        let ones = total - total / 6 - total / 3;
        if ones < HEYFISH_PLAYERS * penguins {
            return Err(GameError::BadConfig(
                "hey_fish board too small for that many penguins".to_string(),
            ));
        }
        let mut stream = FeatureStream::new(&format!("hey_fish:{rows}:{cols}:{penguins}:{seed}"));
        let tile_features = (0..total)
            .map(|_| {
                let mut f = [0u64; 3];
                for v in &mut f {
                    *v = stream.next_value();
                }
                f
            })
            .collect();
        let penguin_features = (0..total)
            .map(|_| {
                let mut f = [0u64; HEYFISH_PLAYERS];
                for v in &mut f {
                    *v = stream.next_value();
                }
                f
            })
            .collect();
        // One feature per (player, score) pair; scores are bounded by the
        // total fish dealt.
        let max_fish = 3 * (total / 6) + 2 * (total / 3) + ones;
        let score_features = (0..=max_fish)
            .map(|_| {
                let mut f = [0u64; HEYFISH_PLAYERS];
                for v in &mut f {
                    *v = stream.next_value();
                }
                f
            })
            .collect();
        let mut mover_features = [0u64; HEYFISH_PLAYERS];
        for v in &mut mover_features {
            *v = stream.next_value();
        }
        Ok(HeyFish {
            rows,
            cols,
            penguins,
            seed,
            tile_features,
            penguin_features,
            score_features,
            mover_features,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    fn axial_of(&self, idx: u16) -> (i32, i32) {
        let r = (idx as usize / self.cols) as i32;
        let c = (idx as usize % self.cols) as i32;
        (c - (r - (r & 1)) / 2, r)
    }

    fn index_of_axial(&self, q: i32, r: i32) -> Option<u16> {
        if r < 0 || r >= self.rows as i32 {
            return None;
        }
        let c = q + (r - (r & 1)) / 2;
        if c < 0 || c >= self.cols as i32 {
            return None;
        }
        Some((r as usize * self.cols + c as usize) as u16)
    }

    /// Straight-line destinations over present, empty tiles.
    fn slides_from(&self, tiles: &[u8], penguins: &[u8], from: u16) -> Vec<u16> {
        let mut out = Vec::new();
        let (q0, r0) = self.axial_of(from);
        for (dq, dr) in AXIAL_DIRS {
            let (mut q, mut r) = (q0, r0);
            loop {
                q += dq;
                r += dr;
                let Some(idx) = self.index_of_axial(q, r) else {
                    break;
                };
                if tiles[idx as usize] == 0 || penguins[idx as usize] != 0 {
                    break;
                }
                out.push(idx);
            }
        }
        out.sort_unstable();
        out
    }

    fn moves_of(&self, tiles: &[u8], penguins: &[u8], player: u8) -> Vec<HeyFishAction> {
        let mut out = Vec::new();
        for from in 0..penguins.len() as u16 {
            if penguins[from as usize] != 1 + player {
                continue;
            }
            for to in self.slides_from(tiles, penguins, from) {
                out.push(HeyFishAction { from, to });
            }
        }
        out.sort_unstable();
        out
    }

    /// Remove every penguin without a move, crediting the tile it stands
    /// on, until none are stuck. Removals only shrink the board, so the
    /// result does not depend on sweep order.
    fn sweep_stuck(
        &self,
        tiles: &mut [u8],
        penguins: &mut [u8],
        scores: &mut [u16; HEYFISH_PLAYERS],
    ) {
        loop {
            let stuck: Vec<u16> = (0..penguins.len() as u16)
                .filter(|&i| {
                    penguins[i as usize] != 0 && self.slides_from(tiles, penguins, i).is_empty()
                })
                .collect();
            if stuck.is_empty() {
                return;
            }
            for idx in stuck {
                let owner = penguins[idx as usize] - 1;
                scores[owner as usize] += u16::from(tiles[idx as usize]);
                tiles[idx as usize] = 0;
                penguins[idx as usize] = 0;
            }
        }
    }

    /// First seat from `from` (cyclic) that still owns a penguin.
    fn seat_with_penguins(&self, penguins: &[u8], from: u8) -> Option<PlayerId> {
        (0..HEYFISH_PLAYERS as u8)
            .map(|k| (from + k) % HEYFISH_PLAYERS as u8)
            .find(|&p| penguins.iter().any(|&v| v == 1 + p))
            .map(PlayerId)
    }

    fn settled(
        &self,
        mut tiles: Vec<u8>,
        mut penguins: Vec<u8>,
        mut scores: [u16; HEYFISH_PLAYERS],
        from: u8,
    ) -> HeyFishState {
        self.sweep_stuck(&mut tiles, &mut penguins, &mut scores);
        let mover = self
            .seat_with_penguins(&penguins, from)
            .unwrap_or(PlayerId(0));
        HeyFishState {
            tiles,
            penguins,
            scores,
            mover,
        }
    }
}

impl Game for HeyFish {
    type State = HeyFishState;
    type Action = HeyFishAction;

    fn name(&self) -> &str {
        "hey_fish"
    }

    fn player_count(&self) -> usize {
        HEYFISH_PLAYERS
    }

    fn initial_state(&self) -> HeyFishState {
        let total = self.rows * self.cols;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut order: Vec<u16> = (0..total as u16).collect();
        order.shuffle(&mut rng);
        let mut tiles = alloc::vec![1u8; total];
        let n3 = total / 6;
        let n2 = total / 3;
        for &idx in &order[..n3] {
            tiles[idx as usize] = 3;
        }
        for &idx in &order[n3..n3 + n2] {
            tiles[idx as usize] = 2;
        }
        let mut penguins = alloc::vec![0u8; total];
        for (k, &idx) in order[n3 + n2..].iter().take(HEYFISH_PLAYERS * self.penguins).enumerate()
        {
            penguins[idx as usize] = 1 + (k % HEYFISH_PLAYERS) as u8;
        }
        self.settled(tiles, penguins, [0; HEYFISH_PLAYERS], 0)
    }

    fn is_terminal(&self, state: &HeyFishState) -> bool {
        state.penguins.iter().all(|&v| v == 0)
    }

    fn current_player(&self, state: &HeyFishState) -> Result<PlayerId, GameError> {
        if self.is_terminal(state) {
            return Err(GameError::Terminal);
        }
        Ok(state.mover)
    }

    fn legal_actions(&self, state: &HeyFishState) -> Result<Vec<HeyFishAction>, GameError> {
        if self.is_terminal(state) {
            return Err(GameError::Terminal);
        }
        Ok(self.moves_of(&state.tiles, &state.penguins, state.mover.0))
    }

    fn apply(&self, state: &HeyFishState, action: HeyFishAction) -> Result<HeyFishState, GameError> {
        if self.is_terminal(state) {
            return Err(GameError::Terminal);
        }
        if state.penguins[action.from as usize] != 1 + state.mover.0 {
            return Err(GameError::IllegalAction(
                "no penguin of the mover there".to_string(),
            ));
        }
        if !self
            .slides_from(&state.tiles, &state.penguins, action.from)
            .contains(&action.to)
        {
            return Err(GameError::IllegalAction(
                "not a straight slide over ice".to_string(),
            ));
        }
        let mut tiles = state.tiles.clone();
        let mut penguins = state.penguins.clone();
        let mut scores = state.scores;
        scores[state.mover.index()] += u16::from(tiles[action.from as usize]);
        tiles[action.from as usize] = 0;
        penguins[action.from as usize] = 0;
        penguins[action.to as usize] = 1 + state.mover.0;
        Ok(self.settled(tiles, penguins, scores, state.mover.0 + 1))
    }

    fn terminal_payoff(&self, state: &HeyFishState) -> Result<PayoffVector, GameError> {
        if !self.is_terminal(state) {
            return Err(GameError::NotTerminal);
        }
        Ok(PayoffVector::from_fn(HEYFISH_PLAYERS, |p| {
            f64::from(state.scores[p.index()])
        }))
    }

    fn zobrist_key(&self, state: &HeyFishState) -> ZobristKey {
        let mut key = self.mover_features[state.mover.index()];
        for i in 0..state.tiles.len() {
            if state.tiles[i] != 0 {
                key ^= self.tile_features[i][(state.tiles[i] - 1) as usize];
            }
            if state.penguins[i] != 0 {
                key ^= self.penguin_features[i][(state.penguins[i] - 1) as usize];
            }
        }
        for p in 0..HEYFISH_PLAYERS {
            key ^= self.score_features[state.scores[p] as usize][p];
        }
        ZobristKey(key)
    }

    fn progress_measure(&self, state: &HeyFishState) -> u64 {
        state.tiles.iter().filter(|&&f| f == 0).count() as u64
    }

    fn encode_state(&self, state: &HeyFishState) -> String {
        let mut out = String::new();
        for r in 0..self.rows {
            if r > 0 {
                out.push('/');
            }
            for c in 0..self.cols {
                let i = r * self.cols + c;
                out.push(match (state.tiles[i], state.penguins[i]) {
                    (0, _) => '.',
                    (f, 0) => (b'0' + f) as char,
                    (f, p) => (b'A' + 3 * (p - 1) + (f - 1)) as char,
                });
            }
        }
        format!(
            "{out} s{},{},{} m{}",
            state.scores[0], state.scores[1], state.scores[2], state.mover
        )
    }

    /// Crafted positions are settled exactly as `apply` would settle them:
    /// stuck penguins are swept and the mover advanced to a seat that can
    /// play.
    fn parse_state(&self, text: &str) -> Result<HeyFishState, GameError> {
        let bad = |m: &str| GameError::ParseError(m.to_string());
        let mut parts = text.split_whitespace();
        let rows = parts.next().ok_or_else(|| bad("missing board"))?;
        let score_part = parts.next().ok_or_else(|| bad("missing scores"))?;
        let mover_part = parts.next().ok_or_else(|| bad("missing mover"))?;
        let total = self.rows * self.cols;
        let mut tiles = Vec::with_capacity(total);
        let mut penguins = Vec::with_capacity(total);
        for ch in rows.chars() {
            match ch {
                '/' => {}
                '.' => {
                    tiles.push(0);
                    penguins.push(0);
                }
                '1'..='3' => {
                    tiles.push(ch as u8 - b'0');
                    penguins.push(0);
                }
                'A'..='I' => {
                    let v = ch as u8 - b'A';
                    tiles.push(1 + v % 3);
                    penguins.push(1 + v / 3);
                }
                _ => return Err(bad("cells must be '.', '1'..'3' or 'A'..'I'")),
            }
        }
        if tiles.len() != total {
            return Err(bad("wrong cell count for this board"));
        }
        let nums: Vec<&str> = score_part
            .strip_prefix('s')
            .ok_or_else(|| bad("scores must be s<a>,<b>,<c>"))?
            .split(',')
            .collect();
        if nums.len() != HEYFISH_PLAYERS {
            return Err(bad("scores must list all three players"));
        }
        let mut scores = [0u16; HEYFISH_PLAYERS];
        for (slot, n) in scores.iter_mut().zip(nums) {
            *slot = n.parse().map_err(|_| bad("bad score"))?;
        }
        let mover: u8 = mover_part
            .strip_prefix('m')
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad("mover field must be m<digit>"))?;
        if mover as usize >= HEYFISH_PLAYERS {
            return Err(bad("mover out of range"));
        }
        Ok(self.settled(tiles, penguins, scores, mover))
    }

    fn action_text(&self, _state: &HeyFishState, action: HeyFishAction) -> String {
        let (fr, fc) = (
            action.from as usize / self.cols,
            action.from as usize % self.cols,
        );
        let (tr, tc) = (action.to as usize / self.cols, action.to as usize % self.cols);
        format!("({fr},{fc})-({tr},{tc})")
    }
}

impl crate::eval::HeuristicGame for HeyFish {
    fn heuristic_family(&self) -> &'static str {
        "material"
    }

    fn base_weights(&self) -> Vec<f64> {
        alloc::vec![1.0, 0.25]
    }

    /// Banked fish differential plus a slide-mobility differential.
    fn heuristic(&self, state: &HeyFishState, weights: &[f64]) -> PayoffVector {
        let total = self.rows * self.cols;
        let dealt = (3 * (total / 6) + 2 * (total / 3) + (total - total / 6 - total / 3)) as f64;
        let mobility: Vec<f64> = (0..HEYFISH_PLAYERS as u8)
            .map(|p| self.moves_of(&state.tiles, &state.penguins, p).len() as f64)
            .collect();
        PayoffVector::from_fn(HEYFISH_PLAYERS, |p| {
            let others_fish: f64 = (0..HEYFISH_PLAYERS)
                .filter(|&q| q != p.index())
                .map(|q| f64::from(state.scores[q]))
                .sum();
            let others_mob: f64 = (0..HEYFISH_PLAYERS)
                .filter(|&q| q != p.index())
                .map(|q| mobility[q])
                .sum();
            weights[0] * (f64::from(state.scores[p.index()]) - others_fish / 2.0) / dealt
                + weights[1] * (mobility[p.index()] - others_mob / 2.0) / total as f64
        })
    }
}
