//! Separed Teamhex: four-player team Hex on a square hex board with
//! quadrant zones.
//!
//! Teams are fixed: players 0 and 2 against players 1 and 3. The board's
//! four quadrants A..D gate placement through an eight-step cycle, each
//! quadrant hosting one player from each team. A player wins strongly by
//! connecting their own pair of half-edges with their stones alone; if no
//! strong win exists, a team wins jointly when the union of both allies'
//! stones connects the team's full opposite edges.
//!
//! The board figure this geometry reconstructs is not part of the source
//! text; the quadrants and half-edge assignments here are the ones that
//! make each player's strong goal reachable inside their two quadrants
//! while the team goals recover the two-player game's opposite edges.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::game::{Game, GameError};
use crate::games::hexgrid::SquareHexBoard;
use crate::payoff::{PayoffVector, PlayerId};
use crate::zobrist::{FeatureStream, ZobristKey};

pub const TEAMHEX_PLAYERS: usize = 4;

/// (player, zone) pairs of the fixed turn cycle: black and yellow open in
/// A, then white and black in B, blue and white in C, yellow and blue in D.
pub const TEAMHEX_CYCLE: [(u8, u8); 8] = [
    (0, 0),
    (3, 0),
    (1, 1),
    (0, 1),
    (2, 2),
    (1, 2),
    (3, 3),
    (2, 3),
];

pub fn team_of(player: PlayerId) -> u8 {
    player.0 % 2
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum TeamhexOutcome {
    Strong(PlayerId),
    Team(u8),
    /// Board full without a connection; unreachable under the implemented
    /// geometry but kept as a defensive terminal.
    Draw,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TeamhexGoal {
    Strong(PlayerId),
    Team(u8),
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TeamhexState {
    /// 0 empty, 1..=4 a stone of player v-1.
    cells: Vec<u8>,
    /// Index into [`TEAMHEX_CYCLE`]; always points at a playable step of
    /// the cycle while the game runs.
    step: u8,
    outcome: Option<TeamhexOutcome>,
}

impl TeamhexState {
    pub fn stone(&self, idx: u16) -> Option<PlayerId> {
        match self.cells[idx as usize] {
            0 => None,
            v => Some(PlayerId(v - 1)),
        }
    }

    pub fn outcome(&self) -> Option<TeamhexOutcome> {
        self.outcome
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct TeamhexAction(pub u16);

pub struct Teamhex {
    board: SquareHexBoard,
    /// Goal segments: per player the two half-edges, per team the two full
    /// edges.
    strong_goals: [(Vec<u16>, Vec<u16>); TEAMHEX_PLAYERS],
    team_goals: [(Vec<u16>, Vec<u16>); 2],
    cell_features: Vec<[u64; 4]>,
    step_features: [u64; 8],
}

impl Teamhex {
    pub fn new(n: usize) -> Result<Teamhex, GameError> {
        if n % 2 != 0 || !(4..=100).contains(&n) {
            return Err(GameError::BadConfig(
                "separed_teamhex needs an even board side in 4..=100".to_string(),
            ));
        }
        let board = SquareHexBoard::new(n);
        let h = n / 2;
        let col = |c: usize, rows: core::ops::Range<usize>| -> Vec<u16> {
            rows.map(|r| board.index(r, c)).collect()
        };
        let row = |r: usize, cols: core::ops::Range<usize>| -> Vec<u16> {
            cols.map(|c| board.index(r, c)).collect()
        };
        let strong_goals = [
            (col(0, 0..h), col(n - 1, 0..h)),
            (row(0, h..n), row(n - 1, h..n)),
            (col(0, h..n), col(n - 1, h..n)),
            (row(0, 0..h), row(n - 1, 0..h)),
        ];
        let team_goals = [
            (col(0, 0..n), col(n - 1, 0..n)),
            (row(0, 0..n), row(n - 1, 0..n)),
        ];
        let mut stream = FeatureStream::new(&format!("separed_teamhex:{n}"));
        let cell_features = (0..board.cell_count())
            .map(|_| {
                let mut f = [0u64; 4];
                for v in &mut f {
                    *v = stream.next_value();
                }
                f
            })
            .collect();
        let mut step_features = [0u64; 8];
        for v in &mut step_features {
            *v = stream.next_value();
        }
        Ok(Teamhex {
            board,
            strong_goals,
            team_goals,
            cell_features,
            step_features,
        })
    }

    pub fn board(&self) -> &SquareHexBoard {
        &self.board
    }

    pub fn zone_of(&self, idx: u16) -> u8 {
        let (r, c) = self.board.coords(idx);
        let h = self.board.n() / 2;
        match (r < h, c < h) {
            (true, true) => 0,
            (true, false) => 1,
            (false, false) => 2,
            (false, true) => 3,
        }
    }

    fn zone_has_space(&self, cells: &[u8], zone: u8) -> bool {
        (0..cells.len() as u16).any(|i| cells[i as usize] == 0 && self.zone_of(i) == zone)
    }

    /// Next playable step at or after `step`; None when every zone is full.
    fn normalize_step(&self, cells: &[u8], step: u8) -> Option<u8> {
        (0..8u8)
            .map(|k| (step + k) % 8)
            .find(|&s| self.zone_has_space(cells, TEAMHEX_CYCLE[s as usize].1))
    }

    pub fn connected(&self, state: &TeamhexState, goal: TeamhexGoal) -> bool {
        match goal {
            TeamhexGoal::Strong(p) => {
                let own = 1 + p.0;
                let (from, to) = &self.strong_goals[p.index()];
                self.board
                    .sets_connected(|i| state.cells[i as usize] == own, from, to)
            }
            TeamhexGoal::Team(t) => {
                let (from, to) = &self.team_goals[t as usize];
                self.board.sets_connected(
                    |i| {
                        let v = state.cells[i as usize];
                        v != 0 && (v - 1) % 2 == t
                    },
                    from,
                    to,
                )
            }
        }
    }

    /// A move by `player` can only create that player's strong win or
    /// their team's win, checked in that order.
    fn outcome_after(&self, state: &TeamhexState, player: PlayerId) -> Option<TeamhexOutcome> {
        if self.connected(state, TeamhexGoal::Strong(player)) {
            Some(TeamhexOutcome::Strong(player))
        } else if self.connected(state, TeamhexGoal::Team(team_of(player))) {
            Some(TeamhexOutcome::Team(team_of(player)))
        } else {
            None
        }
    }

    fn payoff_of(&self, outcome: TeamhexOutcome) -> PayoffVector {
        match outcome {
            TeamhexOutcome::Strong(w) => PayoffVector::from_fn(TEAMHEX_PLAYERS, |p| {
                if p == w {
                    2.0
                } else {
                    -2.0
                }
            }),
            TeamhexOutcome::Team(t) => PayoffVector::from_fn(TEAMHEX_PLAYERS, |p| {
                if team_of(p) == t {
                    1.0
                } else {
                    -1.0
                }
            }),
            TeamhexOutcome::Draw => PayoffVector::zeros(TEAMHEX_PLAYERS),
        }
    }

    fn place(
        &self,
        state: &TeamhexState,
        player: PlayerId,
        zones: &[u8],
        at: u16,
    ) -> Result<Vec<u8>, GameError> {
        if at as usize >= state.cells.len() {
            return Err(GameError::IllegalAction(format!("no cell {at}")));
        }
        if state.cells[at as usize] != 0 {
            return Err(GameError::IllegalAction("cell is occupied".to_string()));
        }
        if !zones.contains(&self.zone_of(at)) {
            return Err(GameError::IllegalAction(
                "placement outside the allowed zone".to_string(),
            ));
        }
        let mut cells = state.cells.clone();
        cells[at as usize] = 1 + player.0;
        Ok(cells)
    }
}

impl Game for Teamhex {
    type State = TeamhexState;
    type Action = TeamhexAction;

    fn name(&self) -> &str {
        "separed_teamhex"
    }

    fn player_count(&self) -> usize {
        TEAMHEX_PLAYERS
    }

    fn initial_state(&self) -> TeamhexState {
        TeamhexState {
            cells: alloc::vec![0; self.board.cell_count()],
            step: 0,
            outcome: None,
        }
    }

    fn is_terminal(&self, state: &TeamhexState) -> bool {
        state.outcome.is_some()
    }

    fn current_player(&self, state: &TeamhexState) -> Result<PlayerId, GameError> {
        if self.is_terminal(state) {
            return Err(GameError::Terminal);
        }
        Ok(PlayerId(TEAMHEX_CYCLE[state.step as usize].0))
    }

    fn legal_actions(&self, state: &TeamhexState) -> Result<Vec<TeamhexAction>, GameError> {
        if self.is_terminal(state) {
            return Err(GameError::Terminal);
        }
        let zone = TEAMHEX_CYCLE[state.step as usize].1;
        Ok((0..state.cells.len() as u16)
            .filter(|&i| state.cells[i as usize] == 0 && self.zone_of(i) == zone)
            .map(TeamhexAction)
            .collect())
    }

    fn apply(&self, state: &TeamhexState, action: TeamhexAction) -> Result<TeamhexState, GameError> {
        if self.is_terminal(state) {
            return Err(GameError::Terminal);
        }
        let (player, zone) = TEAMHEX_CYCLE[state.step as usize];
        let cells = self.place(state, PlayerId(player), &[zone], action.0)?;
        let mut next = TeamhexState {
            cells,
            step: state.step,
            outcome: None,
        };
        next.outcome = self.outcome_after(&next, PlayerId(player));
        if next.outcome.is_none() {
            match self.normalize_step(&next.cells, (state.step + 1) % 8) {
                Some(step) => next.step = step,
                None => next.outcome = Some(TeamhexOutcome::Draw),
            }
        }
        Ok(next)
    }

    fn terminal_payoff(&self, state: &TeamhexState) -> Result<PayoffVector, GameError> {
        match state.outcome {
            Some(outcome) => Ok(self.payoff_of(outcome)),
            None => Err(GameError::NotTerminal),
        }
    }

    fn zobrist_key(&self, state: &TeamhexState) -> ZobristKey {
        let mut key = self.step_features[state.step as usize % 8];
        for (i, &v) in state.cells.iter().enumerate() {
            if v != 0 {
                key ^= self.cell_features[i][(v - 1) as usize];
            }
        }
        ZobristKey(key)
    }

    fn progress_measure(&self, state: &TeamhexState) -> u64 {
        state.cells.iter().filter(|&&v| v != 0).count() as u64
    }

    fn supports_out_of_turn(&self) -> bool {
        true
    }

    fn out_of_turn_actions(
        &self,
        state: &TeamhexState,
        player: PlayerId,
    ) -> Result<Vec<TeamhexAction>, GameError> {
        if self.is_terminal(state) {
            return Err(GameError::Terminal);
        }
        let zones = player_zones(player);
        Ok((0..state.cells.len() as u16)
            .filter(|&i| state.cells[i as usize] == 0 && zones.contains(&self.zone_of(i)))
            .map(TeamhexAction)
            .collect())
    }

    fn apply_out_of_turn(
        &self,
        state: &TeamhexState,
        player: PlayerId,
        action: TeamhexAction,
    ) -> Result<TeamhexState, GameError> {
        if self.is_terminal(state) {
            return Err(GameError::Terminal);
        }
        let cells = self.place(state, player, &player_zones(player), action.0)?;
        let mut next = TeamhexState {
            cells,
            step: state.step,
            outcome: None,
        };
        next.outcome = self.outcome_after(&next, player);
        if next.outcome.is_none() {
            // The nominal mover's zone may just have filled up; keep the
            // step invariant without advancing past playable steps.
            match self.normalize_step(&next.cells, state.step) {
                Some(step) => next.step = step,
                None => next.outcome = Some(TeamhexOutcome::Draw),
            }
        }
        Ok(next)
    }

    fn encode_state(&self, state: &TeamhexState) -> String {
        let n = self.board.n();
        let mut out = String::new();
        for r in 0..n {
            if r > 0 {
                out.push('/');
            }
            for c in 0..n {
                out.push(match state.cells[r * n + c] {
                    0 => '.',
                    v => (b'0' + v - 1) as char,
                });
            }
        }
        format!("{out} s{}", state.step)
    }

    fn parse_state(&self, text: &str) -> Result<TeamhexState, GameError> {
        let bad = |m: &str| GameError::ParseError(m.to_string());
        let mut parts = text.split_whitespace();
        let rows = parts.next().ok_or_else(|| bad("missing board"))?;
        let step_part = parts.next().ok_or_else(|| bad("missing step"))?;
        let mut cells = Vec::with_capacity(self.board.cell_count());
        for ch in rows.chars() {
            match ch {
                '/' => {}
                '.' => cells.push(0),
                '0'..='3' => cells.push(1 + ch as u8 - b'0'),
                _ => return Err(bad("cells must be '.' or '0'..'3'")),
            }
        }
        if cells.len() != self.board.cell_count() {
            return Err(bad("wrong cell count for this board"));
        }
        let step: u8 = step_part
            .strip_prefix('s')
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad("step field must be s<0..7>"))?;
        if step >= 8 {
            return Err(bad("step out of range"));
        }
        let mut state = TeamhexState {
            cells,
            step,
            outcome: None,
        };
        state.outcome = (0..TEAMHEX_PLAYERS as u8)
            .map(PlayerId)
            .find(|&p| self.connected(&state, TeamhexGoal::Strong(p)))
            .map(TeamhexOutcome::Strong)
            .or_else(|| {
                (0..2u8)
                    .find(|&t| self.connected(&state, TeamhexGoal::Team(t)))
                    .map(TeamhexOutcome::Team)
            });
        if state.outcome.is_none() {
            match self.normalize_step(&state.cells, step) {
                Some(s) => state.step = s,
                None => state.outcome = Some(TeamhexOutcome::Draw),
            }
        }
        Ok(state)
    }

    fn action_text(&self, _state: &TeamhexState, action: TeamhexAction) -> String {
        let (r, c) = self.board.coords(action.0);
        format!("({r},{c})")
    }
}

/// The two quadrants a player's cycle steps place into.
fn player_zones(player: PlayerId) -> [u8; 2] {
    match player.0 {
        0 => [0, 1],
        1 => [1, 2],
        2 => [2, 3],
        _ => [3, 0],
    }
}

impl crate::eval::HeuristicGame for Teamhex {
    fn heuristic_family(&self) -> &'static str {
        "connectivity"
    }

    fn base_weights(&self) -> Vec<f64> {
        alloc::vec![1.0, 0.5]
    }

    /// Team and strong connection-potential differentials: how many extra
    /// placements the opposition still needs minus how many we do.
    fn heuristic(&self, state: &TeamhexState, weights: &[f64]) -> PayoffVector {
        let n = self.board.n() as f64;
        let blocked = 2.0 * n;
        let team_cost = |t: u8| -> f64 {
            let (from, to) = &self.team_goals[t as usize];
            self.board
                .connection_cost(
                    |i| match state.cells[i as usize] {
                        0 => Some(1),
                        v if (v - 1) % 2 == t => Some(0),
                        _ => None,
                    },
                    from,
                    to,
                )
                .map(|c| c as f64)
                .unwrap_or(blocked)
        };
        let strong_cost = |p: PlayerId| -> f64 {
            let own = 1 + p.0;
            let (from, to) = &self.strong_goals[p.index()];
            self.board
                .connection_cost(
                    |i| match state.cells[i as usize] {
                        0 => Some(1),
                        v if v == own => Some(0),
                        _ => None,
                    },
                    from,
                    to,
                )
                .map(|c| c as f64)
                .unwrap_or(blocked)
        };
        let team_need = [team_cost(0), team_cost(1)];
        let strong_need: Vec<f64> = (0..TEAMHEX_PLAYERS as u8)
            .map(|p| strong_cost(PlayerId(p)))
            .collect();
        PayoffVector::from_fn(TEAMHEX_PLAYERS, |p| {
            let t = team_of(p) as usize;
            let rival_strong = (0..TEAMHEX_PLAYERS)
                .filter(|&q| q != p.index())
                .map(|q| strong_need[q])
                .fold(f64::INFINITY, f64::min);
            (weights[0] * (team_need[1 - t] - team_need[t])
                + weights[1] * (rival_strong - strong_need[p.index()]))
                / n
        })
    }
}
