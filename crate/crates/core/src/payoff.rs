//! Player identifiers and per-player payoff vectors.
//!
//! Every game in this crate involves 2 to 4 players, so payoff vectors are
//! stored inline rather than heap-allocated.

use core::fmt;
use core::ops::Index;

/// Maximum number of players supported by any game in the crate.
pub const MAX_PLAYERS: usize = 4;

/// A seat index, `0 <= id < player_count`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PlayerId(pub u8);

impl PlayerId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// Next seat in cyclic turn order.
    #[inline]
    pub fn next(self, player_count: usize) -> PlayerId {
        PlayerId(((self.index() + 1) % player_count) as u8)
    }
}

impl fmt::Display for PlayerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One f64 component per player, in seat order.
///
/// Comparison is exact (bitwise on the float values); all producers in this
/// crate are deterministic, so exact equality is meaningful.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct PayoffVector {
    len: u8,
    vals: [f64; MAX_PLAYERS],
}

impl PayoffVector {
    pub fn new(components: &[f64]) -> PayoffVector {
        assert!(
            components.len() >= 2 && components.len() <= MAX_PLAYERS,
            "payoff vector needs 2..=4 components, got {}",
            components.len()
        );
        let mut vals = [0.0; MAX_PLAYERS];
        vals[..components.len()].copy_from_slice(components);
        PayoffVector {
            len: components.len() as u8,
            vals,
        }
    }

    pub fn zeros(player_count: usize) -> PayoffVector {
        assert!((2..=MAX_PLAYERS).contains(&player_count));
        PayoffVector {
            len: player_count as u8,
            vals: [0.0; MAX_PLAYERS],
        }
    }

    pub fn from_fn(player_count: usize, mut f: impl FnMut(PlayerId) -> f64) -> PayoffVector {
        let mut v = PayoffVector::zeros(player_count);
        for p in 0..player_count {
            v.vals[p] = f(PlayerId(p as u8));
        }
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn get(&self, p: PlayerId) -> f64 {
        debug_assert!(p.index() < self.len());
        self.vals[p.index()]
    }

    pub fn set(&mut self, p: PlayerId, value: f64) {
        assert!(p.index() < self.len());
        self.vals[p.index()] = value;
    }

    pub fn components(&self) -> &[f64] {
        &self.vals[..self.len()]
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.components().iter().copied()
    }

    pub fn map(&self, mut f: impl FnMut(f64) -> f64) -> PayoffVector {
        let mut out = *self;
        for v in &mut out.vals[..self.len as usize] {
            *v = f(*v);
        }
        out
    }

    /// Largest component value.
    pub fn max_component(&self) -> f64 {
        let mut best = f64::NEG_INFINITY;
        for v in self.iter() {
            if v > best {
                best = v;
            }
        }
        best
    }

    /// Players holding the maximal component (score-based winner set).
    pub fn maximal_players(&self) -> impl Iterator<Item = PlayerId> + '_ {
        let best = self.max_component();
        (0..self.len())
            .filter(move |&p| self.vals[p] == best)
            .map(|p| PlayerId(p as u8))
    }
}

impl Index<PlayerId> for PayoffVector {
    type Output = f64;

    fn index(&self, p: PlayerId) -> &f64 {
        &self.vals[..self.len()][p.index()]
    }
}

impl fmt::Display for PayoffVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// Derive a win/loss vector from a score vector: players with the strictly
/// maximal score win (+1), everyone else loses (-1). An all-way tie is a draw
/// and the whole vector is 0.
pub fn win_loss_from_scores(scores: &PayoffVector) -> PayoffVector {
    let best = scores.max_component();
    let winners = scores.iter().filter(|&v| v == best).count();
    if winners == scores.len() {
        return PayoffVector::zeros(scores.len());
    }
    scores.map(|v| if v == best { 1.0 } else { -1.0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn win_loss_single_winner() {
        let v = PayoffVector::new(&[5.0, 3.0, 2.0]);
        assert_eq!(
            win_loss_from_scores(&v),
            PayoffVector::new(&[1.0, -1.0, -1.0])
        );
    }

    #[test]
    fn win_loss_partial_tie() {
        let v = PayoffVector::new(&[4.0, 4.0, 1.0, 0.0]);
        assert_eq!(
            win_loss_from_scores(&v),
            PayoffVector::new(&[1.0, 1.0, -1.0, -1.0])
        );
    }

    #[test]
    fn win_loss_all_way_tie_is_draw() {
        let v = PayoffVector::new(&[2.0, 2.0, 2.0]);
        assert_eq!(win_loss_from_scores(&v), PayoffVector::zeros(3));
    }
}
