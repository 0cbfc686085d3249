//! Transposition table for the best-first search.
//!
//! Entries live per state and hold one [`EdgeStats`] record per legal
//! action, indexed by action ordinal. The table is bounded: once the
//! capacity is reached further inserts are refused and the search winds
//! down as if its budget were exhausted, so proven resolutions are never
//! evicted.

use alloc::vec::Vec;

use crate::payoff::{PayoffVector, PlayerId};
use crate::zobrist::{KeyMap, ZobristKey};

/// Search statistics for one (state, action) edge.
#[derive(Clone, Debug)]
pub struct EdgeStats {
    /// Completion vector: expected terminal win/draw/loss payoff under the
    /// current best line, in [-1, 1] per player. Zero until a terminal is
    /// backed up through this edge.
    pub completion: PayoffVector,
    /// Heuristic value vector backed up from the current best line.
    pub value: PayoffVector,
    /// How often descent selected this edge.
    pub visits: u64,
    /// Proven: the subtree below can no longer change `completion`.
    pub resolved: bool,
}

/// Table entry for one state.
#[derive(Clone, Debug)]
pub struct StoredState {
    /// Player to move in this state.
    pub mover: PlayerId,
    /// One record per legal action, in canonical action order.
    pub edges: Vec<EdgeStats>,
}

impl StoredState {
    /// Index of the edge a player would pick among `edges`: lexicographic
    /// maximum of (completion, value) in the mover's component, lowest
    /// ordinal on ties. Considers every edge, resolved or not.
    pub fn best_edge(&self) -> usize {
        let p = self.mover;
        let mut best = 0usize;
        for (i, e) in self.edges.iter().enumerate().skip(1) {
            let b = &self.edges[best];
            if (e.completion[p], e.value[p]) > (b.completion[p], b.value[p]) {
                best = i;
            }
        }
        best
    }

    /// Like [`best_edge`](Self::best_edge) restricted to unresolved edges.
    /// `None` when everything is resolved.
    pub fn best_unresolved_edge(&self) -> Option<usize> {
        let p = self.mover;
        let mut best: Option<usize> = None;
        for (i, e) in self.edges.iter().enumerate() {
            if e.resolved {
                continue;
            }
            match best {
                None => best = Some(i),
                Some(j) => {
                    let b = &self.edges[j];
                    if (e.completion[p], e.value[p]) > (b.completion[p], b.value[p]) {
                        best = Some(i);
                    }
                }
            }
        }
        best
    }

    pub fn all_resolved(&self) -> bool {
        self.edges.iter().all(|e| e.resolved)
    }
}

/// Bounded map from state key to per-action statistics.
#[derive(Debug)]
pub struct TranspositionTable {
    map: KeyMap<ZobristKey, StoredState>,
    capacity: usize,
}

impl TranspositionTable {
    /// Table bounded to `capacity` states.
    pub fn new(capacity: usize) -> TranspositionTable {
        TranspositionTable {
            map: KeyMap::default(),
            capacity,
        }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.map.len() >= self.capacity
    }

    pub fn get(&self, key: ZobristKey) -> Option<&StoredState> {
        self.map.get(&key)
    }

    pub fn get_mut(&mut self, key: ZobristKey) -> Option<&mut StoredState> {
        self.map.get_mut(&key)
    }

    /// Insert a fresh entry. Returns false (and drops the entry) when the
    /// table is at capacity; existing keys are always overwritten.
    pub fn insert(&mut self, key: ZobristKey, entry: StoredState) -> bool {
        if !self.map.contains_key(&key) && self.is_full() {
            return false;
        }
        self.map.insert(key, entry);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge(c: f64, v: f64, resolved: bool) -> EdgeStats {
        EdgeStats {
            completion: PayoffVector::new(&[c, -c, -c]),
            value: PayoffVector::new(&[v, 0.0, 0.0]),
            visits: 0,
            resolved,
        }
    }

    #[test]
    fn best_edge_orders_completion_before_value() {
        let s = StoredState {
            mover: PlayerId(0),
            edges: alloc::vec![edge(0.0, 9.0, false), edge(1.0, -5.0, true), edge(1.0, -5.0, true)],
        };
        assert_eq!(s.best_edge(), 1);
        assert_eq!(s.best_unresolved_edge(), Some(0));
    }

    #[test]
    fn capacity_refuses_new_keys_but_allows_updates() {
        let mut tt = TranspositionTable::new(1);
        let s = StoredState {
            mover: PlayerId(0),
            edges: alloc::vec![edge(0.0, 0.0, false)],
        };
        assert!(tt.insert(ZobristKey(1), s.clone()));
        assert!(!tt.insert(ZobristKey(2), s.clone()));
        assert!(tt.insert(ZobristKey(1), s));
        assert_eq!(tt.len(), 1);
    }
}
