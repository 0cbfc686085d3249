//! Hexagonal-grid geometry shared by the hex-family games.
//!
//! Two board shapes are used: a hexagon-shaped board in axial coordinates
//! (3-Player Hex, Threehex, Triinversion) and an N by N rhombus with the
//! classic Hex adjacency (Separed Teamhex). Hey That's My Fish uses an
//! odd-r offset rectangle and converts to axial for line movement.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

/// Axial direction offsets `(dq, dr)`, starting east and turning
/// counterclockwise. Opposite directions are three apart.
pub const AXIAL_DIRS: [(i32, i32); 6] = [(1, 0), (1, -1), (0, -1), (-1, 0), (-1, 1), (0, 1)];

/// Sentinel for "no neighbour" in adjacency arrays.
pub const NO_CELL: u16 = u16::MAX;

/// Convert odd-r offset coordinates (row, col) to axial (q, r).
pub fn oddr_to_axial(row: i32, col: i32) -> (i32, i32) {
    (col - (row - (row & 1)) / 2, row)
}

/// Convert axial (q, r) back to odd-r offset (row, col).
pub fn axial_to_oddr(q: i32, r: i32) -> (i32, i32) {
    (r, q + (r - (r & 1)) / 2)
}

/// Hexagon-shaped board with `side` cells on each of its six sides,
/// 3·side² − 3·side + 1 cells total, axial coordinates centred on (0, 0):
/// a cell (q, r) is on the board iff |q|, |r| and |q + r| are all < side.
///
/// The six board sides are numbered 0..6; side k and side k + 3 are
/// opposite. Corner cells belong to both adjacent sides.
///
/// ```text
///   side 0: r = -(side-1)   (top row)        side 3: r = +(side-1)
///   side 1: q = +(side-1)                    side 4: q = -(side-1)
///   side 2: q + r = +(side-1)                side 5: q + r = -(side-1)
/// ```
pub struct HexHexBoard {
    side: i32,
    cells: Vec<(i32, i32)>,
    index: Vec<u16>,
    adj: Vec<[u16; 6]>,
    side_mask: Vec<u8>,
}

impl HexHexBoard {
    pub fn new(side: u32) -> HexHexBoard {
        assert!(side >= 1 && side <= 100, "hex board side out of range");
        let s = side as i32;
        let span = 2 * s - 1;
        let mut cells = Vec::new();
        let mut index = vec![NO_CELL; (span * span) as usize];
        for r in -(s - 1)..=(s - 1) {
            for q in -(s - 1)..=(s - 1) {
                if (q + r).abs() <= s - 1 {
                    index[((r + s - 1) * span + (q + s - 1)) as usize] = cells.len() as u16;
                    cells.push((q, r));
                }
            }
        }
        let mut adj = Vec::with_capacity(cells.len());
        let mut side_mask = Vec::with_capacity(cells.len());
        for &(q, r) in &cells {
            let mut n = [NO_CELL; 6];
            for (d, &(dq, dr)) in AXIAL_DIRS.iter().enumerate() {
                if let Some(i) = lookup(&index, span, s, q + dq, r + dr) {
                    n[d] = i;
                }
            }
            adj.push(n);
            let mut mask = 0u8;
            if r == -(s - 1) {
                mask |= 1 << 0;
            }
            if q == s - 1 {
                mask |= 1 << 1;
            }
            if q + r == s - 1 {
                mask |= 1 << 2;
            }
            if r == s - 1 {
                mask |= 1 << 3;
            }
            if q == -(s - 1) {
                mask |= 1 << 4;
            }
            if q + r == -(s - 1) {
                mask |= 1 << 5;
            }
            side_mask.push(mask);
        }
        HexHexBoard {
            side: s,
            cells,
            index,
            adj,
            side_mask,
        }
    }

    #[inline]
    pub fn side_len(&self) -> u32 {
        self.side as u32
    }

    #[inline]
    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    /// All cells in canonical order: r ascending, then q ascending.
    #[inline]
    pub fn cells(&self) -> &[(i32, i32)] {
        &self.cells
    }

    #[inline]
    pub fn coords(&self, idx: u16) -> (i32, i32) {
        self.cells[idx as usize]
    }

    pub fn index_of(&self, q: i32, r: i32) -> Option<u16> {
        lookup(&self.index, 2 * self.side - 1, self.side, q, r)
    }

    #[inline]
    pub fn contains(&self, q: i32, r: i32) -> bool {
        self.index_of(q, r).is_some()
    }

    pub fn neighbors(&self, idx: u16) -> impl Iterator<Item = u16> + '_ {
        self.adj[idx as usize].iter().copied().filter(|&n| n != NO_CELL)
    }

    /// Whether the cell lies on board side `k` (0..6).
    #[inline]
    pub fn on_side(&self, idx: u16, k: usize) -> bool {
        self.side_mask[idx as usize] & (1 << k) != 0
    }

    /// Whether passable cells connect side `sa` to side `sb`.
    pub fn sides_connected<F: Fn(u16) -> bool>(&self, pass: F, sa: usize, sb: usize) -> bool {
        let mut seen = vec![false; self.cell_count()];
        let mut queue = VecDeque::new();
        for idx in 0..self.cell_count() as u16 {
            if self.on_side(idx, sa) && pass(idx) {
                seen[idx as usize] = true;
                queue.push_back(idx);
            }
        }
        while let Some(idx) = queue.pop_front() {
            if self.on_side(idx, sb) {
                return true;
            }
            for n in self.neighbors(idx) {
                if !seen[n as usize] && pass(n) {
                    seen[n as usize] = true;
                    queue.push_back(n);
                }
            }
        }
        false
    }

    /// Cheapest side-to-side connection under per-cell entry costs of 0 or 1
    /// (`None` blocks the cell). Returns `None` when the sides cannot be
    /// joined at all. 0-1 breadth-first search.
    pub fn connection_cost<F: Fn(u16) -> Option<u32>>(
        &self,
        cost: F,
        sa: usize,
        sb: usize,
    ) -> Option<u32> {
        let mut dist = vec![u32::MAX; self.cell_count()];
        let mut queue = VecDeque::new();
        for idx in 0..self.cell_count() as u16 {
            if self.on_side(idx, sa) {
                if let Some(c) = cost(idx) {
                    if c < dist[idx as usize] {
                        dist[idx as usize] = c;
                        if c == 0 {
                            queue.push_front(idx);
                        } else {
                            queue.push_back(idx);
                        }
                    }
                }
            }
        }
        let mut best = None;
        while let Some(idx) = queue.pop_front() {
            let d = dist[idx as usize];
            if self.on_side(idx, sb) {
                best = Some(match best {
                    Some(b) if b <= d => b,
                    _ => d,
                });
                continue;
            }
            for n in self.neighbors(idx) {
                if let Some(c) = cost(n) {
                    let nd = d + c;
                    if nd < dist[n as usize] {
                        dist[n as usize] = nd;
                        if c == 0 {
                            queue.push_front(n);
                        } else {
                            queue.push_back(n);
                        }
                    }
                }
            }
        }
        best
    }
}

fn lookup(index: &[u16], span: i32, side: i32, q: i32, r: i32) -> Option<u16> {
    if q.abs() > side - 1 || r.abs() > side - 1 || (q + r).abs() > side - 1 {
        return None;
    }
    let i = index[((r + side - 1) * span + (q + side - 1)) as usize];
    if i == NO_CELL {
        None
    } else {
        Some(i)
    }
}

/// N by N rhombus of hexagons with the classic Hex adjacency:
/// (r, c±1), (r±1, c), (r−1, c+1), (r+1, c−1). Cell index = r·N + c.
pub struct SquareHexBoard {
    n: usize,
    adj: Vec<[u16; 6]>,
}

impl SquareHexBoard {
    pub fn new(n: usize) -> SquareHexBoard {
        assert!(n >= 2 && n <= 255, "square hex board size out of range");
        const DIRS: [(i32, i32); 6] = [(0, -1), (0, 1), (-1, 0), (1, 0), (-1, 1), (1, -1)];
        let mut adj = Vec::with_capacity(n * n);
        for r in 0..n as i32 {
            for c in 0..n as i32 {
                let mut nb = [NO_CELL; 6];
                for (d, &(dr, dc)) in DIRS.iter().enumerate() {
                    let (nr, nc) = (r + dr, c + dc);
                    if nr >= 0 && nr < n as i32 && nc >= 0 && nc < n as i32 {
                        nb[d] = (nr as usize * n + nc as usize) as u16;
                    }
                }
                adj.push(nb);
            }
        }
        SquareHexBoard { n, adj }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn cell_count(&self) -> usize {
        self.n * self.n
    }

    #[inline]
    pub fn index(&self, r: usize, c: usize) -> u16 {
        (r * self.n + c) as u16
    }

    #[inline]
    pub fn coords(&self, idx: u16) -> (usize, usize) {
        (idx as usize / self.n, idx as usize % self.n)
    }

    pub fn neighbors(&self, idx: u16) -> impl Iterator<Item = u16> + '_ {
        self.adj[idx as usize].iter().copied().filter(|&n| n != NO_CELL)
    }

    /// Whether passable cells connect one cell of `from` to any cell of `to`.
    pub fn sets_connected<F: Fn(u16) -> bool>(&self, pass: F, from: &[u16], to: &[u16]) -> bool {
        let mut target = vec![false; self.cell_count()];
        for &t in to {
            target[t as usize] = true;
        }
        let mut seen = vec![false; self.cell_count()];
        let mut queue = VecDeque::new();
        for &f in from {
            if pass(f) && !seen[f as usize] {
                seen[f as usize] = true;
                queue.push_back(f);
            }
        }
        while let Some(idx) = queue.pop_front() {
            if target[idx as usize] {
                return true;
            }
            for nb in self.neighbors(idx) {
                if !seen[nb as usize] && pass(nb) {
                    seen[nb as usize] = true;
                    queue.push_back(nb);
                }
            }
        }
        false
    }

    /// Cheapest connection between the two cell sets under 0/1 entry costs,
    /// as [`HexHexBoard::connection_cost`].
    pub fn connection_cost<F: Fn(u16) -> Option<u32>>(
        &self,
        cost: F,
        from: &[u16],
        to: &[u16],
    ) -> Option<u32> {
        let mut target = vec![false; self.cell_count()];
        for &t in to {
            target[t as usize] = true;
        }
        let mut dist = vec![u32::MAX; self.cell_count()];
        let mut queue = VecDeque::new();
        for &f in from {
            if let Some(c) = cost(f) {
                if c < dist[f as usize] {
                    dist[f as usize] = c;
                    if c == 0 {
                        queue.push_front(f);
                    } else {
                        queue.push_back(f);
                    }
                }
            }
        }
        let mut best = None;
        while let Some(idx) = queue.pop_front() {
            let d = dist[idx as usize];
            if target[idx as usize] {
                best = Some(match best {
                    Some(b) if b <= d => b,
                    _ => d,
                });
                continue;
            }
            for nb in self.neighbors(idx) {
                if let Some(c) = cost(nb) {
                    let nd = d + c;
                    if nd < dist[nb as usize] {
                        dist[nb as usize] = nd;
                        if c == 0 {
                            queue.push_front(nb);
                        } else {
                            queue.push_back(nb);
                        }
                    }
                }
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hexhex_cell_counts() {
        assert_eq!(HexHexBoard::new(2).cell_count(), 7);
        assert_eq!(HexHexBoard::new(7).cell_count(), 127);
    }

    #[test]
    fn center_has_six_neighbors() {
        let b = HexHexBoard::new(3);
        let c = b.index_of(0, 0).unwrap();
        assert_eq!(b.neighbors(c).count(), 6);
    }

    #[test]
    fn corners_sit_on_two_sides() {
        let b = HexHexBoard::new(4);
        let corner = b.index_of(3, -3).unwrap();
        assert!(b.on_side(corner, 0));
        assert!(b.on_side(corner, 1));
        let sides = (0..6).filter(|&k| b.on_side(corner, k)).count();
        assert_eq!(sides, 2);
    }

    #[test]
    fn opposite_sides_connect_through_the_middle() {
        let b = HexHexBoard::new(3);
        // The q = 0 column joins side 0 (top) to side 3 (bottom).
        let pass = |idx: u16| b.coords(idx).0 == 0;
        assert!(b.sides_connected(pass, 0, 3));
        assert!(!b.sides_connected(pass, 1, 4));
    }

    #[test]
    fn connection_cost_counts_empty_cells() {
        let b = HexHexBoard::new(3);
        // All cells cost 1: the cheapest top-to-bottom path enters 5 cells.
        let cost = b.connection_cost(|_| Some(1), 0, 3);
        assert_eq!(cost, Some(5));
        // Free cells along q = 0 drop the cost to zero.
        let cost = b.connection_cost(
            |idx| Some(if b.coords(idx).0 == 0 { 0 } else { 1 }),
            0,
            3,
        );
        assert_eq!(cost, Some(0));
        // Everything blocked: no connection.
        assert_eq!(b.connection_cost(|_| None, 0, 3), None);
    }

    #[test]
    fn square_board_adjacency_shape() {
        let b = SquareHexBoard::new(3);
        assert_eq!(b.neighbors(b.index(1, 1)).count(), 6);
        // Acute corners touch 2 cells, obtuse corners 3.
        assert_eq!(b.neighbors(b.index(0, 0)).count(), 2);
        assert_eq!(b.neighbors(b.index(2, 2)).count(), 2);
        assert_eq!(b.neighbors(b.index(0, 2)).count(), 3);
        assert_eq!(b.neighbors(b.index(2, 0)).count(), 3);
    }

    #[test]
    fn oddr_axial_roundtrip() {
        for r in -3..=3 {
            for c in -3..=3 {
                let (q, ar) = oddr_to_axial(r, c);
                assert_eq!(axial_to_oddr(q, ar), (r, c));
            }
        }
    }
}
