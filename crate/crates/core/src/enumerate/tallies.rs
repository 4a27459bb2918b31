use std::collections::BTreeMap;

use num_bigint::BigUint;

use crate::lattice::{OccupancySet, Point};

use super::engine::{Site, Tally};

/// Walks per length.
#[derive(Debug, Clone)]
pub(crate) struct LengthTally {
    counts: Vec<u64>,
}

impl LengthTally {
    pub fn new(max_len: usize) -> Self {
        LengthTally {
            counts: vec![0; max_len + 1],
        }
    }

    pub fn into_counts(self) -> Vec<BigUint> {
        self.counts.into_iter().map(BigUint::from).collect()
    }
}

impl Tally for LengthTally {
    const BULK_LEAVES: bool = true;

    fn fresh(&self) -> Self {
        LengthTally::new(self.counts.len() - 1)
    }

    fn push(&mut self, _: &OccupancySet, _: Site, _: usize) -> bool {
        true
    }

    fn pop(&mut self, _: &OccupancySet, _: Site, _: usize) {}

    fn record(&mut self, _: &OccupancySet, _: Site, depth: usize) {
        self.counts[depth] += 1;
    }

    fn record_leaves(&mut self, depth: usize, free: u64) {
        self.counts[depth] += free;
    }

    fn merge(&mut self, other: Self) {
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            *a += b;
        }
    }
}

/// Closable walks rooted at the least vertex, keyed by (perimeter, twice area).
#[derive(Debug, Clone)]
pub(crate) struct PolygonTally {
    max_depth: usize,
    path: Vec<Point>,
    twice_area: i64,
    counts: BTreeMap<(usize, u64), u64>,
}

impl PolygonTally {
    pub fn new(max_depth: usize) -> Self {
        PolygonTally {
            max_depth,
            path: vec![Point::ORIGIN],
            twice_area: 0,
            counts: BTreeMap::new(),
        }
    }

    pub fn into_counts(self) -> BTreeMap<(usize, u64), u64> {
        self.counts
    }

    fn cross(a: Point, b: Point) -> i64 {
        i64::from(a.x) * i64::from(b.y) - i64::from(b.x) * i64::from(a.y)
    }
}

impl Tally for PolygonTally {
    fn fresh(&self) -> Self {
        PolygonTally::new(self.max_depth)
    }

    fn push(&mut self, _: &OccupancySet, site: Site, depth: usize) -> bool {
        // the walk must still be able to end next to the origin
        if site.p.manhattan(Point::ORIGIN) as usize > self.max_depth - depth + 1 {
            return false;
        }
        let prev = *self.path.last().expect("origin is always on the path");
        self.twice_area += Self::cross(prev, site.p);
        self.path.push(site.p);
        true
    }

    fn pop(&mut self, _: &OccupancySet, site: Site, _: usize) {
        self.path.pop();
        let prev = *self.path.last().expect("origin is always on the path");
        self.twice_area -= Self::cross(prev, site.p);
    }

    fn record(&mut self, _: &OccupancySet, site: Site, depth: usize) {
        if depth >= 3 && site.p.is_adjacent(Point::ORIGIN) {
            // the closing edge back to the origin adds nothing to the shoelace sum
            *self
                .counts
                .entry((depth + 1, self.twice_area.unsigned_abs()))
                .or_default() += 1;
        }
    }

    fn merge(&mut self, other: Self) {
        for (k, v) in other.counts {
            *self.counts.entry(k).or_default() += v;
        }
    }
}

/// Half-plane walks keyed by (length, vertices on `y = 0` after the origin).
#[derive(Debug, Clone)]
pub(crate) struct HalfPlaneTally {
    contacts: usize,
    counts: Vec<Vec<u64>>,
}

impl HalfPlaneTally {
    pub fn new(max_len: usize) -> Self {
        HalfPlaneTally {
            contacts: 0,
            counts: (0..=max_len).map(|n| vec![0; n + 1]).collect(),
        }
    }

    pub fn into_counts(self) -> Vec<Vec<u64>> {
        self.counts
    }
}

impl Tally for HalfPlaneTally {
    fn fresh(&self) -> Self {
        HalfPlaneTally::new(self.counts.len() - 1)
    }

    fn push(&mut self, _: &OccupancySet, site: Site, _: usize) -> bool {
        if site.p.y == 0 {
            self.contacts += 1;
        }
        true
    }

    fn pop(&mut self, _: &OccupancySet, site: Site, _: usize) {
        if site.p.y == 0 {
            self.contacts -= 1;
        }
    }

    fn record(&mut self, _: &OccupancySet, _: Site, depth: usize) {
        self.counts[depth][self.contacts] += 1;
    }

    fn merge(&mut self, other: Self) {
        for (row, other_row) in self.counts.iter_mut().zip(other.counts) {
            for (a, b) in row.iter_mut().zip(other_row) {
                *a += b;
            }
        }
    }
}

/// Tethered interacting walks keyed by (length, contacts, end x-displacement).
#[derive(Debug, Clone)]
pub(crate) struct InteractingTally {
    contacts: usize,
    added: Vec<usize>,
    /// `tables[n][m * (2n + 1) + (x + n)]`
    tables: Vec<Vec<u64>>,
}

impl InteractingTally {
    pub fn new(max_len: usize) -> Self {
        InteractingTally {
            contacts: 0,
            added: Vec::with_capacity(max_len),
            tables: (0..=max_len).map(|n| vec![0; (n + 2) * (2 * n + 1)]).collect(),
        }
    }

    /// Non-zero `(m, x, count)` triples per length.
    pub fn into_tables(self) -> Vec<Vec<(i64, i64, u64)>> {
        self.tables
            .into_iter()
            .enumerate()
            .map(|(n, flat)| {
                let span = 2 * n + 1;
                flat.into_iter()
                    .enumerate()
                    .filter(|&(_, c)| c != 0)
                    .map(|(k, c)| ((k / span) as i64, (k % span) as i64 - n as i64, c))
                    .collect()
            })
            .collect()
    }
}

impl Tally for InteractingTally {
    fn fresh(&self) -> Self {
        InteractingTally::new(self.tables.len() - 1)
    }

    fn push(&mut self, board: &OccupancySet, site: Site, _: usize) -> bool {
        let touching = board
            .offsets()
            .iter()
            .filter(|&&o| board.is_occupied(site.idx.wrapping_add_signed(o)))
            .count();
        // one occupied neighbour is the bonded predecessor
        let new = touching - 1;
        self.contacts += new;
        self.added.push(new);
        true
    }

    fn pop(&mut self, _: &OccupancySet, _: Site, _: usize) {
        let new = self.added.pop().expect("balanced push/pop");
        self.contacts -= new;
    }

    fn record(&mut self, _: &OccupancySet, site: Site, depth: usize) {
        let span = 2 * depth + 1;
        let x = (site.p.x + depth as i32) as usize;
        self.tables[depth][self.contacts * span + x] += 1;
    }

    fn merge(&mut self, other: Self) {
        for (t, o) in self.tables.iter_mut().zip(other.tables) {
            for (a, b) in t.iter_mut().zip(o) {
                *a += b;
            }
        }
    }
}

/// Corner-to-corner walks in a square, pruned by bit-parallel reachability of
/// the far corner.
#[derive(Debug, Clone)]
pub(crate) struct CrossingTally {
    side: u32,
    width: u32,
    free: u128,
    target: Point,
    first_col: u128,
    last_col: u128,
    counts: Vec<u64>,
}

impl CrossingTally {
    pub fn new(side: u32, max_len: usize) -> Self {
        let width = side + 1;
        let cells = width * width;
        assert!(cells <= 128, "crossing board exceeds 128 cells");
        let all = if cells == 128 { u128::MAX } else { (1u128 << cells) - 1 };
        let mut first_col = 0u128;
        let mut last_col = 0u128;
        for r in 0..width {
            first_col |= 1 << (r * width);
            last_col |= 1 << (r * width + side);
        }
        CrossingTally {
            side,
            width,
            free: all & !1,
            target: Point::new(side as i32, side as i32),
            first_col,
            last_col,
            counts: vec![0; max_len + 1],
        }
    }

    pub fn into_counts(self) -> Vec<u64> {
        self.counts
    }

    fn bit(&self, p: Point) -> u128 {
        1u128 << (p.y as u32 * self.width + p.x as u32)
    }

    /// Whether `from` connects to the target through free cells.
    fn reaches_target(&self, from: u128) -> bool {
        let target = self.bit(self.target);
        let mut reach = target & self.free;
        if reach == 0 {
            return false;
        }
        loop {
            if reach & from != 0 {
                return true;
            }
            let grown = reach
                | (((reach << 1) & !self.first_col)
                    | ((reach >> 1) & !self.last_col)
                    | (reach << self.width)
                    | (reach >> self.width))
                    & self.free;
            if grown == reach {
                return false;
            }
            reach = grown;
        }
    }
}

impl Tally for CrossingTally {
    fn fresh(&self) -> Self {
        CrossingTally::new(self.side, self.counts.len() - 1)
    }

    fn push(&mut self, _: &OccupancySet, site: Site, _: usize) -> bool {
        let bit = self.bit(site.p);
        if site.p != self.target && !self.reaches_target(bit) {
            return false;
        }
        self.free &= !bit;
        true
    }

    fn pop(&mut self, _: &OccupancySet, site: Site, _: usize) {
        self.free |= self.bit(site.p);
    }

    fn record(&mut self, _: &OccupancySet, site: Site, depth: usize) {
        if site.p == self.target {
            self.counts[depth] += 1;
        }
    }

    fn merge(&mut self, other: Self) {
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            *a += b;
        }
    }
}

/// Walk count and summed squared end-to-end distance per length.
#[derive(Debug, Clone)]
pub(crate) struct SpreadTally {
    counts: Vec<u64>,
    sums: Vec<u64>,
}

impl SpreadTally {
    pub fn new(max_len: usize) -> Self {
        SpreadTally {
            counts: vec![0; max_len + 1],
            sums: vec![0; max_len + 1],
        }
    }

    pub fn into_moments(self) -> Vec<(u64, u64)> {
        self.counts.into_iter().zip(self.sums).collect()
    }
}

impl Tally for SpreadTally {
    fn fresh(&self) -> Self {
        SpreadTally::new(self.counts.len() - 1)
    }

    fn push(&mut self, _: &OccupancySet, _: Site, _: usize) -> bool {
        true
    }

    fn pop(&mut self, _: &OccupancySet, _: Site, _: usize) {}

    fn record(&mut self, _: &OccupancySet, site: Site, depth: usize) {
        self.counts[depth] += 1;
        self.sums[depth] += site.p.norm_sq() as u64;
    }

    fn merge(&mut self, other: Self) {
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            *a += b;
        }
        for (a, b) in self.sums.iter_mut().zip(other.sums) {
            *a += b;
        }
    }
}
