//! Square-lattice geometry: steps, walks, polygons, domains and the occupancy
//! bitmap every backtracking engine runs on.

use std::fmt;

use crate::error::{Error, Result};

/// A vertex of the integer grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Point {
    pub x: i32,
    pub y: i32,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0, y: 0 };

    pub const fn new(x: i32, y: i32) -> Self {
        Point { x, y }
    }

    pub fn step(self, step: SquareStep) -> Point {
        let (dx, dy) = step.delta();
        Point::new(self.x + dx, self.y + dy)
    }

    pub fn manhattan(self, other: Point) -> u32 {
        self.x.abs_diff(other.x) + self.y.abs_diff(other.y)
    }

    pub fn is_adjacent(self, other: Point) -> bool {
        self.manhattan(other) == 1
    }

    pub fn norm_sq(self) -> i64 {
        let (x, y) = (i64::from(self.x), i64::from(self.y));
        x * x + y * y
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// One of the four unit steps of the square lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SquareStep {
    East,
    North,
    West,
    South,
}

impl SquareStep {
    /// Counter-clockwise order starting from East.
    pub const ALL: [SquareStep; 4] = [
        SquareStep::East,
        SquareStep::North,
        SquareStep::West,
        SquareStep::South,
    ];

    pub const fn delta(self) -> (i32, i32) {
        match self {
            SquareStep::East => (1, 0),
            SquareStep::North => (0, 1),
            SquareStep::West => (-1, 0),
            SquareStep::South => (0, -1),
        }
    }

    pub const fn opposite(self) -> SquareStep {
        match self {
            SquareStep::East => SquareStep::West,
            SquareStep::North => SquareStep::South,
            SquareStep::West => SquareStep::East,
            SquareStep::South => SquareStep::North,
        }
    }

    /// The step taking `from` to the adjacent vertex `to`, if they are adjacent.
    pub fn between(from: Point, to: Point) -> Option<SquareStep> {
        match (to.x - from.x, to.y - from.y) {
            (1, 0) => Some(SquareStep::East),
            (0, 1) => Some(SquareStep::North),
            (-1, 0) => Some(SquareStep::West),
            (0, -1) => Some(SquareStep::South),
            _ => None,
        }
    }
}

/// Region of the plane a walk is confined to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    FullPlane,
    /// The closed upper half-plane `y >= 0`.
    HalfPlane,
    /// The vertices of `[0, L] x [0, L]`.
    Square(u32),
    /// The vertices of `[0, width] x [0, height]`.
    Rectangle { width: u32, height: u32 },
}

impl Domain {
    pub fn contains(&self, p: Point) -> bool {
        match *self {
            Domain::FullPlane => true,
            Domain::HalfPlane => p.y >= 0,
            Domain::Square(l) => Domain::Rectangle { width: l, height: l }.contains(p),
            Domain::Rectangle { width, height } => {
                p.x >= 0 && p.y >= 0 && p.x as u32 <= width && p.y as u32 <= height
            }
        }
    }

    /// Number of vertices, or `None` for unbounded domains.
    pub fn vertex_count(&self) -> Option<u64> {
        match *self {
            Domain::FullPlane | Domain::HalfPlane => None,
            Domain::Square(l) => Some((u64::from(l) + 1).pow(2)),
            Domain::Rectangle { width, height } => {
                Some((u64::from(width) + 1) * (u64::from(height) + 1))
            }
        }
    }
}

/// A self-avoiding walk anchored at the origin.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Walk {
    vertices: Vec<Point>,
}

impl Default for Walk {
    fn default() -> Self {
        Walk::new()
    }
}

impl Walk {
    /// The zero-step walk sitting at the origin.
    pub fn new() -> Self {
        Walk {
            vertices: vec![Point::ORIGIN],
        }
    }

    pub fn from_steps(steps: &[SquareStep]) -> Result<Walk> {
        let mut walk = Walk::new();
        for &s in steps {
            walk.push(s, &Domain::FullPlane)?;
        }
        Ok(walk)
    }

    /// Builds a walk from explicit vertices, checking every walk invariant.
    pub fn from_vertices(vertices: Vec<Point>) -> Result<Walk> {
        let first = *vertices.first().ok_or_else(|| Error::Domain("empty vertex list".into()))?;
        if first != Point::ORIGIN {
            return Err(Error::Domain(format!("walk starts at {first}, not the origin")));
        }
        let mut walk = Walk::new();
        for w in vertices.windows(2) {
            let step = SquareStep::between(w[0], w[1])
                .ok_or_else(|| Error::Domain(format!("{} -> {} is not a unit step", w[0], w[1])))?;
            walk.push(step, &Domain::FullPlane)?;
        }
        Ok(walk)
    }

    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn end(&self) -> Point {
        *self.vertices.last().expect("a walk always has its origin vertex")
    }

    pub fn steps(&self) -> Vec<SquareStep> {
        self.vertices
            .windows(2)
            .map(|w| SquareStep::between(w[0], w[1]).expect("walk vertices are adjacent"))
            .collect()
    }

    /// Squared end-to-end distance `|w_n|^2`.
    pub fn end_to_end_sq(&self) -> i64 {
        self.end().norm_sq()
    }

    /// Returns the walk with one more step; `self` is left untouched.
    pub fn extend(&self, step: SquareStep) -> Result<Walk> {
        self.extend_in(step, &Domain::FullPlane)
    }

    pub fn extend_in(&self, step: SquareStep, domain: &Domain) -> Result<Walk> {
        let mut next = self.clone();
        next.push(step, domain)?;
        Ok(next)
    }

    fn push(&mut self, step: SquareStep, domain: &Domain) -> Result<()> {
        let target = self.end().step(step);
        if !domain.contains(target) {
            return Err(Error::OutsideDomain(target));
        }
        if self.vertices.contains(&target) {
            return Err(Error::Occupied(target));
        }
        self.vertices.push(target);
        Ok(())
    }

    /// Checks self-avoidance and unit steps for an arbitrary vertex sequence.
    pub fn is_valid_path(vertices: &[Point]) -> bool {
        let mut seen = std::collections::HashSet::with_capacity(vertices.len());
        vertices.windows(2).all(|w| w[0].is_adjacent(w[1]))
            && vertices.iter().all(|p| seen.insert(*p))
    }
}

/// Joins the end of `walk` back to the origin.
pub fn close_polygon(walk: &Walk) -> Result<Polygon> {
    if walk.len() < 3 || !walk.end().is_adjacent(Point::ORIGIN) {
        return Err(Error::NotClosable(walk.end()));
    }
    Ok(Polygon::from_cycle(walk.vertices()))
}

/// A self-avoiding polygon, stored in canonical form: translated so its
/// lexicographically least vertex is the origin, listed from that vertex in
/// the orientation whose second vertex is smaller.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polygon {
    vertices: Vec<Point>,
    area: u64,
}

impl Polygon {
    /// `cycle` lists each vertex once; the closing edge is implicit.
    fn from_cycle(cycle: &[Point]) -> Polygon {
        let start = cycle
            .iter()
            .enumerate()
            .min_by_key(|(_, p)| **p)
            .map(|(i, _)| i)
            .expect("non-empty cycle");
        let base = cycle[start];
        let n = cycle.len();
        let shifted = |i: usize| {
            let p = cycle[i % n];
            Point::new(p.x - base.x, p.y - base.y)
        };
        let forward: Vec<Point> = (0..n).map(|k| shifted(start + k)).collect();
        let backward: Vec<Point> = (0..n).map(|k| shifted(start + n - k)).collect();
        let vertices = forward.min(backward);
        let twice = shoelace_twice(&vertices);
        Polygon {
            vertices,
            area: twice.unsigned_abs() / 2,
        }
    }

    pub fn perimeter(&self) -> usize {
        self.vertices.len()
    }

    pub fn area(&self) -> u64 {
        self.area
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn translated(&self, dx: i32, dy: i32) -> Polygon {
        let moved: Vec<Point> = self
            .vertices
            .iter()
            .map(|p| Point::new(p.x + dx, p.y + dy))
            .collect();
        Polygon::from_cycle(&moved)
    }

    pub fn canonical(&self) -> Polygon {
        Polygon::from_cycle(&self.vertices)
    }
}

/// Twice the signed area of a closed lattice cycle.
pub fn shoelace_twice(cycle: &[Point]) -> i64 {
    let n = cycle.len();
    (0..n)
        .map(|i| {
            let (a, b) = (cycle[i], cycle[(i + 1) % n]);
            i64::from(a.x) * i64::from(b.y) - i64::from(b.x) * i64::from(a.y)
        })
        .sum()
}

/// Cell state inside an [`OccupancySet`] window.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum Cell {
    Free = 0,
    Occupied = 1,
    /// Outside the active domain; never enterable.
    Blocked = 2,
}

/// Flat occupancy bitmap over a rectangular window of the lattice.
///
/// The window carries a one-cell blocked frame, so a neighbour lookup from any
/// in-window vertex never leaves the buffer. Engines address cells by linear
/// index and move with [`OccupancySet::offset`].
#[derive(Debug, Clone)]
pub struct OccupancySet {
    cells: Vec<Cell>,
    x_min: i32,
    y_min: i32,
    width: usize,
    height: usize,
}

impl OccupancySet {
    /// Window `[x_min, x_max] x [y_min, y_max]`; every cell starts free.
    pub fn with_bounds(x_min: i32, x_max: i32, y_min: i32, y_max: i32) -> Self {
        assert!(x_min <= x_max && y_min <= y_max, "empty occupancy window");
        let width = (x_max - x_min) as usize + 3;
        let height = (y_max - y_min) as usize + 3;
        let mut set = OccupancySet {
            cells: vec![Cell::Free; width * height],
            x_min: x_min - 1,
            y_min: y_min - 1,
            width,
            height,
        };
        for r in 0..height {
            for c in 0..width {
                if r == 0 || c == 0 || r == height - 1 || c == width - 1 {
                    set.cells[r * width + c] = Cell::Blocked;
                }
            }
        }
        set
    }

    /// Square window `[-radius, radius]^2`, enough for any walk of `radius` steps.
    pub fn centered(radius: u32) -> Self {
        let r = radius as i32;
        OccupancySet::with_bounds(-r, r, -r, r)
    }

    /// Window sized for walks of `max_len` steps inside `domain`, with every
    /// vertex outside the domain blocked.
    pub fn for_domain(domain: &Domain, max_len: usize) -> Self {
        let r = max_len.max(1) as i32;
        let mut set = match *domain {
            Domain::FullPlane => OccupancySet::with_bounds(-r, r, -r, r),
            Domain::HalfPlane => OccupancySet::with_bounds(-r, r, 0, r),
            Domain::Square(l) => OccupancySet::with_bounds(0, l as i32, 0, l as i32),
            Domain::Rectangle { width, height } => {
                OccupancySet::with_bounds(0, width as i32, 0, height as i32)
            }
        };
        for idx in 0..set.cells.len() {
            if set.cells[idx] == Cell::Free && !domain.contains(set.point(idx)) {
                set.cells[idx] = Cell::Blocked;
            }
        }
        set
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Linear index of `p`, or `None` outside the window.
    pub fn index(&self, p: Point) -> Option<usize> {
        let c = p.x - self.x_min;
        let r = p.y - self.y_min;
        (c >= 0 && r >= 0 && (c as usize) < self.width && (r as usize) < self.height)
            .then(|| r as usize * self.width + c as usize)
    }

    pub fn point(&self, idx: usize) -> Point {
        Point::new(
            (idx % self.width) as i32 + self.x_min,
            (idx / self.width) as i32 + self.y_min,
        )
    }

    /// Signed index displacement of a unit step.
    pub fn offset(&self, step: SquareStep) -> isize {
        let (dx, dy) = step.delta();
        dx as isize + dy as isize * self.width as isize
    }

    /// Index displacements for [`SquareStep::ALL`].
    pub fn offsets(&self) -> [isize; 4] {
        SquareStep::ALL.map(|s| self.offset(s))
    }

    #[inline]
    pub fn cell(&self, idx: usize) -> Cell {
        self.cells[idx]
    }

    #[inline]
    pub fn is_free(&self, idx: usize) -> bool {
        self.cells[idx] == Cell::Free
    }

    #[inline]
    pub fn is_occupied(&self, idx: usize) -> bool {
        self.cells[idx] == Cell::Occupied
    }

    #[inline]
    pub fn occupy(&mut self, idx: usize) {
        debug_assert_eq!(self.cells[idx], Cell::Free);
        self.cells[idx] = Cell::Occupied;
    }

    #[inline]
    pub fn release(&mut self, idx: usize) {
        debug_assert_eq!(self.cells[idx], Cell::Occupied);
        self.cells[idx] = Cell::Free;
    }

    pub fn block(&mut self, p: Point) {
        if let Some(idx) = self.index(p) {
            self.cells[idx] = Cell::Blocked;
        }
    }

    /// Marks `p` visited. Returns `false` if it was not free.
    pub fn insert(&mut self, p: Point) -> bool {
        match self.index(p) {
            Some(idx) if self.is_free(idx) => {
                self.occupy(idx);
                true
            }
            _ => false,
        }
    }

    /// Clears a visited mark. Returns `false` if `p` was not visited.
    pub fn remove(&mut self, p: Point) -> bool {
        match self.index(p) {
            Some(idx) if self.is_occupied(idx) => {
                self.release(idx);
                true
            }
            _ => false,
        }
    }

    pub fn contains(&self, p: Point) -> bool {
        self.index(p).is_some_and(|idx| self.is_occupied(idx))
    }

    pub fn occupied_points(&self) -> Vec<Point> {
        (0..self.cells.len())
            .filter(|&i| self.is_occupied(i))
            .map(|i| self.point(i))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::SquareStep::*;
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn steps_cancel_in_pairs() {
        for s in SquareStep::ALL {
            let (dx, dy) = s.delta();
            let (ox, oy) = s.opposite().delta();
            assert_eq!((dx + ox, dy + oy), (0, 0));
        }
        assert_eq!(SquareStep::ALL.len(), 4);
    }

    #[test]
    fn extend_examples() {
        let one = Walk::new().extend(East).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one.end(), Point::new(1, 0));

        let enw = Walk::from_steps(&[East, North, West]).unwrap();
        assert_eq!(enw.extend(South), Err(Error::Occupied(Point::ORIGIN)));

        let en = Walk::from_steps(&[East, North]).unwrap();
        let l_shape = en.extend(West).unwrap();
        assert_eq!(l_shape.len(), 3);
        assert_eq!(l_shape.end(), Point::new(0, 1));
        // the original is untouched
        assert_eq!(en.len(), 2);
    }

    #[test]
    fn extend_respects_domain() {
        let w = Walk::new();
        assert_eq!(
            w.extend_in(South, &Domain::HalfPlane),
            Err(Error::OutsideDomain(Point::new(0, -1)))
        );
        assert!(w.extend_in(East, &Domain::Square(1)).is_ok());
        assert!(w.extend_in(West, &Domain::Square(1)).is_err());
    }

    #[test]
    fn close_polygon_examples() {
        let square = close_polygon(&Walk::from_steps(&[East, North, West]).unwrap()).unwrap();
        assert_eq!((square.perimeter(), square.area()), (4, 1));

        let domino =
            close_polygon(&Walk::from_steps(&[East, East, North, West, West]).unwrap()).unwrap();
        assert_eq!((domino.perimeter(), domino.area()), (6, 2));

        let en = Walk::from_steps(&[East, North]).unwrap();
        assert_eq!(close_polygon(&en), Err(Error::NotClosable(Point::new(1, 1))));
    }

    #[test]
    fn orientations_share_a_canonical_form() {
        let ccw = close_polygon(&Walk::from_steps(&[East, North, West]).unwrap()).unwrap();
        let cw = close_polygon(&Walk::from_steps(&[North, East, South]).unwrap()).unwrap();
        assert_eq!(ccw, cw);
    }

    #[test]
    fn domain_sizes() {
        assert_eq!(Domain::Square(3).vertex_count(), Some(16));
        assert!(Domain::HalfPlane.contains(Point::ORIGIN));
        assert!(!Domain::HalfPlane.contains(Point::new(0, -1)));
    }

    #[test]
    fn occupancy_window_is_framed() {
        let set = OccupancySet::for_domain(&Domain::Square(2), 8);
        let inside: Vec<_> = (0..set.len()).filter(|&i| set.is_free(i)).collect();
        assert_eq!(inside.len(), 9);
        let half = OccupancySet::for_domain(&Domain::HalfPlane, 3);
        assert_eq!(half.cell(half.index(Point::new(0, -1)).unwrap()), Cell::Blocked);
    }

    fn random_steps() -> impl Strategy<Value = Vec<SquareStep>> {
        prop::collection::vec(prop::sample::select(SquareStep::ALL.to_vec()), 0..40)
    }

    /// Greedy walk from a step list, dropping steps that would self-intersect.
    fn greedy_walk(steps: &[SquareStep]) -> Walk {
        steps
            .iter()
            .fold(Walk::new(), |w, &s| w.extend(s).unwrap_or(w))
    }

    proptest! {
        #[test]
        fn occupancy_tracks_push_pop(steps in random_steps(), pops in 0usize..40) {
            let walk = greedy_walk(&steps);
            let mut set = OccupancySet::centered(40);
            for &p in walk.vertices() {
                prop_assert!(set.insert(p));
            }
            let keep = walk.vertices().len().saturating_sub(pops).max(1);
            for &p in &walk.vertices()[keep..] {
                prop_assert!(set.remove(p));
            }
            let mut expect = walk.vertices()[..keep].to_vec();
            expect.sort();
            let mut got = set.occupied_points();
            got.sort();
            prop_assert_eq!(got, expect);
        }

        #[test]
        fn walks_stay_valid(steps in random_steps()) {
            let walk = greedy_walk(&steps);
            prop_assert!(Walk::is_valid_path(walk.vertices()));
            prop_assert_eq!(walk.len(), walk.vertices().len() - 1);
        }

        #[test]
        fn canonical_form_is_translation_invariant(
            steps in random_steps(), dx in -50i32..50, dy in -50i32..50,
        ) {
            let walk = greedy_walk(&steps);
            if let Ok(poly) = close_polygon(&walk) {
                prop_assert_eq!(poly.translated(dx, dy), poly.clone());
                prop_assert_eq!(poly.canonical(), poly.clone());
                let m = poly.perimeter() as u64;
                prop_assert!(m % 2 == 0);
                prop_assert!(poly.area() >= 1 && 16 * poly.area() <= m * m);
            }
        }
    }
}
