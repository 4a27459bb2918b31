//! Self-avoiding walks on finite honeycomb trapezoids and the complex
//! observable that weights them by vertex count and total turning.
//!
//! Walks run between mid-edges. A walk starts on the mid-edge `a` on the left
//! wall, enters the lattice, and ends on some mid-edge `p`; every vertex it
//! visits contributes one turn of `+-pi/3`, including the turn out of the last
//! vertex towards `p`.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};
use std::sync::atomic::{AtomicU64, Ordering};

use num_complex::Complex64;

use crate::enumerate::SearchPlan;
use crate::error::{Error, Result};

/// Critical step weight `1 / sqrt(2 + sqrt 2)`.
pub fn critical_x() -> f64 {
    1.0 / (2.0 + SQRT_2).sqrt()
}

/// Turn phase that makes the local relation hold at the critical weight.
pub const CRITICAL_ALPHA: f64 = -5.0 * PI / 24.0;

/// Critical surface weight `1 + sqrt 2`.
pub const CRITICAL_Y: f64 = 1.0 + SQRT_2;

const SQRT3_2: f64 = 0.866_025_403_784_438_6;

/// Unit vector in direction `d * pi/3`, from exact components.
fn unit(d: u8) -> Complex64 {
    let (re, im) = match d % 6 {
        0 => (1.0, 0.0),
        1 => (0.5, SQRT3_2),
        2 => (-0.5, SQRT3_2),
        3 => (-1.0, 0.0),
        4 => (-0.5, -SQRT3_2),
        _ => (0.5, -SQRT3_2),
    };
    Complex64::new(re, im)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BoundaryClass {
    /// The start mid-edge `a`.
    Start,
    /// Left wall, excluding `a`.
    Left,
    /// Right wall.
    Right,
    /// Upper and lower slanted sides.
    TopBottom,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MidEdge {
    pub position: Complex64,
    pub class: Option<BoundaryClass>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Port {
    direction: u8,
    mid_edge: usize,
    neighbour: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HoneycombVertex {
    /// Zig-zag column, counted from the left wall.
    pub chain: usize,
    /// Position along the column, counted from the bottom.
    pub row: usize,
    pub position: Complex64,
    ports: [Port; 3],
}

impl HoneycombVertex {
    pub fn neighbours(&self) -> impl Iterator<Item = usize> + '_ {
        self.ports.iter().filter_map(|p| p.neighbour)
    }

    pub fn degree(&self) -> usize {
        self.neighbours().count()
    }

    pub fn mid_edges(&self) -> [usize; 3] {
        self.ports.map(|p| p.mid_edge)
    }

    fn port(&self, direction: u8) -> Option<&Port> {
        self.ports.iter().find(|p| p.direction == direction)
    }
}

/// A trapezoid of `width` zig-zag columns whose left wall has `height`
/// horizontal boundary edges. Each column is two vertices taller than the one
/// before it.
#[derive(Debug, Clone, PartialEq)]
pub struct HoneycombDomain {
    width: usize,
    height: usize,
    adsorbing: bool,
    vertices: Vec<HoneycombVertex>,
    mid_edges: Vec<MidEdge>,
    wall: Vec<bool>,
    start: usize,
    start_vertex: usize,
}

pub fn build_trapezoid(width: usize, height: usize, adsorbing: bool) -> Result<HoneycombDomain> {
    if width == 0 || height == 0 {
        return Err(Error::Domain(format!("trapezoid {width} x {height} is empty")));
    }
    let column_len = |c: usize| 2 * (height + c) + 1;
    let mut offsets = Vec::with_capacity(width + 1);
    let mut total = 0;
    for c in 0..width {
        offsets.push(total);
        total += column_len(c);
    }
    let id = |c: usize, j: usize| offsets[c] + j;

    let mut mid_edges = Vec::new();
    let mut internal: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut vertices = Vec::with_capacity(total);
    let mut wall = vec![false; total];
    let start_row = 2 * ((height - 1) / 2) + 1;
    let mut start = usize::MAX;

    for c in 0..width {
        for j in 0..column_len(c) {
            let even = j % 2 == 0;
            let x = 1.5 * c as f64 + if even { 0.5 } else { 0.0 };
            let y = (j as f64 - (height + c) as f64) * SQRT3_2;
            let position = Complex64::new(x, y);
            let me = id(c, j);
            let links: [(u8, Option<usize>, BoundaryClass); 3] = if even {
                [
                    (0, (c + 1 < width).then(|| id(c + 1, j + 1)), BoundaryClass::Right),
                    (2, (j + 1 < column_len(c)).then(|| id(c, j + 1)), BoundaryClass::TopBottom),
                    (4, j.checked_sub(1).map(|jm| id(c, jm)), BoundaryClass::TopBottom),
                ]
            } else {
                [
                    (3, c.checked_sub(1).map(|cm| id(cm, j - 1)), BoundaryClass::Left),
                    (1, Some(id(c, j + 1)), BoundaryClass::TopBottom),
                    (5, Some(id(c, j - 1)), BoundaryClass::TopBottom),
                ]
            };
            let ports = links.map(|(direction, neighbour, side)| {
                let mid = position + 0.5 * unit(direction);
                let mid_edge = match neighbour {
                    Some(n) => *internal.entry((me.min(n), me.max(n))).or_insert_with(|| {
                        mid_edges.push(MidEdge { position: mid, class: None });
                        mid_edges.len() - 1
                    }),
                    None => {
                        let class = if side == BoundaryClass::Left && c == 0 && j == start_row {
                            BoundaryClass::Start
                        } else {
                            side
                        };
                        mid_edges.push(MidEdge {
                            position: mid,
                            class: Some(class),
                        });
                        if class == BoundaryClass::Start {
                            start = mid_edges.len() - 1;
                        }
                        mid_edges.len() - 1
                    }
                };
                Port {
                    direction,
                    mid_edge,
                    neighbour,
                }
            });
            if adsorbing && even && c + 1 == width {
                wall[me] = true;
            }
            vertices.push(HoneycombVertex {
                chain: c,
                row: j,
                position,
                ports,
            });
        }
    }
    Ok(HoneycombDomain {
        width,
        height,
        adsorbing,
        vertices,
        mid_edges,
        wall,
        start,
        start_vertex: id(0, start_row),
    })
}

impl HoneycombDomain {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn is_adsorbing(&self) -> bool {
        self.adsorbing
    }

    pub fn vertices(&self) -> &[HoneycombVertex] {
        &self.vertices
    }

    pub fn mid_edges(&self) -> &[MidEdge] {
        &self.mid_edges
    }

    pub fn start(&self) -> usize {
        self.start
    }

    /// Vertices carrying the surface weight (empty unless adsorbing).
    pub fn wall_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.wall.iter().enumerate().filter(|(_, &w)| w).map(|(i, _)| i)
    }

    pub fn edge_count(&self) -> usize {
        self.vertices.iter().map(HoneycombVertex::degree).sum::<usize>() / 2
    }

    pub fn boundary(&self, class: BoundaryClass) -> impl Iterator<Item = usize> + '_ {
        self.mid_edges
            .iter()
            .enumerate()
            .filter(move |(_, m)| m.class == Some(class))
            .map(|(i, _)| i)
    }

    /// Follows a walk from `a` given as one turn per visited vertex
    /// (`+1` left, `-1` right).
    pub fn trace(&self, turns: &[i8]) -> Result<TracedWalk> {
        let mut seen = vec![false; self.vertices.len()];
        let mut at = self.start_vertex;
        let mut heading = 0u8;
        let mut end = self.start;
        let mut wall_visits = 0;
        for (k, &t) in turns.iter().enumerate() {
            if seen[at] {
                return Err(Error::Domain(format!("walk revisits vertex {at}")));
            }
            seen[at] = true;
            wall_visits += u32::from(self.wall[at]);
            heading = match t {
                1 => (heading + 1) % 6,
                -1 => (heading + 5) % 6,
                _ => return Err(Error::Domain(format!("turn {t} is not +-1"))),
            };
            let port = self.vertices[at].port(heading).expect("turns keep a valid heading");
            end = port.mid_edge;
            match port.neighbour {
                Some(n) => at = n,
                None if k + 1 < turns.len() => {
                    return Err(Error::Domain("walk leaves the domain".into()))
                }
                None => {}
            }
        }
        Ok(TracedWalk {
            end,
            vertices: turns.len() as u32,
            winding: turns.iter().map(|&t| i32::from(t)).sum(),
            wall_visits,
        })
    }
}

/// Summary of one explicit walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TracedWalk {
    pub end: usize,
    pub vertices: u32,
    /// Left turns minus right turns.
    pub winding: i32,
    pub wall_visits: u32,
}

impl TracedWalk {
    pub fn weight(&self, x: f64, alpha: f64, y: f64) -> Complex64 {
        walk_weight(self.vertices, self.winding, self.wall_visits, x, alpha, y)
    }
}

/// `x^v e^{i alpha t} y^w`.
pub fn walk_weight(vertices: u32, winding: i32, wall_visits: u32, x: f64, alpha: f64, y: f64) -> Complex64 {
    Complex64::from_polar(1.0, alpha * f64::from(winding))
        * (x.powi(vertices as i32) * y.powi(wall_visits as i32))
}

type Key = (u32, i32, u32);

/// Counts of walks from `a`, per end mid-edge, keyed by
/// (vertices, winding, wall visits).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkCensus {
    per_mid_edge: Vec<BTreeMap<Key, u64>>,
}

struct Walker<'d> {
    domain: &'d HoneycombDomain,
    seen: Vec<bool>,
    census: Vec<BTreeMap<Key, u64>>,
    nodes: &'d AtomicU64,
    ceiling: u64,
}

impl Walker<'_> {
    fn fork(&self) -> Self {
        Walker {
            domain: self.domain,
            seen: self.seen.clone(),
            census: vec![BTreeMap::new(); self.census.len()],
            nodes: self.nodes,
            ceiling: self.ceiling,
        }
    }

    /// Standing on `at`, having arrived heading `heading`.
    fn visit(&mut self, at: usize, heading: u8, v: u32, t: i32, w: u32, only: Option<i8>) -> Result<()> {
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.ceiling {
            return Err(Error::Budget {
                estimate: self.nodes.load(Ordering::Relaxed) as f64,
                ceiling: self.ceiling as f64,
            });
        }
        self.seen[at] = true;
        let v = v + 1;
        let w = w + u32::from(self.domain.wall[at]);
        for turn in [1i8, -1] {
            if only.is_some_and(|o| o != turn) {
                continue;
            }
            let next_heading = if turn == 1 { (heading + 1) % 6 } else { (heading + 5) % 6 };
            let port = *self.domain.vertices[at].port(next_heading).expect("valid heading");
            let t = t + i32::from(turn);
            *self.census[port.mid_edge].entry((v, t, w)).or_default() += 1;
            if let Some(n) = port.neighbour.filter(|&n| !self.seen[n]) {
                self.visit(n, next_heading, v, t, w, None)?;
            }
        }
        self.seen[at] = false;
        Ok(())
    }
}

/// Enumerates every self-avoiding walk from `a`. The two first turns are
/// explored in parallel unless the plan is serial.
pub fn census(domain: &HoneycombDomain, plan: &SearchPlan) -> Result<WalkCensus> {
    let nodes = AtomicU64::new(0);
    let ceiling = plan.node_ceiling.min(u64::MAX as f64) as u64;
    let root = Walker {
        domain,
        seen: vec![false; domain.vertices.len()],
        census: vec![BTreeMap::new(); domain.mid_edges.len()],
        nodes: &nodes,
        ceiling,
    };
    let (mut left, mut right) = (root.fork(), root.fork());
    let run = |walker: &mut Walker, turn| walker.visit(domain.start_vertex, 0, 0, 0, 0, Some(turn));
    let (l, r) = if plan.worker_count > 1 {
        rayon::join(|| run(&mut left, 1), || run(&mut right, -1))
    } else {
        (run(&mut left, 1), run(&mut right, -1))
    };
    l?;
    r?;
    let mut per_mid_edge = left.census;
    for (acc, other) in per_mid_edge.iter_mut().zip(right.census) {
        for (k, c) in other {
            *acc.entry(k).or_default() += c;
        }
    }
    per_mid_edge[domain.start].insert((0, 0, 0), 1);
    Ok(WalkCensus { per_mid_edge })
}

impl WalkCensus {
    pub fn walk_count(&self) -> u64 {
        self.per_mid_edge.iter().flat_map(|m| m.values()).sum()
    }

    pub fn counts(&self, mid_edge: usize) -> &BTreeMap<(u32, i32, u32), u64> {
        &self.per_mid_edge[mid_edge]
    }

    /// Keeps only walks with at most `max_vertices` vertices.
    pub fn truncated(&self, max_vertices: u32) -> WalkCensus {
        WalkCensus {
            per_mid_edge: self
                .per_mid_edge
                .iter()
                .map(|m| m.iter().filter(|(k, _)| k.0 <= max_vertices).map(|(&k, &c)| (k, c)).collect())
                .collect(),
        }
    }

    /// Wall visits are summed first so that `y = 1` gives exactly the bulk
    /// values.
    fn value(&self, mid_edge: usize, x: f64, alpha: f64, y: f64) -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        let mut entries = self.per_mid_edge[mid_edge].iter().peekable();
        while let Some((&(v, t, w), &c)) = entries.next() {
            let mut surface = c as f64 * y.powi(w as i32);
            while let Some((&(v2, t2, w2), &c2)) = entries.next_if(|(k, _)| k.0 == v && k.1 == t) {
                debug_assert!((v2, t2) == (v, t));
                surface += c2 as f64 * y.powi(w2 as i32);
            }
            total += walk_weight(v, t, 0, x, alpha, 1.0) * surface;
        }
        total
    }

    pub fn observable<'d>(&self, domain: &'d HoneycombDomain, x: f64, alpha: f64, y: f64) -> ObservableTable<'d> {
        ObservableTable {
            domain,
            values: (0..self.per_mid_edge.len()).map(|m| self.value(m, x, alpha, y)).collect(),
            x,
            alpha,
            y,
        }
    }

    /// Sums of `x^v y^w` over walks ending on each boundary class.
    pub fn boundary_sums(&self, domain: &HoneycombDomain, x: f64, y: f64) -> BoundarySums {
        let sum = |class| -> f64 { domain.boundary(class).map(|m| self.value(m, x, 0.0, y).re).sum() };
        BoundarySums {
            left: sum(BoundaryClass::Left),
            right: sum(BoundaryClass::Right),
            top_bottom: sum(BoundaryClass::TopBottom),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundarySums {
    pub left: f64,
    pub right: f64,
    pub top_bottom: f64,
}

/// `F(p)` on every mid-edge of a domain.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableTable<'d> {
    domain: &'d HoneycombDomain,
    pub values: Vec<Complex64>,
    pub x: f64,
    pub alpha: f64,
    pub y: f64,
}

pub fn observable<'d>(
    domain: &'d HoneycombDomain,
    x: f64,
    alpha: f64,
    y: f64,
    plan: &SearchPlan,
) -> Result<ObservableTable<'d>> {
    Ok(census(domain, plan)?.observable(domain, x, alpha, y))
}

impl ObservableTable<'_> {
    pub fn at(&self, mid_edge: usize) -> Complex64 {
        self.values[mid_edge]
    }

    /// `sum_k (p_k - v) F(p_k)` over the three mid-edges around `v`.
    pub fn local_residual(&self, v: usize) -> Result<Complex64> {
        let vertex = self.domain.vertices.get(v).ok_or(Error::BoundaryVertex(v))?;
        Ok(vertex
            .ports
            .iter()
            .map(|p| (self.domain.mid_edges[p.mid_edge].position - vertex.position) * self.values[p.mid_edge])
            .sum())
    }

    pub fn max_local_residual(&self) -> f64 {
        (0..self.domain.vertices.len())
            .map(|v| self.local_residual(v).expect("vertex in range").norm())
            .fold(0.0, f64::max)
    }

    /// `sum_p (p - v_p) F(p)` over boundary mid-edges, where `v_p` is the
    /// vertex next to `p`. Equals the sum of all local residuals.
    pub fn boundary_combination(&self) -> Complex64 {
        self.domain
            .vertices
            .iter()
            .flat_map(|vx| vx.ports.iter().map(move |p| (vx, p)))
            .filter(|(_, p)| p.neighbour.is_none())
            .map(|(vx, p)| (self.domain.mid_edges[p.mid_edge].position - vx.position) * self.values[p.mid_edge])
            .sum()
    }
}

pub fn local_identity_residual(table: &ObservableTable, v: usize) -> Result<Complex64> {
    table.local_residual(v)
}

/// `|cos(3 pi/8) L + M / sqrt 2 + R - 1|` for a bulk domain.
pub fn domain_identity_residual(domain: &HoneycombDomain, x: f64, plan: &SearchPlan) -> Result<f64> {
    if domain.adsorbing {
        return Err(Error::Domain("domain identity needs a bulk trapezoid".into()));
    }
    let s = census(domain, plan)?.boundary_sums(domain, x, 1.0);
    Ok(((3.0 * PI / 8.0).cos() * s.left + FRAC_1_SQRT_2 * s.top_bottom + s.right - 1.0).abs())
}

/// Weight of the right-wall sum in the adsorption identity; zero at the
/// critical surface weight.
pub fn wall_coefficient(y: f64) -> f64 {
    (CRITICAL_Y - y) / (y * (CRITICAL_Y - 1.0))
}

/// `|cos(3 pi/8) A + cos(pi/4) E + c(y) B - 1|` with the surface weight `y` on
/// the right wall.
pub fn adsorption_identity_residual(domain: &HoneycombDomain, x: f64, y: f64, plan: &SearchPlan) -> Result<f64> {
    if !domain.adsorbing {
        return Err(Error::Domain("adsorption identity needs an adsorbing trapezoid".into()));
    }
    if y.is_nan() || y <= 0.0 {
        return Err(Error::Domain(format!("surface weight {y} must be positive")));
    }
    let s = census(domain, plan)?.boundary_sums(domain, x, y);
    Ok(((3.0 * PI / 8.0).cos() * s.left + (PI / 4.0).cos() * s.top_bottom + wall_coefficient(y) * s.right - 1.0).abs())
}
