//! Exact enumeration of square-lattice walk families.
//!
//! Every census is a depth-first search over an [`OccupancySet`] board. Counts
//! accumulate in machine words inside each worker and are published as
//! arbitrary-precision tables.

mod engine;
mod tallies;

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::{Domain, OccupancySet, Point};

use engine::explore;
use tallies::{CrossingTally, HalfPlaneTally, InteractingTally, LengthTally, PolygonTally, SpreadTally};

/// Growth rate used to estimate full-plane search sizes.
const SAW_GROWTH_ESTIMATE: f64 = 2.64;
/// Growth rate of corner-to-corner crossings, per unit of `L^2`.
const CROSSING_GROWTH_ESTIMATE: f64 = 1.745;
/// Largest square the bitmask crossing engine supports (`(L + 1)^2 <= 128`).
pub const MAX_CROSSING_SIDE: u32 = 10;

/// Number of corner-to-corner self-avoiding paths across a square of side 19.
/// Far beyond brute force; kept for reference only.
pub const CROSSING_TOTAL_L19: &str =
    "1523344971704879993080742810319229690899454255323294555776029866737355060592877569255844";

/// How a full-plane count exploits the square lattice's symmetry group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SymmetryMode {
    None,
    /// Enumerate walks starting East whose first turn is North, then
    /// multiply by 8 and add the 4 straight rods. Full-plane counts only;
    /// other domains ignore it.
    #[default]
    Octant,
}

/// Work partitioning for a census.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchPlan {
    /// Depth at which the serial search hands prefixes to workers.
    pub prefix_depth: usize,
    pub worker_count: usize,
    pub symmetry: SymmetryMode,
    /// Refuse searches whose estimated node count exceeds this.
    pub node_ceiling: f64,
}

impl Default for SearchPlan {
    fn default() -> Self {
        SearchPlan {
            prefix_depth: 8,
            worker_count: std::thread::available_parallelism().map_or(1, |n| n.get()),
            symmetry: SymmetryMode::Octant,
            node_ceiling: 5e10,
        }
    }
}

impl SearchPlan {
    pub fn serial() -> Self {
        SearchPlan {
            worker_count: 1,
            ..SearchPlan::default()
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.worker_count = workers.max(1);
        self
    }

    pub fn with_symmetry(mut self, symmetry: SymmetryMode) -> Self {
        self.symmetry = symmetry;
        self
    }

    pub fn with_prefix_depth(mut self, depth: usize) -> Self {
        self.prefix_depth = depth;
        self
    }

    pub fn with_ceiling(mut self, ceiling: f64) -> Self {
        self.node_ceiling = ceiling;
        self
    }

    fn check_budget(&self, estimate: f64) -> Result<()> {
        if estimate > self.node_ceiling {
            Err(Error::Budget {
                estimate,
                ceiling: self.node_ceiling,
            })
        } else {
            Ok(())
        }
    }
}

/// Index `n` to count, defined for every `0 <= n <= max_n`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CountTable {
    counts: Vec<BigUint>,
}

impl CountTable {
    pub fn new(counts: Vec<BigUint>) -> Self {
        CountTable { counts }
    }

    pub fn from_u64s(values: &[u64]) -> Self {
        CountTable::new(values.iter().map(|&v| BigUint::from(v)).collect())
    }

    /// Largest index, or `None` for an empty table.
    pub fn max_n(&self) -> Option<usize> {
        self.counts.len().checked_sub(1)
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn get(&self, n: usize) -> Option<&BigUint> {
        self.counts.get(n)
    }

    pub fn as_slice(&self) -> &[BigUint] {
        &self.counts
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &BigUint)> {
        self.counts.iter().enumerate()
    }

    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }

    /// Same table with entry `n` replaced; used to inject faults in checks.
    pub fn with_entry(mut self, n: usize, value: BigUint) -> Self {
        self.counts[n] = value;
        self
    }
}

/// Count indexed by a pair, e.g. perimeter x area or length x contacts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointCountTable {
    axes: [String; 2],
    /// Largest first-axis index the census covered (entries may be absent).
    extent: i64,
    counts: BTreeMap<(i64, i64), BigUint>,
}

impl JointCountTable {
    pub fn new(axes: [&str; 2], extent: i64) -> Self {
        JointCountTable {
            axes: axes.map(str::to_owned),
            extent,
            counts: BTreeMap::new(),
        }
    }

    pub fn axes(&self) -> [&str; 2] {
        [&self.axes[0], &self.axes[1]]
    }

    pub fn extent(&self) -> i64 {
        self.extent
    }

    pub fn add(&mut self, a: i64, b: i64, count: impl Into<BigUint>) {
        let count = count.into();
        if !count.is_zero() {
            *self.counts.entry((a, b)).or_default() += count;
        }
    }

    pub fn get(&self, a: i64, b: i64) -> BigUint {
        self.counts.get(&(a, b)).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, i64, &BigUint)> {
        self.counts.iter().map(|(&(a, b), c)| (a, b, c))
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Entries with first index `a`, keyed by second index.
    pub fn row(&self, a: i64) -> BTreeMap<i64, BigUint> {
        self.counts
            .range((a, i64::MIN)..=(a, i64::MAX))
            .map(|(&(_, b), c)| (b, c.clone()))
            .collect()
    }

    /// Sum over the second axis, for each first index.
    pub fn first_marginal(&self) -> BTreeMap<i64, BigUint> {
        let mut out: BTreeMap<i64, BigUint> = BTreeMap::new();
        for (&(a, _), c) in &self.counts {
            *out.entry(a).or_default() += c;
        }
        out
    }

    /// Sum over the first axis, for each second index.
    pub fn second_marginal(&self) -> BTreeMap<i64, BigUint> {
        let mut out: BTreeMap<i64, BigUint> = BTreeMap::new();
        for (&(_, b), c) in &self.counts {
            *out.entry(b).or_default() += c;
        }
        out
    }

    pub fn total(&self) -> BigUint {
        self.counts.values().sum()
    }

    /// Shifts the second axis by `delta` (e.g. to count the anchored origin as
    /// a surface vertex).
    pub fn shift_second(&self, delta: i64) -> Self {
        JointCountTable {
            axes: self.axes.clone(),
            extent: self.extent,
            counts: self
                .counts
                .iter()
                .map(|(&(a, b), c)| ((a, b + delta), c.clone()))
                .collect(),
        }
    }
}

/// Interacting-walk tables `C(N, m, x)`, one per length `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InteractingCensus {
    tables: Vec<JointCountTable>,
}

impl InteractingCensus {
    pub fn max_len(&self) -> usize {
        self.tables.len() - 1
    }

    /// Table keyed by (contacts m, displacement x) for walks of length `n`.
    pub fn table(&self, n: usize) -> Result<&JointCountTable> {
        self.tables.get(n).ok_or(Error::AbsentLength(n))
    }

    pub fn tables(&self) -> &[JointCountTable] {
        &self.tables
    }
}

/// Whether the anchored origin counts as a surface vertex in half-plane censuses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OriginConvention {
    #[default]
    Exclude,
    Include,
}

fn straight_rod(len: usize, turn_north: bool) -> Vec<Point> {
    let mut v: Vec<Point> = (0..=len as i32).map(|x| Point::new(x, 0)).collect();
    if turn_north {
        v.push(Point::new(len as i32, 1));
    }
    v
}

/// Number of `n`-step walks in `domain` anchored at the origin, for `n <= n_max`.
pub fn count_saws(n_max: usize, domain: &Domain, plan: &SearchPlan) -> Result<CountTable> {
    plan.check_budget(SAW_GROWTH_ESTIMATE.powi(n_max as i32))?;
    if !domain.contains(Point::ORIGIN) {
        return Err(Error::OutsideDomain(Point::ORIGIN));
    }
    let board = OccupancySet::for_domain(domain, n_max);
    let proto = LengthTally::new(n_max);

    let octant = plan.symmetry == SymmetryMode::Octant && *domain == Domain::FullPlane;
    if !octant {
        let tally = explore(&board, &[vec![Point::ORIGIN]], &proto, n_max, plan);
        return Ok(CountTable::new(tally.into_counts()));
    }

    let roots: Vec<Vec<Point>> = (1..n_max).map(|k| straight_rod(k, true)).collect();
    let tally = explore(&board, &roots, &proto, n_max, plan);
    let counts = tally
        .into_counts()
        .into_iter()
        .enumerate()
        .map(|(n, bent)| match n {
            0 => BigUint::from(1u32),
            _ => bent * 8u32 + 4u32,
        })
        .collect();
    Ok(CountTable::new(counts))
}

/// Polygons up to translation, keyed by (perimeter, area), for perimeters `<= m_max`.
pub fn count_polygons(m_max: usize, plan: &SearchPlan) -> Result<JointCountTable> {
    if m_max < 4 {
        return Err(Error::Domain(format!("perimeter cutoff {m_max} is below 4")));
    }
    // Rooted at the least vertex, the search sees roughly a half-plane of walks.
    plan.check_budget(SAW_GROWTH_ESTIMATE.powi(m_max as i32 - 1) / 2.0)?;
    let reach = m_max / 2 + 1;
    let mut board = OccupancySet::for_domain(&Domain::FullPlane, reach);
    for y in -(reach as i32)..=reach as i32 {
        for x in -(reach as i32)..=0 {
            if x < 0 || y < 0 {
                board.block(Point::new(x, y));
            }
        }
    }
    let tally = explore(
        &board,
        &[vec![Point::ORIGIN]],
        &PolygonTally::new(m_max - 1),
        m_max - 1,
        plan,
    );
    let mut table = JointCountTable::new(["perimeter", "area"], m_max as i64);
    for ((m, twice_area), count) in tally.into_counts() {
        // each polygon is traced once per orientation
        debug_assert_eq!(count % 2, 0);
        debug_assert_eq!(twice_area % 2, 0);
        table.add(m as i64, (twice_area / 2) as i64, count / 2);
    }
    Ok(table)
}

/// `a_n`, the number of polygons of area `n`, from a perimeter x area table.
pub fn area_counts(table: &JointCountTable, n_max: usize) -> Result<CountTable> {
    let needed = 2 * n_max + 2;
    if (table.extent() as usize) < needed {
        return Err(Error::Coverage {
            requested: n_max,
            available: table.extent() as usize,
        });
    }
    let by_area = table.second_marginal();
    let counts = (0..=n_max)
        .map(|n| by_area.get(&(n as i64)).cloned().unwrap_or_default())
        .collect();
    Ok(CountTable::new(counts))
}

/// Half-plane walks keyed by (length, surface vertices other than the origin).
pub fn count_half_plane(n_max: usize, plan: &SearchPlan) -> Result<JointCountTable> {
    plan.check_budget(SAW_GROWTH_ESTIMATE.powi(n_max as i32) / 2.0)?;
    let board = OccupancySet::for_domain(&Domain::HalfPlane, n_max);
    let tally = explore(
        &board,
        &[vec![Point::ORIGIN]],
        &HalfPlaneTally::new(n_max),
        n_max,
        plan,
    );
    let mut table = JointCountTable::new(["length", "surface_contacts"], n_max as i64);
    for (n, row) in tally.into_counts().into_iter().enumerate() {
        for (i, c) in row.into_iter().enumerate() {
            table.add(n as i64, i as i64, c);
        }
    }
    Ok(table)
}

/// Half-plane census under an explicit origin convention.
pub fn count_half_plane_with(
    n_max: usize,
    plan: &SearchPlan,
    origin: OriginConvention,
) -> Result<JointCountTable> {
    let table = count_half_plane(n_max, plan)?;
    Ok(match origin {
        OriginConvention::Exclude => table,
        OriginConvention::Include => table.shift_second(1),
    })
}

/// `c_n(L)`: walks from `(0, 0)` to `(L, L)` inside the square of side `L`.
pub fn count_crossing(side: u32, plan: &SearchPlan) -> Result<CountTable> {
    if side == 0 {
        return Err(Error::Domain("square side must be at least 1".into()));
    }
    plan.check_budget(CROSSING_GROWTH_ESTIMATE.powf(f64::from(side * side)))?;
    if side > MAX_CROSSING_SIDE {
        return Err(Error::Budget {
            estimate: CROSSING_GROWTH_ESTIMATE.powf(f64::from(side * side)),
            ceiling: CROSSING_GROWTH_ESTIMATE.powf(f64::from(MAX_CROSSING_SIDE.pow(2))),
        });
    }
    let domain = Domain::Square(side);
    let max_len = ((side + 1) * (side + 1) - 1) as usize;
    let board = OccupancySet::for_domain(&domain, max_len);
    let tally = explore(
        &board,
        &[vec![Point::ORIGIN]],
        &CrossingTally::new(side, max_len),
        max_len,
        plan,
    );
    let counts = tally.into_counts();
    let last = counts.iter().rposition(|&c| c != 0).unwrap_or(0);
    Ok(CountTable::new(
        counts[..=last].iter().map(|&c| BigUint::from(c)).collect(),
    ))
}

/// `C(N, m, x)` for surface-tethered interacting walks, for every `N <= n_max`.
pub fn count_interacting_pulled(n_max: usize, plan: &SearchPlan) -> Result<InteractingCensus> {
    if n_max == 0 {
        return Err(Error::Domain("need at least one step".into()));
    }
    plan.check_budget(SAW_GROWTH_ESTIMATE.powi(n_max as i32) / 2.0)?;
    let board = OccupancySet::for_domain(&Domain::HalfPlane, n_max);
    let tally = explore(
        &board,
        &[vec![Point::ORIGIN]],
        &InteractingTally::new(n_max),
        n_max,
        plan,
    );
    let tables = tally
        .into_tables()
        .into_iter()
        .enumerate()
        .map(|(n, entries)| {
            let mut t = JointCountTable::new(["contacts", "displacement"], n as i64);
            for (m, x, c) in entries {
                t.add(m, x, c);
            }
            t
        })
        .collect();
    Ok(InteractingCensus { tables })
}

/// Exact mean squared end-to-end distance of `n`-step walks.
#[derive(Debug, Clone, PartialEq)]
pub struct SpreadMoment {
    pub count: BigUint,
    /// Sum of `|w_n|^2` over all walks.
    pub sum_sq: BigUint,
}

impl SpreadMoment {
    pub fn mean(&self) -> f64 {
        let sum = self.sum_sq.to_f64().unwrap_or(f64::INFINITY);
        sum / self.count.to_f64().unwrap_or(f64::INFINITY)
    }
}

/// `sum |w_n|^2` and `c_n` for every `n <= n_max`, over full-plane walks.
pub fn end_to_end_moments(n_max: usize, plan: &SearchPlan) -> Result<Vec<SpreadMoment>> {
    plan.check_budget(SAW_GROWTH_ESTIMATE.powi(n_max as i32))?;
    let board = OccupancySet::for_domain(&Domain::FullPlane, n_max);
    let tally = explore(&board, &[vec![Point::ORIGIN]], &SpreadTally::new(n_max), n_max, plan);
    Ok(tally
        .into_moments()
        .into_iter()
        .map(|(c, s)| SpreadMoment {
            count: BigUint::from(c),
            sum_sq: BigUint::from(s),
        })
        .collect())
}
