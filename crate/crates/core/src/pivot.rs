//! Pivot-algorithm Monte Carlo for square-lattice walks and the size exponent
//! `nu` from `E|w_n|^2 ~ A n^{2 nu}`.
//!
//! A move picks a site `k` and a point symmetry `g`, and maps every later
//! vertex to `w_k + g(w_j - w_k)`. The first vertex stays at the origin. The
//! board stores `j + 1` for vertex `j`, so a proposed vertex collides exactly
//! when it lands on a stored index `<= k + 1`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{Point, Walk};

/// Minimum acceptance rate before a chain is declared stuck.
pub const MIN_ACCEPTANCE: f64 = 0.01;

/// The eight point symmetries of the square lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symmetry {
    Identity,
    Rotate90,
    Rotate180,
    Rotate270,
    ReflectX,
    ReflectY,
    ReflectDiagonal,
    ReflectAntiDiagonal,
}

impl Symmetry {
    pub const ALL: [Symmetry; 8] = [
        Symmetry::Identity,
        Symmetry::Rotate90,
        Symmetry::Rotate180,
        Symmetry::Rotate270,
        Symmetry::ReflectX,
        Symmetry::ReflectY,
        Symmetry::ReflectDiagonal,
        Symmetry::ReflectAntiDiagonal,
    ];

    pub fn apply(self, x: i32, y: i32) -> (i32, i32) {
        match self {
            Symmetry::Identity => (x, y),
            Symmetry::Rotate90 => (-y, x),
            Symmetry::Rotate180 => (-x, -y),
            Symmetry::Rotate270 => (y, -x),
            Symmetry::ReflectX => (x, -y),
            Symmetry::ReflectY => (-x, y),
            Symmetry::ReflectDiagonal => (y, x),
            Symmetry::ReflectAntiDiagonal => (-y, -x),
        }
    }
}

/// Burn-in and spacing of a sampling run, counted in attempted moves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Schedule {
    pub warmup: usize,
    pub spacing: usize,
    pub samples: usize,
}

impl Schedule {
    /// `20 n` warm-up moves, then one sample every `n / 2` moves.
    pub fn standard(n: usize, samples: usize) -> Self {
        Schedule {
            warmup: 20 * n,
            spacing: (n / 2).max(1),
            samples,
        }
    }
}

/// A length-`n` walk evolving under pivot moves.
#[derive(Debug, Clone)]
pub struct PivotChain {
    vertices: Vec<Point>,
    board: Vec<u32>,
    side: usize,
    scratch: Vec<Point>,
    rng: ChaCha8Rng,
    accepted: u64,
    attempted: u64,
}

impl PivotChain {
    /// Straight rod along `+x`, driven by stream `stream` of the seeded generator.
    pub fn new(n: usize, seed: u64, stream: u64) -> Result<Self> {
        if n == 0 || n > 1 << 15 {
            return Err(Error::Domain(format!("walk length {n} outside 1..=32768")));
        }
        let side = 2 * n + 1;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        let mut chain = PivotChain {
            vertices: (0..=n as i32).map(|x| Point::new(x, 0)).collect(),
            board: vec![0; side * side],
            side,
            scratch: Vec::with_capacity(n),
            rng,
            accepted: 0,
            attempted: 0,
        };
        for j in 0..=n {
            let cell = chain.cell(chain.vertices[j]);
            chain.board[cell] = j as u32 + 1;
        }
        Ok(chain)
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

    /// The current walk, rebuilt through the validating constructor.
    pub fn walk(&self) -> Result<Walk> {
        Walk::from_vertices(self.vertices.clone())
    }

    pub fn end_to_end_sq(&self) -> i64 {
        self.vertices[self.len()].norm_sq()
    }

    pub fn accepted(&self) -> u64 {
        self.accepted
    }

    pub fn attempted(&self) -> u64 {
        self.attempted
    }

    pub fn acceptance_rate(&self) -> f64 {
        if self.attempted == 0 {
            0.0
        } else {
            self.accepted as f64 / self.attempted as f64
        }
    }

    fn cell(&self, p: Point) -> usize {
        let n = self.len() as i32;
        (p.x + n) as usize * self.side + (p.y + n) as usize
    }

    /// Pivots the tail beyond `site` by `g`; returns whether the move was kept.
    pub fn try_pivot(&mut self, site: usize, g: Symmetry) -> bool {
        assert!(site < self.len(), "pivot site {site} beyond walk");
        self.attempted += 1;
        if g == Symmetry::Identity {
            self.accepted += 1;
            return true;
        }
        let centre = self.vertices[site];
        let limit = site as u32 + 1;
        self.scratch.clear();
        for j in site + 1..self.vertices.len() {
            let v = self.vertices[j];
            let (dx, dy) = g.apply(v.x - centre.x, v.y - centre.y);
            let p = Point::new(centre.x + dx, centre.y + dy);
            let mark = self.board[self.cell(p)];
            if mark != 0 && mark <= limit {
                return false;
            }
            self.scratch.push(p);
        }
        for j in site + 1..self.vertices.len() {
            let cell = self.cell(self.vertices[j]);
            self.board[cell] = 0;
        }
        for (offset, p) in self.scratch.iter().enumerate() {
            let j = site + 1 + offset;
            self.vertices[j] = *p;
            let cell = self.cell(*p);
            self.board[cell] = j as u32 + 1;
        }
        self.accepted += 1;
        true
    }

    /// One move with a uniform site in `0..n` and a uniform symmetry.
    pub fn step(&mut self) -> bool {
        let site = self.rng.gen_range(0..self.len());
        let g = Symmetry::ALL[self.rng.gen_range(0..8)];
        self.try_pivot(site, g)
    }

    pub fn advance(&mut self, moves: usize) {
        for _ in 0..moves {
            self.step();
        }
    }

    /// Runs `schedule` and returns the sampled `|w_n|^2` values.
    pub fn sample(&mut self, schedule: &Schedule) -> Vec<i64> {
        self.advance(schedule.warmup);
        (0..schedule.samples)
            .map(|_| {
                self.advance(schedule.spacing);
                self.end_to_end_sq()
            })
            .collect()
    }
}

/// Mean of `|w_n|^2` at one length.
#[derive(Debug, Clone, PartialEq)]
pub struct SpreadPoint {
    pub n: usize,
    pub mean_sq: f64,
    /// Zero for exact values.
    pub std_err: f64,
    pub samples: usize,
    pub acceptance: f64,
}

impl SpreadPoint {
    pub fn exact(n: usize, mean_sq: f64) -> Self {
        SpreadPoint {
            n,
            mean_sq,
            std_err: 0.0,
            samples: 0,
            acceptance: 1.0,
        }
    }
}

/// Number of batches used for the batch-means standard error.
const BATCHES: usize = 50;

/// Sample mean with a batch-means standard error, which absorbs the
/// correlation left between consecutive samples.
pub fn batch_mean(values: &[i64]) -> (f64, f64) {
    let n = values.len();
    let mean = values.iter().map(|&v| v as f64).sum::<f64>() / n as f64;
    let batches = BATCHES.min(n / 2).max(1);
    let size = n / batches;
    if size == 0 || batches < 2 {
        return (mean, f64::NAN);
    }
    let means: Vec<f64> = values
        .chunks_exact(size)
        .take(batches)
        .map(|c| c.iter().map(|&v| v as f64).sum::<f64>() / size as f64)
        .collect();
    let centre = means.iter().sum::<f64>() / batches as f64;
    let var = means.iter().map(|m| (m - centre).powi(2)).sum::<f64>() / (batches - 1) as f64;
    (mean, (var / batches as f64).sqrt())
}

/// Samples one length on stream `stream`.
pub fn sample_spread(n: usize, schedule: &Schedule, seed: u64, stream: u64) -> Result<SpreadPoint> {
    let mut chain = PivotChain::new(n, seed, stream)?;
    let values = chain.sample(schedule);
    let rate = chain.acceptance_rate();
    if rate < MIN_ACCEPTANCE {
        return Err(Error::Convergence { n, rate });
    }
    let (mean_sq, std_err) = batch_mean(&values);
    Ok(SpreadPoint {
        n,
        mean_sq,
        std_err,
        samples: values.len(),
        acceptance: rate,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct NuEstimate {
    pub points: Vec<SpreadPoint>,
    pub two_nu: f64,
    pub two_nu_err: f64,
    pub nu: f64,
    pub nu_err: f64,
    /// `ln A` of the fit.
    pub intercept: f64,
    /// `ln mean - fit`, per point.
    pub residuals: Vec<f64>,
}

/// Least-squares line through `(ln n, ln mean)`.
///
/// The slope error combines the regression scatter with the propagated
/// standard errors of the means.
pub fn fit_nu(points: Vec<SpreadPoint>) -> Result<NuEstimate> {
    if points.len() < 3 {
        return Err(Error::InsufficientData {
            required: 3,
            available: points.len(),
        });
    }
    if points.iter().any(|p| p.n == 0 || !(p.mean_sq > 0.0)) {
        return Err(Error::Domain("means must be positive at positive lengths".into()));
    }
    let m = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| (p.n as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.mean_sq.ln()).collect();
    let (xbar, ybar) = (xs.iter().sum::<f64>() / m, ys.iter().sum::<f64>() / m);
    let sxx: f64 = xs.iter().map(|x| (x - xbar).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Domain("lengths must be distinct".into()));
    }
    let slope = xs.iter().zip(&ys).map(|(x, y)| (x - xbar) * (y - ybar)).sum::<f64>() / sxx;
    let intercept = ybar - slope * xbar;
    let residuals: Vec<f64> = xs.iter().zip(&ys).map(|(x, y)| y - intercept - slope * x).collect();
    let scatter = residuals.iter().map(|r| r * r).sum::<f64>() / (m - 2.0) / sxx;
    let statistical: f64 = xs
        .iter()
        .zip(&points)
        .map(|(x, p)| ((x - xbar) / sxx * p.std_err / p.mean_sq).powi(2))
        .sum();
    let err = (scatter + statistical).sqrt();
    Ok(NuEstimate {
        points,
        two_nu: slope,
        two_nu_err: err,
        nu: slope / 2.0,
        nu_err: err / 2.0,
        intercept,
        residuals,
    })
}

/// Samples every length on its own stream in parallel and fits `nu`.
///
/// Needs at least four distinct lengths with `max >= 8 min`.
pub fn estimate_nu(n_values: &[usize], samples_per_n: usize, seed: u64) -> Result<NuEstimate> {
    let mut ns = n_values.to_vec();
    ns.sort_unstable();
    ns.dedup();
    if ns.len() < 4 {
        return Err(Error::Domain(format!("need 4 distinct lengths, got {}", ns.len())));
    }
    if ns[0] < 2 || ns[ns.len() - 1] < 8 * ns[0] {
        return Err(Error::Domain("lengths must start at 2 or more and span a factor of 8".into()));
    }
    if samples_per_n < 2 * BATCHES {
        return Err(Error::Domain(format!("need at least {} samples per length", 2 * BATCHES)));
    }
    let points = ns
        .par_iter()
        .enumerate()
        .map(|(i, &n)| sample_spread(n, &Schedule::standard(n, samples_per_n), seed, i as u64))
        .collect::<Result<Vec<_>>>()?;
    fit_nu(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identity_pivot_keeps_walk() {
        let mut chain = PivotChain::new(10, 1, 0).unwrap();
        let before = chain.vertices().to_vec();
        for k in 0..10 {
            assert!(chain.try_pivot(k, Symmetry::Identity));
        }
        assert_eq!(chain.vertices(), &before[..]);
        assert_eq!(chain.acceptance_rate(), 1.0);
    }

    #[test]
    fn rod_rotates_into_l_shape() {
        let mut chain = PivotChain::new(6, 1, 0).unwrap();
        assert!(chain.try_pivot(3, Symmetry::Rotate90));
        assert_eq!(chain.vertices()[6], Point::new(3, 3));
        assert!(chain.walk().is_ok());
        // folding back onto itself must fail
        let mut chain = PivotChain::new(6, 1, 0).unwrap();
        assert!(!chain.try_pivot(3, Symmetry::ReflectY));
        assert_eq!(chain.end_to_end_sq(), 36);
    }

    #[test]
    fn symmetries_form_the_square_group() {
        for g in Symmetry::ALL {
            let (x, y) = g.apply(2, 5);
            assert_eq!(x * x + y * y, 29);
        }
        let images: std::collections::HashSet<_> = Symmetry::ALL.iter().map(|g| g.apply(1, 2)).collect();
        assert_eq!(images.len(), 8);
    }

    #[test]
    fn batch_errors() {
        let constant = vec![7i64; 1000];
        assert_eq!(batch_mean(&constant), (7.0, 0.0));
        let alternating: Vec<i64> = (0..1000).map(|i| i % 2).collect();
        let (mean, err) = batch_mean(&alternating);
        assert_eq!(mean, 0.5);
        assert!(err < 1e-12);
    }

    #[test]
    fn power_law_fit_is_exact() {
        let points: Vec<_> = [4usize, 8, 16, 32, 64]
            .iter()
            .map(|&n| SpreadPoint::exact(n, 0.8 * (n as f64).powf(1.5)))
            .collect();
        let fit = fit_nu(points.clone()).unwrap();
        assert!((fit.two_nu - 1.5).abs() < 1e-12);
        assert!((fit.intercept - 0.8f64.ln()).abs() < 1e-12);
        assert!(fit.residuals.iter().all(|r| r.abs() < 1e-12));
        assert_eq!(fit.points, points);
        assert!(fit_nu(points[..2].to_vec()).is_err());
    }

    #[test]
    fn estimate_rejects_narrow_ranges() {
        assert!(estimate_nu(&[10, 20, 40], 200, 1).is_err());
        assert!(estimate_nu(&[10, 20, 40, 60], 200, 1).is_err());
        assert!(estimate_nu(&[10, 20, 40, 80], 10, 1).is_err());
    }

    #[test]
    fn same_seed_same_estimate() {
        let a = estimate_nu(&[8, 16, 32, 64], 200, 11).unwrap();
        let b = estimate_nu(&[8, 16, 32, 64], 200, 11).unwrap();
        assert_eq!(a, b);
        let c = estimate_nu(&[8, 16, 32, 64], 200, 12).unwrap();
        assert_ne!(a, c);
        assert!(a.points.iter().all(|p| p.std_err > 0.0 && p.acceptance > 0.0 && p.acceptance < 1.0));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn chain_stays_self_avoiding(n in 2usize..40, seed in any::<u64>(), moves in 0usize..400) {
            let mut chain = PivotChain::new(n, seed, 3).unwrap();
            chain.advance(moves);
            prop_assert!(chain.walk().is_ok());
            prop_assert_eq!(chain.vertices()[0], Point::ORIGIN);
            prop_assert_eq!(chain.attempted(), moves as u64);
        }

        #[test]
        fn state_depends_only_on_seed_and_time(n in 2usize..30, seed in any::<u64>(), moves in 0usize..200) {
            let mut a = PivotChain::new(n, seed, 0).unwrap();
            let mut b = PivotChain::new(n, seed, 0).unwrap();
            a.advance(moves);
            b.advance(moves / 2);
            b.advance(moves - moves / 2);
            prop_assert_eq!(a.vertices(), b.vertices());
        }
    }
}
