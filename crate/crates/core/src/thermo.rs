//! Thermodynamics of tethered interacting walks under a pulling force, and of
//! walks adsorbing onto the wall, evaluated from exact census tables.
//!
//! Contact energy is `-1` and `k_B = 1`, so a contact carries weight
//! `omega = e^{1/T}`. The force weight is `u = exp(f F / T)` per unit of end
//! displacement, with `f = +1` (force along `+x`) unless configured otherwise.

use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;

use crate::enumerate::{InteractingCensus, JointCountTable};
use crate::error::{Error, Result};
use crate::series::{ln_big, ln_poly, LogSum};

/// Contact energy.
pub const CONTACT_ENERGY: f64 = -1.0;
/// Boltzmann constant.
pub const BOLTZMANN_K: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleWeights {
    pub temperature: f64,
    pub force: f64,
    /// `+1`: the force rewards positive displacement; `-1`: `u = e^{-F/T}`.
    pub force_sign: f64,
}

impl EnsembleWeights {
    pub fn new(temperature: f64, force: f64) -> Result<Self> {
        if temperature.is_nan() || temperature <= 0.0 {
            return Err(Error::Domain(format!("temperature {temperature} must be positive")));
        }
        if !force.is_finite() {
            return Err(Error::Domain(format!("force {force} must be finite")));
        }
        Ok(EnsembleWeights {
            temperature,
            force,
            force_sign: 1.0,
        })
    }

    pub fn with_force_sign(mut self, sign: f64) -> Self {
        self.force_sign = sign.signum();
        self
    }

    pub fn ln_omega(&self) -> f64 {
        -CONTACT_ENERGY / (BOLTZMANN_K * self.temperature)
    }

    pub fn omega(&self) -> f64 {
        self.ln_omega().exp()
    }

    pub fn ln_u(&self) -> f64 {
        self.force_sign * self.force / (BOLTZMANN_K * self.temperature)
    }

    pub fn u(&self) -> f64 {
        self.ln_u().exp()
    }
}

/// `ln(C omega^m u^x)` for every table entry, with `m` and `x`.
fn log_terms(table: &JointCountTable, w: &EnsembleWeights) -> Vec<(f64, i64, i64)> {
    let (lo, lu) = (w.ln_omega(), w.ln_u());
    table
        .iter()
        .filter(|(_, _, c)| !c.is_zero())
        .map(|(m, x, c)| (ln_big(c) + m as f64 * lo + x as f64 * lu, m, x))
        .collect()
}

/// `ln Z_N(F, T)`.
pub fn ln_partition_force(table: &JointCountTable, w: &EnsembleWeights) -> f64 {
    let terms: Vec<(f64, f64)> = log_terms(table, w).iter().map(|&(l, _, _)| (l, 1.0)).collect();
    LogSum::from_log_terms(&terms).ln()
}

/// `Z_N(F, T) = sum_{m,x} C(N, m, x) omega^m u^x`.
pub fn partition_force(table: &JointCountTable, w: &EnsembleWeights) -> f64 {
    ln_partition_force(table, w).exp()
}

/// Fixed-displacement `Z_N(x, T) = sum_m C(N, m, x) omega^m`.
pub fn partition_distance(table: &JointCountTable, x: i64, w: &EnsembleWeights) -> Result<f64> {
    let coeffs: Vec<(i64, BigUint)> = table
        .iter()
        .filter(|&(_, xx, c)| xx == x && !c.is_zero())
        .map(|(m, _, c)| (m, c.clone()))
        .collect();
    if coeffs.is_empty() {
        return Err(Error::AbsentDisplacement(x));
    }
    let refs: Vec<(i64, &BigUint)> = coeffs.iter().map(|(m, c)| (*m, c)).collect();
    Ok(ln_poly(&refs, w.omega()).exp())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observables {
    pub mean_contacts: f64,
    pub mean_sq_contacts: f64,
    /// `<m^2> - <m>^2`.
    pub fluctuation: f64,
    pub mean_x: f64,
    /// `G = -T ln Z`.
    pub free_energy: f64,
}

pub fn observables(table: &JointCountTable, w: &EnsembleWeights) -> Observables {
    let terms = log_terms(table, w);
    let top = terms.iter().map(|t| t.0).fold(f64::NEG_INFINITY, f64::max);
    let (mut z, mut m1, mut m2, mut x1) = (0.0, 0.0, 0.0, 0.0);
    for &(l, m, x) in &terms {
        let p = (l - top).exp();
        z += p;
        m1 += p * m as f64;
        m2 += p * (m * m) as f64;
        x1 += p * x as f64;
    }
    let mean = m1 / z;
    // centred second moment, so rounding cannot push it below zero
    let var: f64 = terms
        .iter()
        .map(|&(l, m, _)| (l - top).exp() * (m as f64 - mean).powi(2))
        .sum::<f64>()
        / z;
    Observables {
        mean_contacts: mean,
        mean_sq_contacts: m2 / z,
        fluctuation: var,
        mean_x: x1 / z,
        free_energy: -w.temperature * (top + z.ln()),
    }
}

/// `[0.2, 3.0]` in steps of `0.05`.
pub fn default_temperature_grid() -> Vec<f64> {
    (0..=56).map(|k| 0.2 + 0.05 * f64::from(k)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThermoPoint {
    /// Value of the scanned parameter.
    pub control: f64,
    pub ln_z: f64,
    pub observables: Observables,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThermoCurve {
    pub length: usize,
    pub force: f64,
    pub points: Vec<ThermoPoint>,
    /// Indices into `points` of local maxima of the fluctuation.
    pub peaks: Vec<usize>,
}

impl ThermoCurve {
    pub fn peak_temperatures(&self) -> Vec<f64> {
        self.peaks.iter().map(|&i| self.points[i].control).collect()
    }
}

/// Strict interior local maxima, after an optional 3-point moving average.
pub fn find_peaks(values: &[f64], smooth: bool) -> Vec<usize> {
    let series: Vec<f64> = if smooth && values.len() >= 3 {
        (0..values.len())
            .map(|i| {
                let lo = i.saturating_sub(1);
                let hi = (i + 1).min(values.len() - 1);
                values[lo..=hi].iter().sum::<f64>() / (hi - lo + 1) as f64
            })
            .collect()
    } else {
        values.to_vec()
    };
    (1..series.len().saturating_sub(1))
        .filter(|&i| series[i] > series[i - 1] && series[i] > series[i + 1])
        .collect()
}

/// Contact fluctuation over a temperature grid at fixed force.
pub fn fluctuation_scan(
    census: &InteractingCensus,
    length: usize,
    force: f64,
    temperatures: &[f64],
    smooth: bool,
) -> Result<ThermoCurve> {
    if temperatures.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain("temperature grid must increase strictly".into()));
    }
    let table = census.table(length)?;
    let points = temperatures
        .par_iter()
        .map(|&t| {
            let w = EnsembleWeights::new(t, force)?;
            Ok(ThermoPoint {
                control: t,
                ln_z: ln_partition_force(table, &w),
                observables: observables(table, &w),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let chi: Vec<f64> = points.iter().map(|p| p.observables.fluctuation).collect();
    Ok(ThermoCurve {
        length,
        force,
        peaks: find_peaks(&chi, smooth),
        points,
    })
}

/// `C_n^+(y) = sum_i c_n^+(i) y^i` over a (length, wall visits) table.
pub fn adsorption_partition(table: &JointCountTable, n: usize, y: f64) -> Result<f64> {
    Ok(ln_adsorption_partition(table, n, y)?.exp())
}

pub fn ln_adsorption_partition(table: &JointCountTable, n: usize, y: f64) -> Result<f64> {
    if y.is_nan() || y <= 0.0 {
        return Err(Error::Domain(format!("surface weight {y} must be positive")));
    }
    let row = table.row(n as i64);
    if row.is_empty() {
        return Err(Error::AbsentLength(n));
    }
    let coeffs: Vec<(i64, &BigUint)> = row.iter().map(|(&i, c)| (i, c)).collect();
    Ok(ln_poly(&coeffs, y))
}

/// Finite-length growth data at one surface weight.
#[derive(Debug, Clone, PartialEq)]
pub struct AdsorptionEstimate {
    pub y: f64,
    /// `(n, C_n^+(y)^{1/n})`.
    pub roots: Vec<(usize, f64)>,
    /// `(n, C_n^+(y) / C_{n-1}^+(y))`.
    pub ratios: Vec<(usize, f64)>,
    /// Mean of the last two linear-intercept ratios `n r_n - (n-1) r_{n-1}`,
    /// which cancels the leading `1/n` drift and the parity wobble.
    pub extrapolated: f64,
}

pub fn adsorption_growth(table: &JointCountTable, y_grid: &[f64]) -> Result<Vec<AdsorptionEstimate>> {
    let n_max = table.first_marginal().keys().copied().max().unwrap_or(0).max(0) as usize;
    if n_max < 12 {
        return Err(Error::InsufficientData {
            required: 12,
            available: n_max,
        });
    }
    y_grid
        .iter()
        .map(|&y| {
            let logs = (0..=n_max)
                .map(|n| ln_adsorption_partition(table, n, y))
                .collect::<Result<Vec<f64>>>()?;
            let roots = (1..=n_max).map(|n| (n, (logs[n] / n as f64).exp())).collect();
            let ratios: Vec<(usize, f64)> = (1..=n_max).map(|n| (n, (logs[n] - logs[n - 1]).exp())).collect();
            let intercepts: Vec<f64> = ratios
                .windows(2)
                .map(|w| w[1].0 as f64 * w[1].1 - w[0].0 as f64 * w[0].1)
                .collect();
            let k = intercepts.len();
            Ok(AdsorptionEstimate {
                y,
                roots,
                ratios,
                extrapolated: (intercepts[k - 1] + intercepts[k - 2]) / 2.0,
            })
        })
        .collect()
}

/// First grid weight whose extrapolated growth exceeds `mu_bulk` by more than
/// `margin`; estimates must be sorted by `y`.
pub fn critical_y_estimate(estimates: &[AdsorptionEstimate], mu_bulk: f64, margin: f64) -> Option<f64> {
    estimates
        .iter()
        .find(|e| e.extrapolated > mu_bulk + margin)
        .map(|e| e.y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::{count_half_plane, count_interacting_pulled, SearchPlan};
    use crate::lattice::{Point, SquareStep};

    /// Walk-by-walk sums over half-plane walks of length `n`:
    /// `(m, x)` for each walk.
    fn naive_walks(n: usize) -> Vec<(i64, i64)> {
        fn go(path: &mut Vec<Point>, n: usize, out: &mut Vec<(i64, i64)>) {
            if path.len() - 1 == n {
                let mut m = 0;
                for i in 0..path.len() {
                    for j in i + 2..path.len() {
                        m += i64::from(path[i].is_adjacent(path[j]));
                    }
                }
                out.push((m, i64::from(path[n].x)));
                return;
            }
            let end = *path.last().unwrap();
            for s in SquareStep::ALL {
                let next = end.step(s);
                if next.y >= 0 && !path.contains(&next) {
                    path.push(next);
                    go(path, n, out);
                    path.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(&mut vec![Point::ORIGIN], n, &mut out);
        out
    }

    fn census(n: usize) -> InteractingCensus {
        count_interacting_pulled(n, &SearchPlan::default()).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a / b - 1.0).abs()
    }

    #[test]
    fn single_step() {
        let c = census(1);
        let t = c.table(1).unwrap();
        let w = EnsembleWeights::new(1.0, 0.0).unwrap();
        assert!(rel(partition_force(t, &w), 3.0) < 1e-15);
        for (temp, f) in [(0.5, 0.3), (2.0, -1.0), (1.3, 2.5)] {
            let w = EnsembleWeights::new(temp, f).unwrap();
            let u = w.u();
            assert!(rel(partition_force(t, &w), 1.0 + u + 1.0 / u) < 1e-14);
            assert_eq!(partition_distance(t, 1, &w).unwrap(), 1.0);
            let obs = observables(t, &w);
            assert_eq!((obs.mean_contacts, obs.fluctuation), (0.0, 0.0));
        }
        assert_eq!(partition_distance(t, 2, &w), Err(Error::AbsentDisplacement(2)));
    }

    #[test]
    fn weights_are_validated() {
        assert!(EnsembleWeights::new(0.0, 1.0).is_err());
        assert!(EnsembleWeights::new(1.0, f64::NAN).is_err());
        let w = EnsembleWeights::new(0.5, 1.0).unwrap();
        assert!(w.omega() > 1.0);
        assert!(rel(w.u(), 2f64.exp()) < 1e-15);
        assert!(rel(w.with_force_sign(-1.0).u(), (-2f64).exp()) < 1e-15);
    }

    #[test]
    fn infinite_temperature_counts_walks() {
        let c = census(8);
        let t = c.table(8).unwrap();
        let w = EnsembleWeights::new(1e300, 0.0).unwrap();
        let total: f64 = t.total().to_string().parse().unwrap();
        assert!(rel(partition_force(t, &w), total) < 1e-12);
        let naive = naive_walks(8);
        let mean = naive.iter().map(|p| p.0 as f64).sum::<f64>() / naive.len() as f64;
        assert!(rel(observables(t, &w).mean_contacts, mean) < 1e-12);
    }

    #[test]
    fn matches_walk_by_walk_sums() {
        let c = census(12);
        for n in [2, 7, 12] {
            let walks = naive_walks(n);
            let t = c.table(n).unwrap();
            for (temp, f) in [(0.4, 0.5), (1.0, -0.7), (2.5, 1.5)] {
                let w = EnsembleWeights::new(temp, f).unwrap();
                let z: f64 = walks.iter().map(|&(m, x)| w.omega().powi(m as i32) * w.u().powi(x as i32)).sum();
                assert!(rel(partition_force(t, &w), z) < 1e-12, "N={n}");
                let resummed: f64 = (-(n as i64)..=n as i64)
                    .filter_map(|x| partition_distance(t, x, &w).ok().map(|zx| zx * w.u().powi(x as i32)))
                    .sum();
                assert!(rel(resummed, partition_force(t, &w)) < 1e-12);
            }
        }
    }

    #[test]
    fn force_derivative_is_mean_extension() {
        let c = census(10);
        let t = c.table(10).unwrap();
        for sign in [1.0, -1.0] {
            let g = |f: f64| observables(t, &EnsembleWeights::new(1.0, f).unwrap().with_force_sign(sign)).free_energy;
            let h = 1e-4;
            let dg = (g(0.5 + h) - g(0.5 - h)) / (2.0 * h);
            let w = EnsembleWeights::new(1.0, 0.5).unwrap().with_force_sign(sign);
            // dG/dF = -f <x>
            assert!(rel(-sign * dg, observables(t, &w).mean_x) < 1e-5);
        }
    }

    #[test]
    fn partition_function_is_log_convex() {
        let c = census(10);
        let t = c.table(10).unwrap();
        let forces: Vec<f64> = (0..20).map(|k| -1.0 + 0.1 * f64::from(k)).collect();
        let lz: Vec<f64> = forces.iter().map(|&f| ln_partition_force(t, &EnsembleWeights::new(1.0, f).unwrap())).collect();
        assert!(lz.windows(3).all(|w| w[2] - 2.0 * w[1] + w[0] >= -1e-10));
        let betas: Vec<f64> = (1..30).map(|k| 0.2 * f64::from(k)).collect();
        let lz: Vec<f64> = betas
            .iter()
            .map(|&b| ln_partition_force(t, &EnsembleWeights::new(1.0 / b, 0.4).unwrap()))
            .collect();
        assert!(lz.windows(3).all(|w| w[2] - 2.0 * w[1] + w[0] >= -1e-10));
    }

    #[test]
    fn fluctuation_scans() {
        let c = census(18);
        let grid = default_temperature_grid();
        assert_eq!(grid.len(), 57);
        assert!((grid[56] - 3.0).abs() < 1e-12);
        let curve = fluctuation_scan(&c, 6, 0.0, &grid, false).unwrap();
        assert!(curve.points.iter().all(|p| p.observables.fluctuation >= 0.0 && p.ln_z.is_finite()));

        let counts: Vec<usize> = [10, 14, 18]
            .iter()
            .map(|&n| fluctuation_scan(&c, n, 1.0, &grid, false).unwrap().peaks.len())
            .collect();
        assert!(counts.windows(2).all(|w| w[1] >= w[0]), "{counts:?}");

        // halving the spacing moves each peak by less than one coarse step
        let coarse = fluctuation_scan(&c, 14, 0.0, &grid, false).unwrap();
        let fine_grid: Vec<f64> = (0..=112).map(|k| 0.2 + 0.025 * f64::from(k)).collect();
        let fine = fluctuation_scan(&c, 14, 0.0, &fine_grid, false).unwrap();
        let (a, b) = (coarse.peak_temperatures(), fine.peak_temperatures());
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() <= 0.05 + 1e-12);
        }
        assert!(fluctuation_scan(&c, 6, 0.0, &[1.0, 0.5], false).is_err());
    }

    #[test]
    fn peak_finder() {
        assert_eq!(find_peaks(&[0.0, 1.0, 0.0, 2.0, 3.0, 1.0], false), vec![1, 4]);
        assert_eq!(find_peaks(&[1.0, 1.0, 1.0], false), Vec::<usize>::new());
        let wiggly = [0.0, 1.0, 3.0, 1.0, 0.5, 0.6, 0.4, 0.0];
        assert_eq!(find_peaks(&wiggly, false), vec![2, 5]);
        assert_eq!(find_peaks(&wiggly, true), vec![2]);
    }

    #[test]
    fn adsorption_polynomials() {
        let t = count_half_plane(14, &SearchPlan::default()).unwrap();
        for y in [0.3, 1.7] {
            assert!(rel(adsorption_partition(&t, 1, y).unwrap(), 1.0 + 2.0 * y) < 1e-15);
        }
        let totals = t.first_marginal();
        let at_one: f64 = totals[&10].to_string().parse().unwrap();
        assert!(rel(adsorption_partition(&t, 10, 1.0).unwrap(), at_one) < 1e-14);
        let constant: f64 = t.get(10, 0).to_string().parse().unwrap();
        assert!(rel(adsorption_partition(&t, 10, 1e-12).unwrap(), constant) < 1e-9);
        assert_eq!(adsorption_partition(&t, 15, 1.0), Err(Error::AbsentLength(15)));
        assert!(adsorption_partition(&t, 3, 0.0).is_err());

        let ys = [0.25, 0.5, 1.0, 2.0, 4.0];
        for n in 3..=14 {
            let l: Vec<f64> = ys.iter().map(|&y| ln_adsorption_partition(&t, n, y).unwrap()).collect();
            assert!(l.windows(2).all(|w| w[1] >= w[0]));
            // equally spaced in ln y, so plain second differences
            assert!(l.windows(3).all(|w| w[2] - 2.0 * w[1] + w[0] >= -1e-10));
        }
    }

    #[test]
    fn adsorption_growth_trends() {
        let t = count_half_plane(14, &SearchPlan::default()).unwrap();
        let est = adsorption_growth(&t, &[0.5, 1.0, 2.0, 4.0, 8.0]).unwrap();
        for e in &est {
            if e.y == 4.0 {
                assert!(e.roots.iter().filter(|r| r.0 >= 10).all(|r| r.1 > 2.0 - 0.1));
            }
        }
        assert!(est.windows(2).all(|w| w[1].extrapolated >= w[0].extrapolated));
        let yc = critical_y_estimate(&est, 2.638, 0.05).unwrap();
        assert!(yc > 1.0);
        let short = count_half_plane(8, &SearchPlan::default()).unwrap();
        assert!(matches!(adsorption_growth(&short, &[1.0]), Err(Error::InsufficientData { .. })));
    }
}
