//! Growth constants, rigorous-bound checks and weighted averages computed from
//! exact count tables.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::enumerate::{CountTable, JointCountTable};
use crate::error::{Error, Result};

/// Natural log of a big integer, exact to double precision at any size.
pub fn ln_big(value: &BigUint) -> f64 {
    if value.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = value.bits();
    if bits <= 1000 {
        return value.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    let top = (value >> shift).to_f64().expect("64-bit head");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// A positive sum held as `exp(scale) * mantissa`, for sums whose terms span
/// hundreds of orders of magnitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogSum {
    pub scale: f64,
    pub mantissa: f64,
}

impl LogSum {
    pub fn ln(&self) -> f64 {
        self.scale + self.mantissa.ln()
    }

    /// Builds the sum from `(ln |term|, weight)` pairs; weights multiply the
    /// rescaled terms (use 1 for a plain sum).
    pub fn from_log_terms(terms: &[(f64, f64)]) -> LogSum {
        let scale = terms
            .iter()
            .map(|&(l, _)| l)
            .fold(f64::NEG_INFINITY, f64::max);
        if scale == f64::NEG_INFINITY {
            return LogSum { scale: 0.0, mantissa: 0.0 };
        }
        let mantissa = terms.iter().map(|&(l, w)| w * (l - scale).exp()).sum();
        LogSum { scale, mantissa }
    }
}

/// `ln sum_k c_k z^k` for big-integer coefficients and `z > 0`.
pub fn ln_poly(coeffs: &[(i64, &BigUint)], z: f64) -> f64 {
    let lz = z.ln();
    let terms: Vec<(f64, f64)> = coeffs
        .iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|&(k, c)| (ln_big(c) + k as f64 * lz, 1.0))
        .collect();
    LogSum::from_log_terms(&terms).ln()
}

/// How a growth constant was extracted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowthMethod {
    /// `c_n^{1/n}`.
    RawRoot,
    /// `c_n / c_{n-1}`.
    Ratio,
    /// Aitken's delta-squared applied to linear-intercept ratios
    /// `n r_n - (n - 1) r_{n-1}`, which removes the `1/n` correction first.
    AitkenRatio,
    /// Least-squares fit of `ln total = L^2 ln lambda + b L + c`.
    QuadraticFit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthEstimate {
    pub point_estimates: Vec<(usize, f64)>,
    pub extrapolated: f64,
    pub method: GrowthMethod,
}

fn ratios(table: &CountTable) -> Vec<(usize, f64)> {
    table
        .iter()
        .skip(1)
        .filter_map(|(n, c)| {
            let prev = table.get(n - 1)?;
            (!prev.is_zero() && !c.is_zero()).then(|| (n, ratio_big(c, prev)))
        })
        .collect()
}

/// `a / b` to within an ulp or two: both operands are cut to the same scale
/// and divided directly, falling back to logs when their sizes differ wildly.
fn ratio_big(a: &BigUint, b: &BigUint) -> f64 {
    let shift = a.bits().max(b.bits()).saturating_sub(1000);
    let (x, y) = ((a >> shift).to_f64(), (b >> shift).to_f64());
    match (x, y) {
        (Some(x), Some(y)) if y > 0.0 => x / y,
        _ => (ln_big(a) - ln_big(b)).exp(),
    }
}

fn aitken(s: &[f64]) -> Vec<f64> {
    s.windows(3)
        .map(|w| {
            let denom = w[2] - 2.0 * w[1] + w[0];
            let d = w[2] - w[1];
            if !denom.is_finite() || denom.abs() <= 64.0 * f64::EPSILON * w[2].abs() {
                w[2]
            } else {
                w[2] - d * d / denom
            }
        })
        .collect()
}

/// `c_n^{1/n}` for every `n >= 1` with a positive count.
pub fn raw_roots(table: &CountTable) -> Vec<(usize, f64)> {
    table
        .iter()
        .skip(1)
        .filter(|(_, c)| !c.is_zero())
        .map(|(n, c)| (n, (ln_big(c) / n as f64).exp()))
        .collect()
}

fn require(table: &CountTable, min: usize) -> Result<()> {
    match table.max_n() {
        Some(n) if n >= min => Ok(()),
        other => Err(Error::InsufficientData {
            required: min,
            available: other.unwrap_or(0),
        }),
    }
}

/// Connective-constant estimate from walk counts.
pub fn estimate_mu(table: &CountTable) -> Result<GrowthEstimate> {
    estimate_mu_with(table, GrowthMethod::AitkenRatio)
}

pub fn estimate_mu_with(table: &CountTable, method: GrowthMethod) -> Result<GrowthEstimate> {
    require(table, 10)?;
    let r = ratios(table);
    let (point_estimates, extrapolated) = match method {
        GrowthMethod::RawRoot => {
            let roots = raw_roots(table);
            let last = roots.last().map_or(f64::NAN, |p| p.1);
            (roots, last)
        }
        GrowthMethod::Ratio => {
            let last = r.last().map_or(f64::NAN, |p| p.1);
            (r, last)
        }
        GrowthMethod::AitkenRatio => {
            let intercepts: Vec<f64> = r
                .windows(2)
                .map(|w| {
                    let (n, rn) = (w[1].0 as f64, w[1].1);
                    n * rn - (n - 1.0) * w[0].1
                })
                .collect();
            let accelerated = aitken(&intercepts);
            let last = accelerated.last().copied().unwrap_or(f64::NAN);
            (r, last)
        }
        GrowthMethod::QuadraticFit => {
            return Err(Error::Domain("quadratic fit applies to crossing totals".into()))
        }
    };
    Ok(GrowthEstimate {
        point_estimates,
        extrapolated,
        method,
    })
}

/// Outcome of checking a count sequence against the rigorous bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundsReport {
    /// Pairs `(n, m)` with `c_{n+m} > c_n c_m`.
    pub submultiplicativity_violations: Vec<(usize, usize)>,
    /// `min_n c_n / mu_ref^n` over `n >= 1`.
    pub min_lower_bound_ratio: f64,
    /// `(n, ln(c_n / mu_ref^n) / sqrt(n))`, the sequence an upper bound of the
    /// form `exp(kappa sqrt(n))` would cap.
    pub upper_bound_diagnostic: Vec<(usize, f64)>,
}

impl BoundsReport {
    pub fn lower_bound_holds(&self) -> bool {
        self.min_lower_bound_ratio >= 1.0
    }
}

pub fn validate_series_bounds(table: &CountTable, mu_ref: f64) -> Result<BoundsReport> {
    if mu_ref.is_nan() || mu_ref <= 0.0 {
        return Err(Error::Domain(format!("reference growth constant {mu_ref} must be positive")));
    }
    let c = table.as_slice();
    let mut violations = Vec::new();
    for n in 1..c.len() {
        for m in n..c.len() - n {
            if c[n + m] > &c[n] * &c[m] {
                violations.push((n, m));
            }
        }
    }
    let lm = mu_ref.ln();
    let mut min_ratio = f64::INFINITY;
    let mut diagnostic = Vec::new();
    for (n, count) in table.iter().skip(1) {
        let excess = ln_big(count) - n as f64 * lm;
        min_ratio = min_ratio.min(excess.exp());
        diagnostic.push((n, excess / (n as f64).sqrt()));
    }
    Ok(BoundsReport {
        submultiplicativity_violations: violations,
        min_lower_bound_ratio: min_ratio,
        upper_bound_diagnostic: diagnostic,
    })
}

/// Growth of corner-to-corner crossings, `total(L)^{1/L^2}`, extrapolated by a
/// fit through the three largest squares.
pub fn estimate_lambda(totals: &BTreeMap<u32, BigUint>) -> Result<GrowthEstimate> {
    let contiguous = (1..=4).all(|l| totals.contains_key(&l));
    if !contiguous {
        return Err(Error::InsufficientData {
            required: 4,
            available: totals.keys().take_while(|&&l| totals.contains_key(&l)).count(),
        });
    }
    let points: Vec<(usize, f64)> = totals
        .iter()
        .map(|(&l, t)| (l as usize, (ln_big(t) / f64::from(l * l)).exp()))
        .collect();
    let fit: Vec<(f64, f64)> = totals
        .iter()
        .rev()
        .take(3)
        .map(|(&l, t)| (f64::from(l), ln_big(t)))
        .collect();
    let log_lambda = quadratic_leading_coefficient(&fit);
    Ok(GrowthEstimate {
        point_estimates: points,
        extrapolated: log_lambda.exp(),
        method: GrowthMethod::QuadraticFit,
    })
}

/// Leading coefficient of the parabola through three points.
fn quadratic_leading_coefficient(points: &[(f64, f64)]) -> f64 {
    let [(x0, y0), (x1, y1), (x2, y2)] = [points[0], points[1], points[2]];
    let d01 = (y1 - y0) / (x1 - x0);
    let d12 = (y2 - y1) / (x2 - x1);
    (d12 - d01) / (x2 - x0)
}

/// Average length `sum n c_n x^n / sum c_n x^n` of weighted crossings.
pub fn mean_crossing_length(table: &CountTable, x: f64) -> Result<f64> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::Domain(format!("step weight {x} must be positive")));
    }
    let lx = x.ln();
    let terms: Vec<(f64, f64)> = table
        .iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(n, c)| (ln_big(c) + n as f64 * lx, n as f64))
        .collect();
    if terms.is_empty() {
        return Err(Error::Domain("empty crossing table".into()));
    }
    let weighted = LogSum::from_log_terms(&terms);
    let plain = LogSum::from_log_terms(&terms.iter().map(|&(l, _)| (l, 1.0)).collect::<Vec<_>>());
    Ok(weighted.mantissa / plain.mantissa)
}

/// `kappa_m(q) = (1/m) ln sum_n p_{m,n} q^n` on a grid of `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct FreeEnergyCurve {
    pub perimeter: usize,
    pub points: Vec<(f64, f64)>,
}

impl FreeEnergyCurve {
    /// Discrete convexity in `ln q`: successive chord slopes never decrease
    /// by more than `tol`.
    pub fn is_log_convex(&self, tol: f64) -> bool {
        is_convex(
            &self.points.iter().map(|&(q, k)| (q.ln(), k)).collect::<Vec<_>>(),
            tol,
        )
    }
}

/// Chord-slope convexity test on points sorted by abscissa.
pub fn is_convex(points: &[(f64, f64)], tol: f64) -> bool {
    let slopes: Vec<f64> = points
        .windows(2)
        .map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0))
        .collect();
    slopes.windows(2).all(|s| s[1] >= s[0] - tol)
}

pub fn free_energy_curve(table: &JointCountTable, m: usize, q_grid: &[f64]) -> Result<FreeEnergyCurve> {
    let row = table.row(m as i64);
    if row.is_empty() {
        return Err(Error::AbsentPerimeter(m));
    }
    let coeffs: Vec<(i64, &BigUint)> = row.iter().map(|(&n, c)| (n, c)).collect();
    let points = q_grid
        .iter()
        .map(|&q| {
            if q <= 0.0 || q > 1.0 {
                Err(Error::Domain(format!("q = {q} outside (0, 1]")))
            } else {
                Ok((q, ln_poly(&coeffs, q) / m as f64))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FreeEnergyCurve { perimeter: m, points })
}

/// Growth of polygon counts by area, `a_n / a_{n-1}`.
pub fn estimate_area_growth(area_table: &CountTable) -> Result<GrowthEstimate> {
    require(area_table, 8)?;
    let r: Vec<(usize, f64)> = ratios(area_table)
        .into_iter()
        .filter(|&(n, _)| n >= 2)
        .collect();
    let accelerated = aitken(&r.iter().map(|p| p.1).collect::<Vec<_>>());
    let extrapolated = accelerated.last().copied().unwrap_or(f64::NAN);
    Ok(GrowthEstimate {
        point_estimates: r,
        extrapolated,
        method: GrowthMethod::AitkenRatio,
    })
}
