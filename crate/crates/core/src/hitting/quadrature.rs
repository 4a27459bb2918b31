//! Double-exponential (tanh-sinh) quadrature on `[0, 1]`.
//!
//! The integrand receives both `t` and `1 - t`, each computed without
//! cancellation, so endpoint singularities of the form `t^a (1 - t)^c` keep
//! full relative accuracy however close the nodes crowd the ends.

use std::any::{Any, TypeId};
use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use super::real::Real;
use crate::error::{Error, Result};

/// Working arithmetic for an integration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Precision {
    #[default]
    Double,
    Extended,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    /// Highest refinement level; level `k` uses step `2^-k`.
    pub max_level: usize,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub precision: Precision,
}

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature {
            max_level: 12,
            abs_tol: 0.0,
            rel_tol: 1e-13,
            precision: Precision::Double,
        }
    }
}

impl Quadrature {
    /// Extended arithmetic with a matching tolerance.
    pub fn extended() -> Self {
        Quadrature {
            rel_tol: 1e-30,
            precision: Precision::Extended,
            ..Quadrature::default()
        }
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_max_level(mut self, max_level: usize) -> Self {
        self.max_level = max_level;
        self
    }

    /// Integrates `f(t, 1 - t)` over `[0, 1]`.
    pub fn integrate<R: Real>(&self, f: impl Fn(&R, &R) -> R) -> Result<QuadratureResult<R>> {
        let mut raw = R::zero();
        let mut history: Vec<R> = Vec::new();
        let mut estimate = f64::INFINITY;
        for level in 0..=self.max_level {
            for node in nodes::<R>(level).iter() {
                raw = raw + node.weight.clone() * f(&node.t, &node.complement);
                if !node.centre {
                    raw = raw + node.weight.clone() * f(&node.complement, &node.t);
                }
            }
            let value = raw.clone() * R::from_f64(0.5f64.powi(level as i32));
            if let Some(prev) = history.last() {
                estimate = (value.clone() - prev.clone()).abs().to_f64();
            }
            history.push(value.clone());
            let scale = value.abs().to_f64();
            if level >= 3 && estimate <= self.abs_tol.max(self.rel_tol * scale) {
                return Ok(QuadratureResult {
                    value,
                    error_estimate: estimate,
                    levels: history,
                });
            }
        }
        let value = history.last().expect("at least one level").abs().to_f64();
        Err(Error::Tolerance {
            estimate: estimate / value,
            requested: self.rel_tol,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureResult<R> {
    pub value: R,
    /// Difference between the last two levels.
    pub error_estimate: f64,
    /// Value after each completed level.
    pub levels: Vec<R>,
}

#[derive(Debug, Clone)]
pub(crate) struct Node<R> {
    pub t: R,
    pub complement: R,
    pub weight: R,
    pub centre: bool,
}

/// Nodes first used at `level`: every multiple of the unit step at level 0,
/// odd multiples of `2^-level` afterwards.
fn build_level<R: Real>(level: usize) -> Vec<Node<R>> {
    let h = 0.5f64.powi(level as i32);
    let count = (R::TANH_SINH_LIMIT / h) as usize;
    let (first, stride) = if level == 0 { (0, 1) } else { (1, 2) };
    let half_pi = R::pi() * R::from_f64(0.5);
    (first..=count)
        .step_by(stride)
        .map(|j| {
            let u = R::from_f64(j as f64 * h);
            let s = half_pi.clone() * u.sinh();
            let cosh_s = s.cosh();
            // 1 - tanh s = e^-s / cosh s
            let small = (-s).exp() / (cosh_s.clone() * R::from_f64(2.0));
            let weight = half_pi.clone() * R::from_f64(0.5) * u.cosh() / (cosh_s.clone() * cosh_s);
            Node {
                complement: R::one() - small.clone(),
                t: small,
                weight,
                centre: j == 0,
            }
        })
        .collect()
}

type LevelCache = RwLock<HashMap<(TypeId, usize), Arc<dyn Any + Send + Sync>>>;

/// Node tables are shared between threads and built once per level.
fn nodes<R: Real>(level: usize) -> Arc<Vec<Node<R>>> {
    static CACHE: OnceLock<LevelCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (TypeId::of::<R>(), level);
    if let Some(hit) = cache.read().expect("node cache").get(&key) {
        return Arc::clone(hit).downcast().expect("keyed by type");
    }
    let built: Arc<Vec<Node<R>>> = Arc::new(build_level(level));
    cache
        .write()
        .expect("node cache")
        .entry(key)
        .or_insert_with(|| built.clone() as Arc<dyn Any + Send + Sync>);
    built
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hitting::real::Extended;
    use statrs::function::gamma::gamma;

    #[test]
    fn polynomial_and_smooth() {
        let q = Quadrature::default();
        let r = q.integrate(|t: &f64, _| t * t).unwrap();
        assert!((r.value - 1.0 / 3.0).abs() < 1e-15);
        let r = q.integrate(|t: &f64, _| (std::f64::consts::PI * t).sin()).unwrap();
        assert!((r.value - 2.0 / std::f64::consts::PI).abs() < 1e-14);
    }

    #[test]
    fn endpoint_singularities() {
        // Beta(a, c) with both exponents negative
        let (a, c) = (0.3, 0.6);
        let exact = gamma(a) * gamma(c) / gamma(a + c);
        let r = Quadrature::default()
            .integrate(|t: &f64, tc: &f64| t.powf(a - 1.0) * tc.powf(c - 1.0))
            .unwrap();
        assert!((r.value / exact - 1.0).abs() < 1e-12, "{} vs {exact}", r.value);
    }

    #[test]
    fn levels_are_nested_and_converge() {
        for level in 1..6 {
            let coarse: Vec<f64> = (0..level).flat_map(|k| nodes::<f64>(k).iter().map(|n| n.t).collect::<Vec<_>>()).collect();
            let fresh = nodes::<f64>(level);
            let h = 0.5f64.powi(level as i32);
            // new abscissae sit at odd multiples of the finer step, never on old ones
            assert!(fresh.iter().all(|n| !coarse.contains(&n.t)));
            assert_eq!(fresh.len(), ((f64::TANH_SINH_LIMIT / h) as usize + 1) / 2);
        }
        let r = Quadrature::default()
            .integrate(|t: &f64, tc: &f64| t.powf(-0.2) * tc.powf(-0.4))
            .unwrap();
        let errs: Vec<f64> = r.levels.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
        assert!(r.error_estimate >= errs.last().copied().unwrap() * (1.0 - 1e-12));
        // geometric at worst: each correction shrinks
        for w in errs.windows(2).skip(1) {
            assert!(w[1] <= w[0] || w[1] < 1e-15, "{errs:?}");
        }
    }

    #[test]
    fn tolerance_failure_is_reported() {
        let q = Quadrature::default().with_max_level(3).with_rel_tol(1e-15);
        let res = q.integrate(|t: &f64, _| (40.0 * t).sin());
        assert!(matches!(res, Err(Error::Tolerance { .. })));
    }

    #[test]
    fn extended_beta_integral() {
        let r = Quadrature::extended()
            .integrate(|t: &Extended, tc: &Extended| {
                t.pow(&Extended::from_f64(-0.5)) * tc.pow(&Extended::from_f64(-0.5))
            })
            .unwrap();
        assert!((r.value - Extended::pi()).abs().to_f64() < 1e-28);
    }
}
