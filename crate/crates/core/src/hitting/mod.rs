//! First-exit statistics from the centre of an `r x 1` rectangle: the ratio
//! of the probability of leaving through a short end to that of leaving
//! through a long side, for boundary densities with exponent `b`
//! (`b = 1` is Brownian motion, `b = 5/8` the self-avoiding walk limit).
//!
//! The rectangle is the image of the upper half-plane under a
//! Schwarz-Christoffel map with prevertices `+-1, +-alpha`. For `r > 1`,
//! `alpha - 1` is exponentially small, so every formula here carries
//! `alpha - 1` as its own quantity instead of forming it by subtraction.

pub mod quadrature;
pub mod real;
pub mod special;

use std::f64::consts::PI;

use statrs::function::gamma::gamma;

pub use quadrature::{Precision, Quadrature, QuadratureResult};
pub use real::{Extended, Real};
pub use special::{elliptic_k, jacobi_theta};

use crate::error::{Error, Result};
use special::{agm, theta3, theta3_minus_theta4, theta4};

/// Shape and exponent of a hitting problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HittingParams {
    /// Aspect ratio, long side over short side.
    pub r: f64,
    /// Boundary density exponent.
    pub b: f64,
    pub alpha: f64,
    /// `alpha - 1` to full relative precision.
    pub alpha_minus_one: f64,
    /// `sqrt(alpha)`, the height of the preimage of the centre.
    pub d: f64,
}

fn check_b(b: f64) -> Result<()> {
    if b > 0.25 && b <= 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("exponent b = {b} outside (1/4, 1]")))
    }
}

impl HittingParams {
    /// Parameters for a given prevertex `alpha`; `alpha - 1` is formed by
    /// subtraction, which is exact but inherits the rounding of `alpha`.
    pub fn from_alpha(alpha: f64, b: f64) -> Result<HittingParams> {
        if alpha.is_nan() || alpha <= 1.0 {
            return Err(Error::Domain(format!("alpha = {alpha} must exceed 1")));
        }
        check_b(b)?;
        Ok(HittingParams {
            r: aspect_from_alpha(alpha)?,
            b,
            alpha,
            alpha_minus_one: alpha - 1.0,
            d: alpha.sqrt(),
        })
    }

    pub fn with_b(self, b: f64) -> Result<HittingParams> {
        check_b(b)?;
        Ok(HittingParams { b, ..self })
    }

    /// Aspect ratio implied by the stored `alpha` and `alpha - 1`.
    pub fn aspect_ratio(&self) -> f64 {
        aspect_from_alpha_split(self.alpha, self.alpha_minus_one)
    }

    /// Closed-form Brownian ratio using the stored `alpha - 1`.
    pub fn brownian_ratio(&self) -> f64 {
        brownian_ratio_split(&self.alpha, &self.alpha_minus_one)
    }
}

/// `(alpha, alpha - 1)` for aspect ratio `r`, from theta constants in the
/// conjugate nome `q' = e^{-pi r / 2}`:
/// `sqrt(alpha) = theta_3(q') / theta_4(q')`.
pub fn alpha_pair<R: Real>(r: f64) -> (R, R) {
    let q = (R::pi() * R::from_f64(-r / 2.0)).exp();
    let t3 = theta3(&q);
    let t4 = theta4(&q);
    let gap = theta3_minus_theta4(&q);
    let minus_one = gap * (t3.clone() + t4.clone()) / (t4.clone() * t4.clone());
    let ratio = t3 / t4;
    (ratio.clone() * ratio, minus_one)
}

pub fn alpha_from_r(r: f64) -> Result<HittingParams> {
    if r.is_nan() || r <= 1.0 {
        return Err(Error::Domain(format!("aspect ratio {r} must exceed 1")));
    }
    let (alpha, alpha_minus_one) = alpha_pair::<f64>(r);
    if r >= 6.0 {
        // the inversion series is accurate to O(e^{-3 pi r / 2}) here
        let series = alpha_series_minus_one(r);
        let q = (-PI * r / 2.0).exp();
        debug_assert!((series - alpha_minus_one).abs() <= 100.0 * q.powi(3) + 1e-14 * alpha_minus_one);
    }
    Ok(HittingParams {
        r,
        b: 1.0,
        alpha,
        alpha_minus_one,
        d: alpha.sqrt(),
    })
}

/// `8 e^{-pi r/2} + 32 e^{-pi r}`, the leading terms of `alpha - 1`.
pub fn alpha_series_minus_one(r: f64) -> f64 {
    let q = (-PI * r / 2.0).exp();
    8.0 * q + 32.0 * q * q
}

/// Direct-nome route `sqrt(alpha) = theta_3(q) / theta_2(q)` with
/// `q = e^{-2 pi / r}`; loses `alpha - 1` to cancellation for large `r`.
pub fn alpha_direct(r: f64) -> Result<f64> {
    let q = (-2.0 * PI / r).exp();
    let ratio = jacobi_theta(3, q)? / jacobi_theta(2, q)?;
    Ok(ratio * ratio)
}

/// `r = 2 K(1/alpha) / K(sqrt(alpha^2 - 1) / alpha)`.
pub fn aspect_from_alpha(alpha: f64) -> Result<f64> {
    if alpha.is_nan() || alpha <= 1.0 {
        return Err(Error::Domain(format!("alpha = {alpha} must exceed 1")));
    }
    Ok(aspect_from_alpha_split(alpha, alpha - 1.0))
}

/// [`aspect_from_alpha`] with `alpha - 1` supplied separately.
pub fn aspect_from_alpha_split(alpha: f64, alpha_minus_one: f64) -> f64 {
    let k = 1.0 / alpha;
    let k_prime = (alpha_minus_one * (alpha + 1.0)).sqrt() / alpha;
    // K(k) / K(k') = agm(1, k) / agm(1, k')
    2.0 * agm(1.0, k) / agm(1.0, k_prime)
}

/// Ratio for `b = 1` in closed form:
/// `(atan sqrt(alpha) - atan(1/sqrt(alpha))) / (2 atan(1/sqrt(alpha)))`.
pub fn brownian_ratio(alpha: f64) -> Result<f64> {
    if alpha.is_nan() || alpha <= 1.0 {
        return Err(Error::Domain(format!("alpha = {alpha} must exceed 1")));
    }
    Ok(brownian_ratio_split(&alpha, &(alpha - 1.0)))
}

/// Closed form with `alpha - 1` supplied; the numerator difference of
/// arctangents is rewritten as `atan((alpha - 1) / (2 sqrt alpha))`.
pub fn brownian_ratio_split<R: Real>(alpha: &R, alpha_minus_one: &R) -> R {
    let root = alpha.sqrt();
    let num = (alpha_minus_one.clone() / (root.clone() * R::from_f64(2.0))).atan();
    let den = (R::one() / root).atan() * R::from_f64(2.0);
    num / den
}

/// Numerator and denominator integrals of the hitting ratio, with the
/// `(alpha - 1)^b` factor of the numerator kept separate.
#[derive(Debug, Clone, PartialEq)]
pub struct HittingIntegrals<R> {
    pub scaled_numerator: QuadratureResult<R>,
    pub denominator: QuadratureResult<R>,
    pub ratio: R,
}

/// Evaluates both integrals in arithmetic `R` for given `alpha`, `alpha - 1`.
///
/// Numerator: `int_1^alpha (u^2+alpha)^-b (u^2-1)^c (alpha^2-u^2)^c du` with
/// `c = (b-1)/2`, under `u = 1 + t (alpha - 1)` it equals
/// `(alpha-1)^b int_0^1 (u^2+alpha)^-b [t (u+1)]^c [(1-t)(alpha+u)]^c dt`.
/// Denominator: twice the same integrand over `u in [0, 1]`, with
/// `alpha - u = (alpha - 1) + (1 - u)`.
pub fn hitting_integrals<R: Real>(alpha: &R, alpha_minus_one: &R, b: f64, quad: &Quadrature) -> Result<HittingIntegrals<R>> {
    let neg_b = R::from_f64(-b);
    let c = R::from_f64((b - 1.0) / 2.0);
    let eps = alpha_minus_one.clone();
    let scaled_numerator = quad.integrate(|t: &R, tc: &R| {
        let u = R::one() + t.clone() * eps.clone();
        let lead = (u.clone() * u.clone() + alpha.clone()).pow(&neg_b);
        let left = (t.clone() * (u.clone() + R::one())).pow(&c);
        let right = (tc.clone() * (alpha.clone() + u)).pow(&c);
        lead * left * right
    })?;
    let denominator = quad.integrate(|u: &R, uc: &R| {
        let lead = (u.clone() * u.clone() + alpha.clone()).pow(&neg_b);
        let inner = (uc.clone() * (R::one() + u.clone())).pow(&c);
        let outer = ((eps.clone() + uc.clone()) * (alpha.clone() + u.clone())).pow(&c);
        lead * inner * outer * R::from_f64(2.0)
    })?;
    let ratio = eps.pow(&R::from_f64(b)) * scaled_numerator.value.clone() / denominator.value.clone();
    Ok(HittingIntegrals {
        scaled_numerator,
        denominator,
        ratio,
    })
}

/// End-to-side hitting ratio by quadrature, in the arithmetic selected by
/// `quad.precision`.
pub fn hitting_ratio(params: &HittingParams, quad: &Quadrature) -> Result<f64> {
    check_b(params.b)?;
    if params.alpha_minus_one.is_nan() || params.alpha_minus_one <= 0.0 {
        return Err(Error::Domain(format!("alpha - 1 = {} must be positive", params.alpha_minus_one)));
    }
    match quad.precision {
        Precision::Double => {
            Ok(hitting_integrals(&params.alpha, &params.alpha_minus_one, params.b, quad)?.ratio)
        }
        Precision::Extended => {
            let (alpha, alpha_minus_one) = alpha_pair::<Extended>(params.r);
            Ok(hitting_integrals(&alpha, &alpha_minus_one, params.b, quad)?.ratio.to_f64())
        }
    }
}

/// `2^{2b} Gamma(1/2 + b/2)^2 / (Gamma(1 + b/2) Gamma(b/2))`.
pub fn asymptotic_prefactor(b: f64) -> f64 {
    4f64.powf(b) * gamma(0.5 + b / 2.0).powi(2) / (gamma(1.0 + b / 2.0) * gamma(b / 2.0))
}

fn check_large_r(r: f64) -> Result<()> {
    if r >= 4.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("aspect ratio {r} below 4 is outside the asymptotic regime")))
    }
}

/// Leading large-`r` behaviour, `prefactor(b) e^{-pi b r / 2}`.
pub fn asymptotic_ratio(r: f64, b: f64) -> Result<f64> {
    check_large_r(r)?;
    if !(b > 0.0 && b <= 1.0) {
        return Err(Error::Domain(format!("exponent b = {b} outside (0, 1]")));
    }
    Ok(asymptotic_prefactor(b) * (-PI * b * r / 2.0).exp())
}

/// `(Gamma((1 + b)/2) / Gamma(b/2))^2`.
fn lambda(b: f64) -> f64 {
    (gamma((1.0 + b) / 2.0) / gamma(b / 2.0)).powi(2)
}

/// Two-term refinement of [`asymptotic_ratio`] for `0 < b < 1`.
pub fn refined_ratio(r: f64, b: f64) -> Result<f64> {
    check_large_r(r)?;
    if !(b > 0.0 && b < 1.0) {
        return Err(Error::Domain(format!("exponent b = {b} outside (0, 1)")));
    }
    let l = lambda(b);
    let decay = (-b * PI * r / 2.0).exp();
    let lead = 2f64.powf(2.0 * b + 1.0) * l / b;
    let second = l * 2f64.powf(2.0 * b + 1.0) / (b * (PI * b / 2.0).sin());
    let third = 4.0 * (b - 1.0 + 2.0 * l);
    Ok(lead * decay * (1.0 + second * decay + third * (-PI * r / 2.0).exp()))
}

/// Exit probability through the ends of a `10 x 1` rectangle from its centre,
/// `(2/pi) asin(X)` with
/// `X = (3-2 sqrt2)^2 (2+sqrt5)^2 (sqrt10-3)^2 (5^{1/4}-sqrt2)^4`.
pub fn trefethen_pe() -> f64 {
    trefethen_pe_in::<f64>()
}

/// [`trefethen_pe`] in any arithmetic. Each small factor is rewritten as a
/// reciprocal of a sum, so `X` carries no cancellation.
pub fn trefethen_pe_in<R: Real>() -> R {
    let n = |v: f64| R::from_f64(v);
    let sqrt2 = n(2.0).sqrt();
    let sqrt5 = n(5.0).sqrt();
    let sqrt10 = n(10.0).sqrt();
    let fourth5 = sqrt5.sqrt();
    let a = n(3.0) + n(2.0) * sqrt2.clone(); // 1 / (3 - 2 sqrt 2)
    let c = sqrt10 + n(3.0); // 1 / (sqrt 10 - 3)
    let g = sqrt5 + n(2.0);
    let h = fourth5 + sqrt2; // 5^{1/4} - sqrt 2 = 1 / (g h)
    let sq = |v: R| v.clone() * v;
    let x = R::one() / (sq(a) * sq(c) * sq(g) * sq(sq(h)));
    // asin x = atan(x / sqrt(1 - x^2))
    let asin = (x.clone() / (R::one() - x.clone() * x).sqrt()).atan();
    n(2.0) / R::pi() * asin
}
