//! Complete elliptic integral and Jacobi theta constants.

use super::real::Real;
use crate::error::{Error, Result};

/// Arithmetic-geometric mean of `a` and `b`.
pub fn agm<R: Real>(a: R, b: R) -> R {
    let (mut a, mut b) = (a, b);
    for _ in 0..100 {
        let next_a = (a.clone() + b.clone()) * R::from_f64(0.5);
        let next_b = (a.clone() * b).sqrt();
        let gap = (next_a.clone() - next_b.clone()).abs();
        a = next_a;
        b = next_b;
        if gap <= a.abs() * R::from_f64(4.0 * R::EPSILON) {
            break;
        }
    }
    a
}

/// `K(k) = pi / (2 agm(1, sqrt(1 - k^2)))`.
pub fn elliptic_k(k: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&k) {
        return Err(Error::Domain(format!("modulus {k} outside [0, 1)")));
    }
    Ok(elliptic_k_from_complement(((1.0 - k) * (1.0 + k)).sqrt()))
}

/// `K` given the complementary modulus `k' = sqrt(1 - k^2)`, which keeps
/// accuracy as `k -> 1`.
pub fn elliptic_k_from_complement<R: Real>(k_prime: R) -> R {
    R::pi() / (agm(R::one(), k_prime) * R::from_f64(2.0))
}

fn check_nome(q: f64) -> Result<()> {
    if q > 0.0 && q < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("nome {q} outside (0, 1)")))
    }
}

/// Sums `sum_n sign(n) q^{e(n)}` until a term drops below `R::EPSILON / 16`
/// of the running total; exponents must increase.
fn theta_series<R: Real>(q: &R, exponent: impl Fn(u64) -> f64, alternate: bool, start: u64) -> R {
    let lq = q.ln();
    let mut sum = R::zero();
    for n in start.. {
        let term = (lq.clone() * R::from_f64(exponent(n))).exp();
        let negligible = term.clone() < sum.abs() * R::from_f64(R::EPSILON / 16.0);
        sum = if alternate && n % 2 == 1 { sum - term } else { sum + term };
        if negligible || n > 100_000 {
            break;
        }
    }
    sum
}

/// `theta_2(q) = 2 sum_{n >= 0} q^{(n + 1/2)^2}`.
pub fn theta2<R: Real>(q: &R) -> R {
    theta_series(q, |n| (n as f64 + 0.5).powi(2), false, 0) * R::from_f64(2.0)
}

/// `theta_3(q) = 1 + 2 sum_{n >= 1} q^{n^2}`.
pub fn theta3<R: Real>(q: &R) -> R {
    R::one() + theta_series(q, |n| (n * n) as f64, false, 1) * R::from_f64(2.0)
}

/// `theta_4(q) = 1 + 2 sum_{n >= 1} (-1)^n q^{n^2}`.
pub fn theta4<R: Real>(q: &R) -> R {
    R::one() + theta_series(q, |n| (n * n) as f64, true, 1) * R::from_f64(2.0)
}

/// `theta_3(q) - theta_4(q) = 4 sum_{n odd} q^{n^2}`, free of cancellation.
pub fn theta3_minus_theta4<R: Real>(q: &R) -> R {
    theta_series(q, |n| ((2 * n + 1) * (2 * n + 1)) as f64, false, 0) * R::from_f64(4.0)
}

/// Theta constant by index (2, 3 or 4) in double precision.
pub fn jacobi_theta(j: u8, q: f64) -> Result<f64> {
    check_nome(q)?;
    match j {
        2 => Ok(theta2(&q)),
        3 => Ok(theta3(&q)),
        4 => Ok(theta4(&q)),
        _ => Err(Error::Domain(format!("theta index {j} not in {{2, 3, 4}}"))),
    }
}
