mod common;

use sawlab::enumerate::{end_to_end_moments, SearchPlan};
use sawlab::pivot::{fit_nu, sample_spread, Schedule, SpreadPoint};

#[test]
fn exact_means_enter_the_fit_unchanged() {
    let moments = end_to_end_moments(12, &SearchPlan::default()).unwrap();
    let points: Vec<SpreadPoint> = [3usize, 6, 9, 12]
        .iter()
        .map(|&n| SpreadPoint::exact(n, moments[n].mean()))
        .collect();
    for p in &points {
        assert!((p.mean_sq / common::mean_square_extension(p.n) - 1.0).abs() < 1e-14);
    }
    let fit = fit_nu(points.clone()).unwrap();
    assert_eq!(fit.points, points);
    for (p, r) in fit.points.iter().zip(&fit.residuals) {
        let fitted = (fit.intercept + fit.two_nu * (p.n as f64).ln()).exp();
        assert!(((p.mean_sq.ln() - fitted.ln()) - r).abs() < 1e-12);
    }
    // short walks are stiffer than the asymptotic 3/4
    assert!(fit.nu > 0.7 && fit.nu < 0.85, "{}", fit.nu);
}

#[test]
fn chain_from_a_rod_matches_exhaustive_average() {
    let exact = end_to_end_moments(10, &SearchPlan::default()).unwrap()[10].mean();
    let mc = sample_spread(10, &Schedule::standard(10, 20_000), 99, 5).unwrap();
    assert!(mc.std_err > 0.0);
    assert!(((mc.mean_sq - exact) / mc.std_err).abs() < 3.0, "{} vs {exact}", mc.mean_sq);
}
