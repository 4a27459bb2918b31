//! One function per subcommand, each returning a results payload and the
//! reference comparisons that apply to it.

use std::collections::BTreeMap;

use num_bigint::BigUint;

use sawlab::enumerate::{
    count_crossing, count_half_plane, count_interacting_pulled, count_polygons, count_saws, CountTable, SearchPlan,
    MAX_CROSSING_SIDE,
};
use sawlab::golden::{self, Golden};
use sawlab::hitting::{
    alpha_from_r, asymptotic_prefactor, asymptotic_ratio, hitting_ratio, refined_ratio, trefethen_pe, trefethen_pe_in,
    Extended, Quadrature, Real,
};
use sawlab::honeycomb::{
    adsorption_identity_residual, build_trapezoid, census, critical_x, domain_identity_residual, observable,
    wall_coefficient, CRITICAL_ALPHA, CRITICAL_Y,
};
use sawlab::lattice::Domain;
use sawlab::series::{
    estimate_lambda, estimate_mu, free_energy_curve, mean_crossing_length, validate_series_bounds,
};
use sawlab::thermo::{adsorption_growth, fluctuation_scan, ln_adsorption_partition};
use sawlab::pivot::estimate_nu;

use crate::config::{Command, PrecisionMode, Region, RunConfig};
use crate::report::{Cell, GoldenCheck, Results, ResultsBuilder};
use crate::CliError;

pub struct Outcome {
    pub results: Results,
    pub checks: Vec<GoldenCheck>,
}

fn non_negative(flag: &str, value: i64) -> Result<usize, CliError> {
    usize::try_from(value).map_err(|_| CliError::Validation(format!("--{flag} must be non-negative, got {value}")))
}

fn at_least(flag: &str, value: i64, min: i64) -> Result<usize, CliError> {
    if value < min {
        return Err(CliError::Validation(format!("--{flag} must be at least {min}, got {value}")));
    }
    Ok(value as usize)
}

fn positive(flag: &str, value: f64) -> Result<f64, CliError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(CliError::Validation(format!("--{flag} must be positive and finite, got {value}")))
    }
}

fn check(golden: &Golden, computed: f64) -> GoldenCheck {
    GoldenCheck::new(golden, computed)
}

fn to_f64(value: &BigUint) -> f64 {
    value.to_string().parse().unwrap_or(f64::INFINITY)
}

fn counts_column(table: &CountTable) -> Vec<Cell> {
    table.as_slice().iter().map(Cell::big).collect()
}

pub fn run(config: &RunConfig) -> Result<Outcome, CliError> {
    let plan = SearchPlan::default()
        .with_workers(config.workers)
        .with_ceiling(config.common.max_nodes);
    let mut out = ResultsBuilder::default();
    let mut checks = Vec::new();

    match &config.command {
        Command::Count { n_max, region } => {
            let n = non_negative("n-max", *n_max)?;
            let domain = match region {
                Region::Full => Domain::FullPlane,
                Region::Half => Domain::HalfPlane,
            };
            let table = count_saws(n, &domain, &plan)?;
            out.column("n", 0..=n).column("c", counts_column(&table));
            if n >= 4 && *region == Region::Full {
                checks.push(check(&golden::SAW_C4, to_f64(&table.as_slice()[4])));
            }
        }
        Command::Polygons { m_max } => {
            let m = at_least("m-max", *m_max, 4)?;
            let table = count_polygons(m, &plan)?;
            let (mut per, mut area, mut count) = (Vec::new(), Vec::new(), Vec::new());
            for (p, a, c) in table.iter() {
                per.push(p);
                area.push(a);
                count.push(Cell::big(c));
            }
            let marginal = table.first_marginal();
            let p: Vec<Cell> = (0..=m as i64)
                .map(|k| Cell::big(&marginal.get(&k).cloned().unwrap_or_default()))
                .collect();
            out.column("perimeter", per)
                .column("area", area)
                .column("count", count)
                .column("p", p);
            if m >= 8 {
                checks.push(check(&golden::POLYGON_P8, to_f64(&marginal[&8])));
                checks.push(check(&golden::POLYGON_P8_AREA3, to_f64(&table.get(8, 3))));
            }
        }
        Command::Halfplane { n_max } => {
            let n = non_negative("n-max", *n_max)?;
            let table = count_half_plane(n, &plan)?;
            let (mut len, mut contacts, mut count) = (Vec::new(), Vec::new(), Vec::new());
            for (l, k, c) in table.iter() {
                len.push(l);
                contacts.push(k);
                count.push(Cell::big(c));
            }
            let totals: Vec<Cell> = table.first_marginal().values().map(Cell::big).collect();
            out.column("length", len)
                .column("surface_contacts", contacts)
                .column("count", count)
                .column("c_plus", totals);
        }
        Command::Crossing { side } => {
            let l = at_least("l", *side, 1)?;
            if l > MAX_CROSSING_SIDE as usize {
                return Err(CliError::Validation(format!("--l must be at most {MAX_CROSSING_SIDE}")));
            }
            let mut totals = Vec::new();
            let mut last = CountTable::default();
            for s in 1..=l as u32 {
                last = count_crossing(s, &plan)?;
                totals.push(Cell::big(&last.total()));
            }
            out.column("side", 1..=l)
                .column("total", totals)
                .column("length", 0..last.len())
                .column("count", counts_column(&last));
        }
        Command::Interacting { n_max } => {
            let n = at_least("n-max", *n_max, 1)?;
            let census = count_interacting_pulled(n, &plan)?;
            let table = census.table(n)?;
            let (mut m, mut x, mut count) = (Vec::new(), Vec::new(), Vec::new());
            for (a, b, c) in table.iter() {
                m.push(a);
                x.push(b);
                count.push(Cell::big(c));
            }
            out.scalar("length", n)
                .column("contacts", m)
                .column("displacement", x)
                .column("count", count);
        }
        Command::Mu { n_max } => {
            let n = at_least("n-max", *n_max, 10)?;
            let table = count_saws(n, &Domain::FullPlane, &plan)?;
            let est = estimate_mu(&table)?;
            let bounds = validate_series_bounds(&table, golden::SAW_MU.value)?;
            out.column("n", est.point_estimates.iter().map(|p| p.0))
                .column("estimate", est.point_estimates.iter().map(|p| p.1))
                .scalar("mu", est.extrapolated)
                .scalar("method", format!("{:?}", est.method))
                .scalar("submultiplicativity_violations", bounds.submultiplicativity_violations.len())
                .scalar("min_lower_bound_ratio", bounds.min_lower_bound_ratio)
                .column("c", counts_column(&table));
            checks.push(check(&golden::SAW_MU, est.extrapolated));
        }
        Command::Lambda { side } => {
            let l = at_least("l", *side, 4)?;
            if l > MAX_CROSSING_SIDE as usize {
                return Err(CliError::Validation(format!("--l must be at most {MAX_CROSSING_SIDE}")));
            }
            let mut totals = BTreeMap::new();
            for s in 1..=l as u32 {
                totals.insert(s, count_crossing(s, &plan)?.total());
            }
            let est = estimate_lambda(&totals)?;
            out.column("side", est.point_estimates.iter().map(|p| p.0))
                .column("estimate", est.point_estimates.iter().map(|p| p.1))
                .scalar("lambda", est.extrapolated)
                .column("total", totals.values().map(Cell::big).collect::<Vec<_>>());
            checks.push(check(&golden::CROSSING_LAMBDA, est.extrapolated));
            // mean length at tiny x is the shortest crossing, 2L
            let table = count_crossing(l as u32, &plan)?;
            out.scalar("mean_length_small_x", mean_crossing_length(&table, 1e-6)?);
        }
        Command::Kappa { m_max, q_grid } => {
            let m = at_least("m-max", *m_max, 4)?;
            if m % 2 == 1 {
                return Err(CliError::Validation("--m-max must be even".into()));
            }
            let q: Vec<f64> = q_grid.points();
            if q.iter().any(|&v| v <= 0.0 || v > 1.0 + 1e-12) {
                return Err(CliError::Validation("--q-grid must lie in (0, 1]".into()));
            }
            let q: Vec<f64> = q.into_iter().map(|v| v.min(1.0)).collect();
            let table = count_polygons(m, &plan)?;
            let curve = free_energy_curve(&table, m, &q)?;
            out.scalar("perimeter", m)
                .column("q", curve.points.iter().map(|p| p.0))
                .column("kappa", curve.points.iter().map(|p| p.1))
                .scalar("log_convex", curve.is_log_convex(1e-10));
        }
        Command::HoneycombLocal { width, height, x, alpha } => {
            let domain = build_trapezoid(*width, *height, false)?;
            let x = positive("x", x.unwrap_or_else(critical_x))?;
            let alpha = alpha.unwrap_or(CRITICAL_ALPHA);
            let table = observable(&domain, x, alpha, 1.0, &plan)?;
            let mut vertex = Vec::new();
            let mut residual = Vec::new();
            for v in 0..domain.vertices().len() {
                if let Ok(r) = table.local_residual(v) {
                    vertex.push(v);
                    residual.push(r.norm());
                }
            }
            out.scalar("x", x)
                .scalar("alpha", alpha)
                .scalar("max_residual", table.max_local_residual())
                .column("vertex", vertex)
                .column("residual", residual);
        }
        Command::HoneycombDomain { width, height, x } => {
            let domain = build_trapezoid(*width, *height, false)?;
            let x = positive("x", x.unwrap_or_else(critical_x))?;
            let sums = census(&domain, &plan)?.boundary_sums(&domain, x, 1.0);
            out.scalar("x", x)
                .scalar("left", sums.left)
                .scalar("right", sums.right)
                .scalar("top_bottom", sums.top_bottom)
                .scalar("residual", domain_identity_residual(&domain, x, &plan)?);
        }
        Command::HoneycombAdsorb { width, height, y } => {
            let domain = build_trapezoid(*width, *height, true)?;
            let y = positive("y", y.unwrap_or(CRITICAL_Y))?;
            let x = critical_x();
            let sums = census(&domain, &plan)?.boundary_sums(&domain, x, y);
            out.scalar("y", y)
                .scalar("left", sums.left)
                .scalar("wall", sums.right)
                .scalar("top_bottom", sums.top_bottom)
                .scalar("wall_coefficient", wall_coefficient(y))
                .scalar("residual", adsorption_identity_residual(&domain, x, y, &plan)?);
        }
        Command::Hit { r, b } => {
            let params = alpha_from_r(*r)?.with_b(*b)?;
            let quad = match config.common.precision {
                PrecisionMode::Double => Quadrature::default(),
                PrecisionMode::Extended => Quadrature::extended(),
            };
            let (ratio, method) = if *b == 1.0 {
                (params.brownian_ratio(), "closed_form")
            } else {
                (hitting_ratio(&params, &quad)?, "quadrature")
            };
            out.scalar("r", *r)
                .scalar("b", *b)
                .scalar("alpha", params.alpha)
                .scalar("alpha_minus_one", params.alpha_minus_one)
                .scalar("ratio", ratio)
                .scalar("method", method.to_string())
                .scalar("brownian_ratio", params.brownian_ratio());
            if *r == 10.0 {
                checks.push(check(&golden::ALPHA_R10, params.alpha));
                if *b == 1.0 {
                    checks.push(check(&golden::BROWNIAN_R10, ratio));
                } else if *b == 0.625 {
                    checks.push(check(&golden::SAW_RATIO_R10, ratio));
                }
            }
        }
        Command::HitAsymptotic { r, b } => {
            let asym = asymptotic_ratio(*r, *b)?;
            out.scalar("r", *r)
                .scalar("b", *b)
                .scalar("prefactor", asymptotic_prefactor(*b))
                .scalar("asymptotic", asym);
            let refined = if *b < 1.0 { Some(refined_ratio(*r, *b)?) } else { None };
            if let Some(v) = refined {
                out.scalar("refined", v);
            }
            if *b == 0.625 {
                checks.push(check(&golden::ASYMPTOTIC_PREFACTOR, asymptotic_prefactor(*b)));
                if *r == 10.0 {
                    checks.push(check(&golden::ASYMPTOTIC_R10, asym));
                    if let Some(v) = refined {
                        checks.push(check(&golden::REFINED_R10, v));
                    }
                }
            }
        }
        Command::Trefethen => {
            let pe = trefethen_pe();
            let wide: Extended = trefethen_pe_in();
            let ratio = wide.clone() / (Extended::one() - wide.clone());
            out.scalar("pe", pe)
                .scalar("ratio", ratio.to_f64())
                .scalar("pe_digits", wide.to_decimal())
                .scalar("ratio_digits", ratio.to_decimal());
            checks.push(check(&golden::TREFETHEN_PE, pe));
            checks.push(check(&golden::TREFETHEN_RATIO, ratio.to_f64()));
        }
        Command::PullScan { n_max, force, temp_grid, smooth } => {
            let n = at_least("n-max", *n_max, 1)?;
            let census = count_interacting_pulled(n, &plan)?;
            let curve = fluctuation_scan(&census, n, *force, &temp_grid.points(), *smooth)?;
            let obs = |f: fn(&sawlab::thermo::Observables) -> f64| -> Vec<f64> {
                curve.points.iter().map(|p| f(&p.observables)).collect()
            };
            out.scalar("length", n)
                .scalar("force", *force)
                .column("temperature", curve.points.iter().map(|p| p.control))
                .column("ln_z", curve.points.iter().map(|p| p.ln_z))
                .column("mean_contacts", obs(|o| o.mean_contacts))
                .column("fluctuation", obs(|o| o.fluctuation))
                .column("mean_x", obs(|o| o.mean_x))
                .column("free_energy", obs(|o| o.free_energy))
                .column("peak_temperature", curve.peak_temperatures());
        }
        Command::Adsorb { n_max, y } => {
            let n = at_least("n-max", *n_max, 12)?;
            for &v in y {
                positive("y", v)?;
            }
            let table = count_half_plane(n, &plan)?;
            let est = adsorption_growth(&table, y)?;
            let ln_z = y
                .iter()
                .map(|&v| ln_adsorption_partition(&table, n, v))
                .collect::<Result<Vec<_>, _>>()?;
            out.scalar("length", n)
                .column("y", y.iter().copied())
                .column("growth", est.iter().map(|e| e.extrapolated))
                .column("ln_partition", ln_z);
        }
        Command::PivotNu { n_values, samples } => {
            let est = estimate_nu(n_values, *samples, config.common.seed)?;
            out.column("n", est.points.iter().map(|p| p.n))
                .column("mean_sq", est.points.iter().map(|p| p.mean_sq))
                .column("std_err", est.points.iter().map(|p| p.std_err))
                .column("acceptance", est.points.iter().map(|p| p.acceptance))
                .column("residual", est.residuals.iter().copied())
                .scalar("nu", est.nu)
                .scalar("nu_err", est.nu_err);
            checks.push(check(&golden::NU, est.nu));
        }
    }

    Ok(Outcome {
        results: out.finish(),
        checks,
    })
}
