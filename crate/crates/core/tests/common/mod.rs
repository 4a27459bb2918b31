//! Independent brute-force oracles: plain depth-first search over walks with
//! a visited list, no symmetry, no shared engine code.

#![allow(dead_code)]

use std::collections::BTreeMap;

use sawlab::lattice::{Point, SquareStep};

/// Calls `visit` on every walk from the origin of length `<= max_len` whose
/// vertices all satisfy `allowed`.
pub fn walks(max_len: usize, allowed: &dyn Fn(Point) -> bool, visit: &mut dyn FnMut(&[Point])) {
    fn go(path: &mut Vec<Point>, max_len: usize, allowed: &dyn Fn(Point) -> bool, visit: &mut dyn FnMut(&[Point])) {
        visit(path);
        if path.len() - 1 == max_len {
            return;
        }
        let end = *path.last().unwrap();
        for s in SquareStep::ALL {
            let next = end.step(s);
            if allowed(next) && !path.contains(&next) {
                path.push(next);
                go(path, max_len, allowed, visit);
                path.pop();
            }
        }
    }
    go(&mut vec![Point::ORIGIN], max_len, allowed, visit);
}

pub fn saw_counts(max_len: usize) -> Vec<u64> {
    let mut c = vec![0; max_len + 1];
    walks(max_len, &|_| true, &mut |p| c[p.len() - 1] += 1);
    c
}

/// `p_m` from rooted closable walks: each polygon of perimeter `m` arises
/// from `2m` walks of length `m - 1` ending next to the origin.
pub fn polygon_counts(m_max: usize) -> Vec<u64> {
    let mut closable = vec![0u64; m_max + 1];
    walks(m_max - 1, &|_| true, &mut |p| {
        let n = p.len() - 1;
        if n >= 3 && p[n].is_adjacent(Point::ORIGIN) {
            closable[n + 1] += 1;
        }
    });
    closable.iter().enumerate().map(|(m, &c)| if m == 0 { 0 } else { c / (2 * m as u64) }).collect()
}

/// Half-plane walks keyed by (length, surface vertices other than the origin).
pub fn half_plane(max_len: usize) -> BTreeMap<(usize, usize), u64> {
    let mut out = BTreeMap::new();
    walks(max_len, &|p| p.y >= 0, &mut |p| {
        let visits = p[1..].iter().filter(|v| v.y == 0).count();
        *out.entry((p.len() - 1, visits)).or_default() += 1;
    });
    out
}

/// Non-consecutive nearest-neighbour pairs.
pub fn contacts(p: &[Point]) -> i64 {
    let mut m = 0;
    for i in 0..p.len() {
        for j in i + 2..p.len() {
            m += i64::from(p[i].is_adjacent(p[j]));
        }
    }
    m
}

/// `sum_w omega^m(w) u^x(w)` over half-plane walks of exactly `n` steps.
pub fn pulled_partition(n: usize, omega: f64, u: f64) -> f64 {
    let mut z = 0.0;
    walks(n, &|p| p.y >= 0, &mut |p| {
        if p.len() - 1 == n {
            z += omega.powi(contacts(p) as i32) * u.powi(p[n].x);
        }
    });
    z
}

pub fn crossing_total(side: i32) -> u64 {
    let target = Point::new(side, side);
    let mut total = 0;
    let max = ((side + 1) * (side + 1)) as usize;
    walks(max, &|p| (0..=side).contains(&p.x) && (0..=side).contains(&p.y), &mut |p| {
        total += u64::from(*p.last().unwrap() == target);
    });
    total
}

/// Mean `|w_n|^2` over all `n`-step walks.
pub fn mean_square_extension(n: usize) -> f64 {
    let (mut count, mut sum) = (0u64, 0i64);
    walks(n, &|_| true, &mut |p| {
        if p.len() - 1 == n {
            count += 1;
            sum += p[n].norm_sq();
        }
    });
    sum as f64 / count as f64
}
