mod common;

use num_bigint::BigUint;
use num_traits::Zero;

use sawlab::enumerate::{
    count_crossing, count_half_plane, count_interacting_pulled, count_saws, SearchPlan, SymmetryMode,
};
use sawlab::lattice::Domain;

#[test]
fn crossing_parity() {
    for side in 1..=5u32 {
        let t = count_crossing(side, &SearchPlan::default()).unwrap();
        for (n, c) in t.iter() {
            if n % 2 != 0 {
                assert!(c.is_zero(), "c_{n}({side})");
            }
        }
    }
}

#[test]
fn interacting_and_half_plane_share_a_walk_set() {
    let census = count_interacting_pulled(12, &SearchPlan::default()).unwrap();
    let half = count_half_plane(12, &SearchPlan::default()).unwrap();
    for n in 1..=12usize {
        let by_contacts = census.table(n).unwrap().total();
        let by_visits: BigUint = half.row(n as i64).values().sum();
        assert_eq!(by_contacts, by_visits, "N = {n}");
    }
}

#[test]
fn half_plane_matches_brute_force() {
    let oracle = common::half_plane(9);
    let table = count_half_plane(9, &SearchPlan::default()).unwrap();
    for (&(n, i), &c) in &oracle {
        assert_eq!(table.get(n as i64, i as i64), BigUint::from(c), "({n}, {i})");
    }
    assert_eq!(table.total(), BigUint::from(oracle.values().sum::<u64>()));
}

#[test]
fn counts_do_not_depend_on_the_plan() {
    let reference = count_saws(14, &Domain::FullPlane, &SearchPlan::serial()).unwrap();
    for workers in [1, 4] {
        for symmetry in [SymmetryMode::None, SymmetryMode::Octant] {
            let plan = SearchPlan::default().with_workers(workers).with_symmetry(symmetry);
            assert_eq!(count_saws(14, &Domain::FullPlane, &plan).unwrap(), reference);
        }
    }
}

#[test]
fn sub_multiplicativity_to_eighteen() {
    let t = count_saws(18, &Domain::FullPlane, &SearchPlan::default()).unwrap();
    let c = t.as_slice();
    for n in 0..=18 {
        for m in 0..=18 - n {
            assert!(c[n + m] <= &c[n] * &c[m], "c_{} > c_{n} c_{m}", n + m);
        }
    }
}
