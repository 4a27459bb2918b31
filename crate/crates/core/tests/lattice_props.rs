use proptest::prelude::*;

use sawlab::lattice::{close_polygon, Polygon, SquareStep, Walk};
use sawlab::pivot::PivotChain;

/// Boundary of a `w x h` rectangle with a notch of depth `d` cut from the top
/// edge at column `c`, traced as an open walk and then closed.
fn notched(w: usize, h: usize, c: usize, d: usize) -> Polygon {
    use SquareStep::*;
    let mut steps = vec![East; w];
    steps.extend(vec![North; h]);
    // the notch needs a column clear of both sides and must stay above the floor
    let d = if w >= 3 { d.min(h - 1) } else { 0 };
    let notch_col = if w >= 3 { 2 + c % (w - 2) } else { 0 };
    let mut top = Vec::new();
    for col in (1..=w).rev() {
        if col == notch_col && d > 0 {
            top.extend(vec![South; d]);
            top.push(West);
            top.extend(vec![North; d]);
        } else {
            top.push(West);
        }
    }
    steps.extend(top);
    steps.extend(vec![South; h - 1]);
    close_polygon(&Walk::from_steps(&steps).unwrap()).unwrap()
}

proptest! {
    #[test]
    fn canonical_form_is_translation_invariant(
        w in 1usize..8, h in 1usize..8, c in 0usize..8, d in 0usize..8,
        dx in -50i32..50, dy in -50i32..50,
    ) {
        let p = notched(w, h, c, d);
        let canon = p.canonical();
        prop_assert_eq!(canon.canonical(), canon.clone());
        prop_assert_eq!(p.translated(dx, dy).canonical(), canon);
    }

    #[test]
    fn area_is_bounded_by_perimeter(w in 1usize..8, h in 1usize..8, c in 0usize..8, d in 0usize..8) {
        let p = notched(w, h, c, d);
        let m = p.perimeter() as u64;
        prop_assert!(p.area() >= 1);
        prop_assert!(16 * p.area() <= m * m);
        prop_assert_eq!(m % 2, 0);
    }

    #[test]
    fn sampled_walks_are_self_avoiding(n in 1usize..120, seed in any::<u64>(), moves in 0usize..2000) {
        let mut chain = PivotChain::new(n, seed, 0).unwrap();
        chain.advance(moves);
        let walk = chain.walk().unwrap();
        prop_assert_eq!(walk.len(), n);
        prop_assert!(Walk::is_valid_path(walk.vertices()));
        prop_assert_eq!(walk.end_to_end_sq(), chain.end_to_end_sq());
    }
}

#[test]
fn unit_square() {
    use SquareStep::*;
    let p = close_polygon(&Walk::from_steps(&[East, North, West]).unwrap()).unwrap();
    assert_eq!((p.perimeter(), p.area()), (4, 1));
}
