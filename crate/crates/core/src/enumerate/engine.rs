//! Backtracking core shared by every square-lattice census.
//!
//! A search starts from one or more root paths, expands them serially to a
//! fixed prefix depth, and hands each prefix to a worker that owns its own
//! board and tally. Tallies merge by integer addition, so the result does not
//! depend on scheduling.

use rayon::prelude::*;

use crate::lattice::{OccupancySet, Point, SquareStep};

use super::SearchPlan;

/// A vertex of the board: linear index plus lattice coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Site {
    pub idx: usize,
    pub p: Point,
}

/// Statistics gathered along a depth-first search.
///
/// `depth` is always the number of steps of the walk *after* the step onto
/// `site`. `push` runs before the site is marked occupied and may veto the step
/// (a prune); a vetoed push must leave the tally unchanged.
pub(crate) trait Tally: Send + Sync + Sized {
    /// When set, the engine skips the last level and reports the number of
    /// free neighbours through [`Tally::record_leaves`].
    const BULK_LEAVES: bool = false;

    fn fresh(&self) -> Self;
    fn push(&mut self, board: &OccupancySet, site: Site, depth: usize) -> bool;
    fn pop(&mut self, board: &OccupancySet, site: Site, depth: usize);
    fn record(&mut self, board: &OccupancySet, site: Site, depth: usize);
    fn record_leaves(&mut self, _depth: usize, _free: u64) {}
    fn merge(&mut self, other: Self);
}

struct Search {
    offsets: [isize; 4],
    max_depth: usize,
}

impl Search {
    fn neighbours(&self, site: Site) -> impl Iterator<Item = Site> + '_ {
        self.offsets.iter().zip(SquareStep::ALL).map(move |(&o, s)| Site {
            idx: site.idx.wrapping_add_signed(o),
            p: site.p.step(s),
        })
    }

    fn descend<T: Tally>(&self, board: &mut OccupancySet, tally: &mut T, site: Site, depth: usize) {
        tally.record(board, site, depth);
        if depth == self.max_depth {
            return;
        }
        if T::BULK_LEAVES && depth + 1 == self.max_depth {
            let free = self.offsets.iter().filter(|&&o| board.is_free(site.idx.wrapping_add_signed(o)));
            tally.record_leaves(depth + 1, free.count() as u64);
            return;
        }
        for next in self.neighbours(site) {
            if board.is_free(next.idx) && tally.push(board, next, depth + 1) {
                board.occupy(next.idx);
                self.descend(board, tally, next, depth + 1);
                board.release(next.idx);
                tally.pop(board, next, depth + 1);
            }
        }
    }

    /// Walks forward to `cut` steps, recording shallower nodes and collecting
    /// every path that reaches the cut.
    fn split<T: Tally>(
        &self,
        board: &mut OccupancySet,
        tally: &mut T,
        path: &mut Vec<Site>,
        cut: usize,
        out: &mut Vec<Vec<Site>>,
    ) {
        let site = *path.last().expect("non-empty path");
        let depth = path.len() - 1;
        if depth >= cut && depth < self.max_depth {
            out.push(path.clone());
            return;
        }
        tally.record(board, site, depth);
        if depth == self.max_depth {
            return;
        }
        let nexts: Vec<Site> = self.neighbours(site).collect();
        for next in nexts {
            if board.is_free(next.idx) && tally.push(board, next, depth + 1) {
                board.occupy(next.idx);
                path.push(next);
                self.split(board, tally, path, cut, out);
                path.pop();
                board.release(next.idx);
                tally.pop(board, next, depth + 1);
            }
        }
    }
}

/// Replays `path` onto a fresh board; returns `None` if a step is illegal.
fn replay<T: Tally>(template: &OccupancySet, tally: &mut T, path: &[Site]) -> Option<OccupancySet> {
    let mut board = template.clone();
    let origin = path[0];
    if !board.is_free(origin.idx) {
        return None;
    }
    board.occupy(origin.idx);
    for (k, &site) in path.iter().enumerate().skip(1) {
        if !board.is_free(site.idx) || !tally.push(&board, site, k) {
            return None;
        }
        board.occupy(site.idx);
    }
    Some(board)
}

fn to_sites(template: &OccupancySet, root: &[Point]) -> Vec<Site> {
    root.iter()
        .map(|&p| Site {
            idx: template.index(p).expect("root vertex inside the window"),
            p,
        })
        .collect()
}

/// Runs `proto`'s census over all walks extending each root up to `max_depth`
/// steps. Nodes shallower than a root's own length are not recorded.
pub(crate) fn explore<T: Tally>(
    template: &OccupancySet,
    roots: &[Vec<Point>],
    proto: &T,
    max_depth: usize,
    plan: &SearchPlan,
) -> T {
    let search = Search {
        offsets: template.offsets(),
        max_depth,
    };

    let mut head = proto.fresh();
    let mut prefixes = Vec::new();
    for root in roots {
        let mut path = to_sites(template, root);
        if path.len() - 1 > max_depth {
            continue;
        }
        let mut scratch = proto.fresh();
        let Some(mut board) = replay(template, &mut scratch, &path) else {
            continue;
        };
        // `scratch` holds the root's push state; continue the split with it
        // but keep only the records it gathers.
        search.split(&mut board, &mut scratch, &mut path, plan.prefix_depth, &mut prefixes);
        head.merge(scratch);
    }

    let work = |prefix: &Vec<Site>| {
        let mut tally = proto.fresh();
        let mut board = replay(template, &mut tally, prefix).expect("prefix was legal when collected");
        let last = *prefix.last().expect("non-empty prefix");
        search.descend(&mut board, &mut tally, last, prefix.len() - 1);
        tally
    };

    let tail = if plan.worker_count <= 1 {
        prefixes.iter().map(work).fold(proto.fresh(), |mut a, b| {
            a.merge(b);
            a
        })
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(plan.worker_count)
            .build()
            .expect("thread pool");
        pool.install(|| {
            prefixes
                .par_iter()
                .map(work)
                .reduce(|| proto.fresh(), |mut a, b| {
                    a.merge(b);
                    a
                })
        })
    };
    head.merge(tail);
    head
}
