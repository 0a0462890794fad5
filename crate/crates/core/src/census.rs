//! Census of 4x4 one-tree puzzles with a unique solution.
//!
//! A 4x4 one-tree board has exactly two configurations, the Left and Right
//! arrangements, which share no cell. A puzzle therefore has a unique
//! solution exactly when one arrangement puts one tree in every park and the
//! other does not. Puzzles are counted up to renaming of parks.

use num_bigint::BigInt;
use num_traits::Pow;
use rayon::prelude::*;

use crate::enumerate::{shuriken, Side};
use crate::geom::{BoardDims, Quota};
use crate::puzzle::Puzzle;
use crate::verify::verify;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CensusReport {
    /// Contiguous puzzles solved by the Left arrangement only.
    pub contiguous_one_sided: Option<BigInt>,
    /// Contiguous puzzles with exactly one solution (either side).
    pub contiguous_unique_total: Option<BigInt>,
    pub noncontiguous_one_sided: Option<BigInt>,
    pub noncontiguous_unique_total: Option<BigInt>,
    /// Puzzles, contiguous or not, with at least one solution.
    pub at_least_one_solution_total: Option<BigInt>,
}

/// Closed forms over all partitions of the board into four labelled-up-to-
/// renaming parks. A puzzle solved by the Left arrangement assigns each of
/// the twelve non-Left cells to one of the four parks anchored at the Left
/// trees (`4^12`); of those, `4! 4^8` also put one Right tree in each park.
pub fn census_4x4_noncontiguous() -> CensusReport {
    let four = BigInt::from(4);
    let all_left: BigInt = Pow::pow(&four, 12u32);
    let both: BigInt = BigInt::from(24) * Pow::pow(&four, 8u32);
    let one_sided = &all_left - &both;
    CensusReport {
        noncontiguous_one_sided: Some(one_sided.clone()),
        noncontiguous_unique_total: Some(one_sided * 2),
        at_least_one_solution_total: Some(all_left * 2 - both),
        ..CensusReport::default()
    }
}

const SIDE: usize = 4;

/// Exhaustive count over contiguous partitions. Every counted puzzle is
/// cross-checked with the verifier on both arrangements.
pub fn census_4x4_contiguous() -> CensusReport {
    let puzzles = contiguous_left_only_puzzles();
    let one_sided = BigInt::from(puzzles.len());
    CensusReport {
        contiguous_one_sided: Some(one_sided.clone()),
        contiguous_unique_total: Some(one_sided * 2),
        ..CensusReport::default()
    }
}

/// The contiguous 4x4 puzzles whose only solution is the Left arrangement,
/// in canonical labelling, sorted.
pub fn contiguous_left_only_puzzles() -> Vec<Puzzle> {
    let quota = Quota::new(1, 1).expect("positive");
    let left = shuriken(quota, Side::Left);
    let right = shuriken(quota, Side::Right);
    let dims = BoardDims::new(SIDE, SIDE);
    let mut found = Vec::new();
    for_each_partition(dims, SIDE, true, |labels| {
        if one_per_park(labels, &left) && !one_per_park(labels, &right) {
            found.push(labels.to_vec());
        }
    });
    found
        .into_par_iter()
        .map(|labels| {
            let p = Puzzle::new(quota, dims, labels.into_iter().map(usize::from).collect())
                .expect("partition has four parks");
            assert!(verify(&p, &left).valid && !verify(&p, &right).valid);
            p
        })
        .collect()
}

fn one_per_park(labels: &[u8], cert: &crate::certificate::Certificate) -> bool {
    let mut seen = [0u8; SIDE];
    for t in cert.trees() {
        seen[labels[t.row * SIDE + t.col] as usize] += 1;
    }
    seen.iter().all(|&s| s == 1)
}

/// Calls `visit` once per partition of the board into exactly `k` nonempty
/// parks, labelled by first appearance in row-major order. With `connected`
/// set, only partitions whose parks are all edge-connected are visited.
pub fn for_each_partition(
    dims: BoardDims,
    k: usize,
    connected: bool,
    mut visit: impl FnMut(&[u8]),
) {
    let cells = dims.cells();
    if k == 0 {
        if cells == 0 {
            visit(&[]);
        }
        return;
    }
    assert!(k <= u8::MAX as usize, "too many parks");
    let mut labels = vec![0u8; cells];
    let mut walk = Walk {
        dims,
        k,
        connected,
        labels: &mut labels,
        visit: &mut visit,
    };
    if cells > 0 {
        walk.assign(0, 0);
    }
}

struct Walk<'a, F: FnMut(&[u8])> {
    dims: BoardDims,
    k: usize,
    connected: bool,
    labels: &'a mut Vec<u8>,
    visit: &'a mut F,
}

impl<F: FnMut(&[u8])> Walk<'_, F> {
    /// Labels cell `i` given that labels `0..used` are in use so far.
    fn assign(&mut self, i: usize, used: usize) {
        let cells = self.labels.len();
        let remaining = cells - i;
        let top = if used < self.k { used + 1 } else { used };
        for label in 0..top {
            let now_used = used.max(label + 1);
            // Every unused label still needs a cell.
            if self.k - now_used > remaining - 1 {
                continue;
            }
            self.labels[i] = label as u8;
            if self.connected && !self.still_connectable(i) {
                continue;
            }
            if i + 1 == cells {
                (self.visit)(&self.labels[..]);
            } else {
                self.assign(i + 1, now_used);
            }
        }
    }

    /// False if some park, restricted to cells `0..=last`, has a component
    /// that can no longer grow while another component of it exists.
    fn still_connectable(&self, last: usize) -> bool {
        let n = self.dims.n;
        let done = last + 1;
        let open =
            |j: usize| (j % n + 1 < n && j == last) || (j + n > last && j + n < self.labels.len());
        let mut comp = vec![usize::MAX; done];
        let mut comps_of = vec![0usize; self.k];
        let mut closed_of = vec![false; self.k];
        let mut stack = Vec::new();
        for s in 0..done {
            if comp[s] != usize::MAX {
                continue;
            }
            let label = self.labels[s];
            comp[s] = s;
            stack.push(s);
            let mut is_open = false;
            while let Some(j) = stack.pop() {
                is_open |= open(j);
                let (r, c) = (j / n, j % n);
                let mut near = [usize::MAX; 4];
                if r > 0 {
                    near[0] = j - n;
                }
                if c > 0 {
                    near[1] = j - 1;
                }
                if c + 1 < n {
                    near[2] = j + 1;
                }
                near[3] = j + n;
                for &t in &near {
                    if t < done && comp[t] == usize::MAX && self.labels[t] == label {
                        comp[t] = s;
                        stack.push(t);
                    }
                }
            }
            let l = label as usize;
            comps_of[l] += 1;
            closed_of[l] |= !is_open;
        }
        let complete = done == self.labels.len();
        (0..self.k).all(|l| {
            if complete {
                comps_of[l] <= 1
            } else {
                !(closed_of[l] && comps_of[l] > 1)
            }
        })
    }
}
