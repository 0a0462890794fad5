//! Counting and listing tree configurations: placements with `c` trees per
//! column, `r` per row and no two trees touching. Parks play no part here.
//!
//! Counting is a row-by-row transfer: the state is the previous row's mask
//! together with every column's remaining quota, packed into one integer in
//! base `c + 1`. The board is first turned so that rows are the shorter side.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::certificate::Certificate;
use crate::geom::{BoardDims, Cell, Quota};

/// Default cap on the size of the counting table.
pub const DEFAULT_MEMORY_BUDGET: usize = 2 << 30;

/// Rough cost of one table entry: key, mask, big integer and hash overhead.
const BYTES_PER_STATE: usize = 96;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerateError {
    #[error("deadline exceeded")]
    DeadlineExceeded,
    #[error("state table would exceed the memory budget of {budget} bytes")]
    MemoryBudgetExceeded { budget: usize },
    #[error("more than {cap} configurations")]
    CapExceeded { cap: usize },
    /// The packed quota vector does not fit in 128 bits.
    #[error("board too wide for the counting table ({width} columns, quota {c})")]
    BoardTooWide { width: usize, c: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigCount {
    pub quota: Quota,
    pub dims: BoardDims,
    pub count: BigUint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountOptions {
    pub deadline: Option<Duration>,
    pub memory_budget: usize,
    /// Split the work over the first row's masks on the rayon pool.
    pub parallel: bool,
}

impl Default for CountOptions {
    fn default() -> Self {
        Self {
            deadline: None,
            memory_budget: DEFAULT_MEMORY_BUDGET,
            parallel: true,
        }
    }
}

/// All width-`n` masks with exactly `r` set bits, no two adjacent, ascending.
/// Bit `j` stands for column `j`.
pub fn row_masks(n: usize, r: usize) -> Vec<u64> {
    assert!(n <= 64, "row masks are limited to 64 columns");
    fn go(n: usize, r: usize, from: usize, acc: u64, out: &mut Vec<u64>) {
        if r == 0 {
            out.push(acc);
            return;
        }
        // Need room for r trees separated by gaps: 2r - 1 cells.
        let mut j = from;
        while j + 2 * r - 1 <= n {
            go(n, r - 1, j + 2, acc | 1 << j, out);
            j += 1;
        }
    }
    let mut out = Vec::new();
    go(n, r, 0, 0, &mut out);
    out.sort_unstable();
    out
}

fn spread(mask: u64) -> u64 {
    mask | mask << 1 | mask >> 1
}

/// Counts configurations with the default options.
pub fn count_configs(
    quota: Quota,
    dims: BoardDims,
    deadline: Option<Duration>,
) -> Result<ConfigCount, EnumerateError> {
    count_configs_with(
        quota,
        dims,
        CountOptions {
            deadline,
            ..CountOptions::default()
        },
    )
}

pub fn count_configs_with(
    quota: Quota,
    dims: BoardDims,
    opts: CountOptions,
) -> Result<ConfigCount, EnumerateError> {
    let done = |count| Ok(ConfigCount { quota, dims, count });
    if !quota.admits(dims) {
        return done(BigUint::zero());
    }
    if dims.m == 0 {
        return done(BigUint::one());
    }
    // Rows become the shorter side: a transposed configuration is a
    // configuration of the transposed quota.
    let (width, height, col_quota, row_quota) = if dims.n <= dims.m {
        (dims.n, dims.m, quota.c(), quota.r())
    } else {
        (dims.m, dims.n, quota.r(), quota.c())
    };
    let dp = Transfer::new(width, height, col_quota, row_quota, opts)?;
    done(dp.count()?)
}

struct Transfer {
    width: usize,
    height: usize,
    col_quota: usize,
    masks: Vec<u64>,
    /// For each mask index, the mask indices allowed in the next row.
    follow: Vec<Vec<u32>>,
    pow: Vec<u128>,
    deadline: Option<Instant>,
    budget: usize,
    parallel: bool,
}

type Table = HashMap<(u128, u32), BigUint>;

impl Transfer {
    fn new(
        width: usize,
        height: usize,
        col_quota: usize,
        row_quota: usize,
        opts: CountOptions,
    ) -> Result<Self, EnumerateError> {
        let base = col_quota as u128 + 1;
        let mut pow = Vec::with_capacity(width);
        let mut p: u128 = 1;
        for _ in 0..width {
            pow.push(p);
            p = p.checked_mul(base).ok_or(EnumerateError::BoardTooWide {
                width,
                c: col_quota,
            })?;
        }
        if width > 64 {
            return Err(EnumerateError::BoardTooWide {
                width,
                c: col_quota,
            });
        }
        let masks = row_masks(width, row_quota);
        let follow = masks
            .iter()
            .map(|&a| {
                (0..masks.len() as u32)
                    .filter(|&b| masks[b as usize] & spread(a) == 0)
                    .collect()
            })
            .collect();
        Ok(Self {
            width,
            height,
            col_quota,
            masks,
            follow,
            pow,
            deadline: opts.deadline.map(|d| Instant::now() + d),
            budget: opts.memory_budget,
            parallel: opts.parallel,
        })
    }

    fn digits(&self, key: u128, out: &mut [u8]) {
        let base = self.col_quota as u128 + 1;
        let mut k = key;
        for d in out.iter_mut() {
            *d = (k % base) as u8;
            k /= base;
        }
    }

    /// Applies `mask` to the quota vector; `None` if a column is exhausted
    /// or can no longer be filled in the rows that remain.
    fn place(&self, key: u128, digits: &[u8], mask: u64, rows_after: usize) -> Option<u128> {
        let mut key = key;
        let reach = rows_after.div_ceil(2) as u8;
        for (j, &d) in digits.iter().enumerate() {
            let used = (mask >> j & 1) as u8;
            if d < used || d - used > reach {
                return None;
            }
            if used == 1 {
                key -= self.pow[j];
            }
        }
        Some(key)
    }

    fn initial_key(&self) -> u128 {
        self.pow.iter().map(|&p| p * self.col_quota as u128).sum()
    }

    fn count(&self) -> Result<BigUint, EnumerateError> {
        let start = self.initial_key();
        let mut digits = vec![0u8; self.width];
        self.digits(start, &mut digits);
        let firsts: Vec<(u128, u32)> = (0..self.masks.len() as u32)
            .filter_map(|i| {
                self.place(start, &digits, self.masks[i as usize], self.height - 1)
                    .map(|k| (k, i))
            })
            .collect();
        let run = |&(key, idx): &(u128, u32)| {
            let mut table = Table::new();
            table.insert((key, idx), BigUint::one());
            self.finish(table, 1)
        };
        let parts: Vec<Result<BigUint, EnumerateError>> = if self.parallel {
            firsts.par_iter().map(run).collect()
        } else {
            firsts.iter().map(run).collect()
        };
        parts.into_iter().sum()
    }

    /// Continues from a table holding the states after `rows_done` rows.
    fn finish(&self, mut table: Table, rows_done: usize) -> Result<BigUint, EnumerateError> {
        let threads = if self.parallel {
            rayon::current_num_threads().max(1)
        } else {
            1
        };
        let limit = self.budget / threads / BYTES_PER_STATE;
        let mut digits = vec![0u8; self.width];
        for row in rows_done..self.height {
            if self.deadline.is_some_and(|d| Instant::now() >= d) {
                return Err(EnumerateError::DeadlineExceeded);
            }
            let rows_after = self.height - row - 1;
            let mut next = Table::with_capacity(table.len());
            for ((key, prev), ways) in table {
                self.digits(key, &mut digits);
                for &idx in &self.follow[prev as usize] {
                    if let Some(k) = self.place(key, &digits, self.masks[idx as usize], rows_after)
                    {
                        *next.entry((k, idx)).or_default() += &ways;
                    }
                }
                if next.len() > limit {
                    return Err(EnumerateError::MemoryBudgetExceeded {
                        budget: self.budget,
                    });
                }
            }
            table = next;
        }
        Ok(table
            .into_iter()
            .filter(|((k, _), _)| *k == 0)
            .map(|(_, v)| v)
            .sum())
    }
}

/// Lists every configuration, sorted, failing once more than `cap` exist.
pub fn list_configs(
    quota: Quota,
    dims: BoardDims,
    cap: usize,
) -> Result<Vec<Certificate>, EnumerateError> {
    if !quota.admits(dims) {
        return Ok(Vec::new());
    }
    if dims.m == 0 {
        return Ok(vec![Certificate::new()]);
    }
    let masks = row_masks(dims.n, quota.r());
    let mut out = Vec::new();
    let mut rows = Vec::with_capacity(dims.m);
    let mut left = vec![quota.c(); dims.n];
    list_rows(&masks, dims, &mut rows, &mut left, cap, &mut out)?;
    out.sort();
    Ok(out)
}

fn list_rows(
    masks: &[u64],
    dims: BoardDims,
    rows: &mut Vec<u64>,
    left: &mut [usize],
    cap: usize,
    out: &mut Vec<Certificate>,
) -> Result<(), EnumerateError> {
    let row = rows.len();
    if row == dims.m {
        if left.iter().all(|&x| x == 0) {
            if out.len() == cap {
                return Err(EnumerateError::CapExceeded { cap });
            }
            let cells = rows.iter().enumerate().flat_map(|(i, &mask)| {
                (0..dims.n)
                    .filter(move |&j| mask >> j & 1 == 1)
                    .map(move |j| Cell::new(i, j))
            });
            out.push(Certificate::from_cells(cells).expect("distinct cells"));
        }
        return Ok(());
    }
    let blocked = rows.last().map_or(0, |&p| spread(p));
    let reach = (dims.m - row - 1).div_ceil(2);
    for &mask in masks {
        if mask & blocked != 0 {
            continue;
        }
        let fits = (0..dims.n).all(|j| {
            let used = (mask >> j & 1) as usize;
            left[j] >= used && left[j] - used <= reach
        });
        if !fits {
            continue;
        }
        for (j, l) in left.iter_mut().enumerate() {
            *l -= (mask >> j & 1) as usize;
        }
        rows.push(mask);
        let res = list_rows(masks, dims, rows, left, cap, out);
        rows.pop();
        for (j, l) in left.iter_mut().enumerate() {
            *l += (mask >> j & 1) as usize;
        }
        res?;
    }
    Ok(())
}

/// The two minimal configurations, told apart by the box pattern in the
/// upper-left quadrant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

/// Position of the tree inside a 2x2 box, as (row, col) offsets.
#[derive(Debug, Clone, Copy)]
enum BoxType {
    /// Top left.
    A,
    /// Bottom left.
    B,
    /// Top right.
    C,
    /// Bottom right.
    D,
}

impl BoxType {
    fn offset(self) -> (usize, usize) {
        match self {
            BoxType::A => (0, 0),
            BoxType::B => (1, 0),
            BoxType::C => (0, 1),
            BoxType::D => (1, 1),
        }
    }
}

/// One of the two configurations on the `4c x 4r` board. The board splits
/// into 2x2 boxes, each holding one tree; every quadrant uses a single box
/// type. Left reads C D / A B by quadrant, Right reads B A / D C, which is
/// the Left arrangement mirrored left to right.
pub fn shuriken(quota: Quota, side: Side) -> Certificate {
    let (c, r) = (quota.c(), quota.r());
    let [ul, ur, ll, lr] = match side {
        Side::Left => [BoxType::C, BoxType::D, BoxType::A, BoxType::B],
        Side::Right => [BoxType::B, BoxType::A, BoxType::D, BoxType::C],
    };
    let mut cells = Vec::with_capacity(4 * c * r);
    for bi in 0..2 * c {
        for bj in 0..2 * r {
            let kind = match (bi < c, bj < r) {
                (true, true) => ul,
                (true, false) => ur,
                (false, true) => ll,
                (false, false) => lr,
            };
            let (di, dj) = kind.offset();
            cells.push(Cell::new(2 * bi + di, 2 * bj + dj));
        }
    }
    Certificate::from_cells(cells).expect("boxes are disjoint")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::is_valid_configuration;

    fn q(c: usize, r: usize) -> Quota {
        Quota::new(c, r).unwrap()
    }

    fn count(c: usize, r: usize, m: usize, n: usize) -> BigUint {
        count_configs(q(c, r), BoardDims::new(m, n), None)
            .unwrap()
            .count
    }

    #[test]
    fn masks_small() {
        assert_eq!(row_masks(4, 1), vec![0b0001, 0b0010, 0b0100, 0b1000]);
        assert_eq!(row_masks(4, 2), vec![0b0101, 0b1001, 0b1010]);
        assert_eq!(row_masks(3, 0), vec![0]);
        assert!(row_masks(3, 3).is_empty());
    }

    #[test]
    fn masks_match_brute_force() {
        for n in 0..=16usize {
            for r in 0..=n {
                let brute: Vec<u64> = (0u64..1 << n)
                    .filter(|&m| m.count_ones() as usize == r && m & (m << 1) == 0)
                    .collect();
                assert_eq!(row_masks(n, r), brute, "n={n} r={r}");
                let expected = if n + 1 >= r {
                    num_integer::binomial((n + 1 - r) as u64, r as u64)
                } else {
                    0
                };
                assert_eq!(brute.len() as u64, expected);
            }
        }
    }

    #[test]
    fn small_counts() {
        assert_eq!(count(1, 1, 5, 5), BigUint::from(14u32));
        assert_eq!(count(1, 1, 8, 8), BigUint::from(5242u32));
        assert_eq!(count(2, 2, 9, 9), BigUint::from(664u32));
        assert_eq!(count(1, 2, 5, 10), BigUint::from(282u32));
        assert_eq!(count(1, 1, 3, 3), BigUint::zero());
        assert_eq!(count(3, 2, 0, 0), BigUint::one());
        assert_eq!(count(1, 2, 4, 4), BigUint::zero());
    }

    #[test]
    fn sequential_matches_parallel() {
        let opts = CountOptions {
            parallel: false,
            ..CountOptions::default()
        };
        let seq = count_configs_with(q(2, 2), BoardDims::new(9, 9), opts).unwrap();
        assert_eq!(seq.count, count(2, 2, 9, 9));
    }

    #[test]
    fn tiny_budget_is_reported() {
        let opts = CountOptions {
            memory_budget: 1,
            parallel: false,
            ..CountOptions::default()
        };
        assert_eq!(
            count_configs_with(q(1, 1), BoardDims::new(6, 6), opts),
            Err(EnumerateError::MemoryBudgetExceeded { budget: 1 })
        );
    }

    #[test]
    fn zero_deadline_is_reported() {
        let r = count_configs(q(1, 1), BoardDims::new(8, 8), Some(Duration::ZERO));
        assert_eq!(r, Err(EnumerateError::DeadlineExceeded));
    }

    #[test]
    fn list_respects_cap() {
        let all = list_configs(q(1, 1), BoardDims::new(5, 5), 100).unwrap();
        assert_eq!(all.len(), 14);
        assert_eq!(
            list_configs(q(1, 1), BoardDims::new(5, 5), 13),
            Err(EnumerateError::CapExceeded { cap: 13 })
        );
    }

    #[test]
    fn shuriken_one_tree() {
        let left = shuriken(q(1, 1), Side::Left);
        let right = shuriken(q(1, 1), Side::Right);
        let cells =
            |v: &[(usize, usize)]| v.iter().map(|&(r, c)| Cell::new(r, c)).collect::<Vec<_>>();
        assert_eq!(left.trees(), cells(&[(0, 1), (1, 3), (2, 0), (3, 2)]));
        assert_eq!(right.trees(), cells(&[(0, 2), (1, 0), (2, 3), (3, 1)]));
    }

    #[test]
    fn shuriken_sides_valid_and_disjoint() {
        for (c, r) in [(1, 1), (2, 1), (1, 2), (2, 2), (2, 3), (3, 2)] {
            let dims = BoardDims::new(4 * c, 4 * r);
            let left = shuriken(q(c, r), Side::Left);
            let right = shuriken(q(c, r), Side::Right);
            assert!(
                is_valid_configuration(q(c, r), dims, left.trees()),
                "({c},{r}) left"
            );
            assert!(
                is_valid_configuration(q(c, r), dims, right.trees()),
                "({c},{r}) right"
            );
            assert!(left.trees().iter().all(|&t| !right.contains(t)));
            let mirrored = Certificate::from_cells(
                left.trees()
                    .iter()
                    .map(|t| Cell::new(t.row, dims.n - 1 - t.col)),
            )
            .unwrap();
            assert_eq!(mirrored, right);
        }
    }
}
