//! Polynomial-time certificate checking.
//!
//! The check sorts the trees in dictionary order, counts rows, looks for
//! touching trees only between consecutive rows (merging their sorted column
//! lists), and finally buckets the trees by column and by park. Every breach
//! is reported, not just the first one.

use std::fmt;

use crate::certificate::Certificate;
use crate::geom::{kings_adjacent, Cell};
use crate::puzzle::Puzzle;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ViolationKind {
    OutOfBounds,
    Duplicate,
    RowCount,
    Adjacency,
    ColumnCount,
    ParkCount,
}

/// One concrete rule breach.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Violation {
    OutOfBounds(Cell),
    Duplicate(Cell),
    RowCount {
        row: usize,
        found: usize,
        expected: usize,
    },
    /// Two touching trees, the first one smaller in (row, col) order.
    Adjacency(Cell, Cell),
    ColumnCount {
        col: usize,
        found: usize,
        expected: usize,
    },
    ParkCount {
        park: usize,
        found: usize,
        expected: usize,
    },
}

impl Violation {
    pub fn kind(&self) -> ViolationKind {
        match self {
            Violation::OutOfBounds(_) => ViolationKind::OutOfBounds,
            Violation::Duplicate(_) => ViolationKind::Duplicate,
            Violation::RowCount { .. } => ViolationKind::RowCount,
            Violation::Adjacency(..) => ViolationKind::Adjacency,
            Violation::ColumnCount { .. } => ViolationKind::ColumnCount,
            Violation::ParkCount { .. } => ViolationKind::ParkCount,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::OutOfBounds(c) => write!(f, "out-of-bounds {} {}", c.row, c.col),
            Violation::Duplicate(c) => write!(f, "duplicate {} {}", c.row, c.col),
            Violation::RowCount {
                row,
                found,
                expected,
            } => {
                write!(f, "row {row} has {found} trees, expected {expected}")
            }
            Violation::Adjacency(a, b) => {
                write!(f, "adjacent {} {} and {} {}", a.row, a.col, b.row, b.col)
            }
            Violation::ColumnCount {
                col,
                found,
                expected,
            } => {
                write!(f, "column {col} has {found} trees, expected {expected}")
            }
            Violation::ParkCount {
                park,
                found,
                expected,
            } => {
                write!(f, "park {park} has {found} trees, expected {expected}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

impl Verdict {
    fn from_violations(violations: Vec<Violation>) -> Self {
        Self {
            valid: violations.is_empty(),
            violations,
        }
    }
}

pub fn verify(puzzle: &Puzzle, cert: &Certificate) -> Verdict {
    verify_cells(puzzle, cert.trees())
}

/// Like [`verify`] but over a raw, possibly unsorted list that may contain
/// repeats.
pub fn verify_cells(puzzle: &Puzzle, trees: &[Cell]) -> Verdict {
    let dims = puzzle.dims();
    let quota = puzzle.quota();
    let mut violations = Vec::new();

    let mut sorted: Vec<Cell> = Vec::with_capacity(trees.len());
    for &t in trees {
        if dims.contains(t) {
            sorted.push(t);
        } else {
            violations.push(Violation::OutOfBounds(t));
        }
    }
    sorted.sort_unstable();
    sorted.dedup_by(|b, a| {
        if a == b {
            violations.push(Violation::Duplicate(*a));
            true
        } else {
            false
        }
    });

    // Per-row slices of the sorted list.
    let mut rows: Vec<&[Cell]> = vec![&[]; dims.m];
    let mut start = 0;
    while start < sorted.len() {
        let row = sorted[start].row;
        let end = start + sorted[start..].iter().take_while(|c| c.row == row).count();
        rows[row] = &sorted[start..end];
        start = end;
    }
    for (row, cells) in rows.iter().enumerate() {
        if cells.len() != quota.r() {
            violations.push(Violation::RowCount {
                row,
                found: cells.len(),
                expected: quota.r(),
            });
        }
    }

    for (i, cells) in rows.iter().enumerate() {
        for w in cells.windows(2) {
            if w[1].col - w[0].col < 2 {
                violations.push(Violation::Adjacency(w[0], w[1]));
            }
        }
        if let Some(below) = rows.get(i + 1) {
            adjacent_across(cells, below, &mut violations);
        }
    }

    let mut col_counts = vec![0usize; dims.n];
    let mut park_counts = vec![0usize; puzzle.num_parks()];
    for &t in &sorted {
        col_counts[t.col] += 1;
        park_counts[puzzle.park(t)] += 1;
    }
    for (col, &found) in col_counts.iter().enumerate() {
        if found != quota.c() {
            violations.push(Violation::ColumnCount {
                col,
                found,
                expected: quota.c(),
            });
        }
    }
    for (park, &found) in park_counts.iter().enumerate() {
        if found != quota.r() {
            violations.push(Violation::ParkCount {
                park,
                found,
                expected: quota.r(),
            });
        }
    }
    Verdict::from_violations(violations)
}

/// Merges the sorted column lists of two consecutive rows and reports every
/// cross-row pair whose columns differ by less than 2.
fn adjacent_across(upper: &[Cell], lower: &[Cell], out: &mut Vec<Violation>) {
    let mut merged: Vec<Cell> = Vec::with_capacity(upper.len() + lower.len());
    let (mut i, mut j) = (0, 0);
    while i < upper.len() || j < lower.len() {
        let take_upper = j == lower.len() || (i < upper.len() && upper[i].col <= lower[j].col);
        if take_upper {
            merged.push(upper[i]);
            i += 1;
        } else {
            merged.push(lower[j]);
            j += 1;
        }
    }
    for (k, &a) in merged.iter().enumerate() {
        for &b in merged[k + 1..].iter().take_while(|b| b.col - a.col < 2) {
            if a.row != b.row {
                out.push(Violation::Adjacency(a.min(b), a.max(b)));
            }
        }
    }
}

/// Park-free validity: `c` per column, `r` per row, nothing touching. Used
/// for tree configurations, which carry no park partition.
pub fn is_valid_configuration(
    quota: crate::geom::Quota,
    dims: crate::geom::BoardDims,
    trees: &[Cell],
) -> bool {
    let mut rows = vec![0usize; dims.m];
    let mut cols = vec![0usize; dims.n];
    for (k, &t) in trees.iter().enumerate() {
        if !dims.contains(t) {
            return false;
        }
        rows[t.row] += 1;
        cols[t.col] += 1;
        if trees[k + 1..]
            .iter()
            .any(|&u| u == t || kings_adjacent(t, u))
        {
            return false;
        }
    }
    rows.iter().all(|&x| x == quota.r()) && cols.iter().all(|&x| x == quota.c())
}
