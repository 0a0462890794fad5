//! The puzzle data model and the `parks v1` text format.
//!
//! ```text
//! parks v1
//! c r m n
//! <m lines of n space-separated park ids>
//! ```

use std::collections::VecDeque;
use std::fmt::Write as _;

use thiserror::Error;

use crate::geom::{BoardDims, Cell, Quota};

pub const MAGIC: &str = "parks v1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PuzzleError {
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("dimension mismatch: c*n = {c}*{n} but r*m = {r}*{m}")]
    DimensionMismatch {
        c: usize,
        r: usize,
        m: usize,
        n: usize,
    },
    #[error("park id {id} at {cell} is outside 0..{m}")]
    BadParkId { cell: Cell, id: usize, m: usize },
    #[error("expected {expected} distinct parks, found {found}")]
    WrongParkCount { expected: usize, found: usize },
    #[error("truncated grid: {0}")]
    TruncatedGrid(String),
    #[error("unexpected trailing data on line {0}")]
    TrailingData(usize),
}

/// A `(c, r)`-tree Parks puzzle: an `m x n` board split into `m` parks.
///
/// Parks need not be contiguous; see [`Puzzle::is_contiguous`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Puzzle {
    quota: Quota,
    dims: BoardDims,
    parks: Vec<usize>,
}

impl Puzzle {
    /// Builds a puzzle from row-major park ids, checking every invariant.
    pub fn new(quota: Quota, dims: BoardDims, parks: Vec<usize>) -> Result<Self, PuzzleError> {
        if !quota.admits(dims) {
            return Err(PuzzleError::DimensionMismatch {
                c: quota.c(),
                r: quota.r(),
                m: dims.m,
                n: dims.n,
            });
        }
        if parks.len() != dims.cells() {
            return Err(PuzzleError::TruncatedGrid(format!(
                "expected {} cells, got {}",
                dims.cells(),
                parks.len()
            )));
        }
        let mut seen = vec![false; dims.m];
        for (i, &id) in parks.iter().enumerate() {
            if id >= dims.m {
                return Err(PuzzleError::BadParkId {
                    cell: Cell::new(i / dims.n, i % dims.n),
                    id,
                    m: dims.m,
                });
            }
            seen[id] = true;
        }
        let found = seen.iter().filter(|&&s| s).count();
        if found != dims.m {
            return Err(PuzzleError::WrongParkCount {
                expected: dims.m,
                found,
            });
        }
        Ok(Self { quota, dims, parks })
    }

    /// Builds a puzzle from a grid of rows.
    pub fn from_rows(quota: Quota, rows: &[Vec<usize>]) -> Result<Self, PuzzleError> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n) {
            return Err(PuzzleError::TruncatedGrid("ragged rows".into()));
        }
        Self::new(quota, BoardDims::new(m, n), rows.concat())
    }

    pub fn quota(&self) -> Quota {
        self.quota
    }

    pub fn dims(&self) -> BoardDims {
        self.dims
    }

    /// Number of parks, which always equals the number of rows.
    pub fn num_parks(&self) -> usize {
        self.dims.m
    }

    pub fn park(&self, cell: Cell) -> usize {
        self.parks[cell.row * self.dims.n + cell.col]
    }

    /// Row-major park ids.
    pub fn park_ids(&self) -> &[usize] {
        &self.parks
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        let n = self.dims.n;
        (0..self.dims.cells()).map(move |i| Cell::new(i / n, i % n))
    }

    /// Cells of every park, indexed by park id, each list in row-major order.
    pub fn park_cells(&self) -> Vec<Vec<Cell>> {
        let mut out = vec![Vec::new(); self.num_parks()];
        for cell in self.cells() {
            out[self.park(cell)].push(cell);
        }
        out
    }

    /// True iff every park is connected under edge (4-way) adjacency.
    pub fn is_contiguous(&self) -> bool {
        let (m, n) = (self.dims.m, self.dims.n);
        let mut seen = vec![false; m * n];
        let mut roots = vec![false; m];
        let mut queue = VecDeque::new();
        for start in 0..m * n {
            if seen[start] {
                continue;
            }
            let id = self.parks[start];
            if roots[id] {
                // second component of an already visited park
                return false;
            }
            roots[id] = true;
            seen[start] = true;
            queue.push_back(start);
            while let Some(i) = queue.pop_front() {
                let (row, col) = (i / n, i % n);
                let mut visit = |j: usize| {
                    if !seen[j] && self.parks[j] == id {
                        seen[j] = true;
                        queue.push_back(j);
                    }
                };
                if row > 0 {
                    visit(i - n);
                }
                if row + 1 < m {
                    visit(i + n);
                }
                if col > 0 {
                    visit(i - 1);
                }
                if col + 1 < n {
                    visit(i + 1);
                }
            }
        }
        true
    }

    /// Relabels parks in order of first appearance (row-major), so that
    /// puzzles equal up to a permutation of park ids compare equal.
    pub fn canonical(&self) -> Puzzle {
        Puzzle {
            quota: self.quota,
            dims: self.dims,
            parks: canonical_labels(&self.parks),
        }
    }

    pub fn parse(text: &str) -> Result<Self, PuzzleError> {
        let mut lines = text.split_inclusive('\n').enumerate();
        let mut next_line = |what: &str| -> Result<(usize, &str), PuzzleError> {
            match lines.next() {
                Some((i, l)) if l.ends_with('\n') => Ok((i + 1, &l[..l.len() - 1])),
                Some((i, _)) => Err(PuzzleError::TruncatedGrid(format!(
                    "line {} lacks a trailing newline",
                    i + 1
                ))),
                None => Err(PuzzleError::TruncatedGrid(format!("missing {what}"))),
            }
        };
        let (_, magic) = next_line("magic line")
            .map_err(|_| PuzzleError::MalformedHeader("missing magic line".into()))?;
        if magic != MAGIC {
            return Err(PuzzleError::MalformedHeader(format!(
                "expected {MAGIC:?}, got {magic:?}"
            )));
        }
        let (_, header) = next_line("header")
            .map_err(|_| PuzzleError::MalformedHeader("missing `c r m n` line".into()))?;
        let nums = parse_numbers(header)
            .filter(|v| v.len() == 4)
            .ok_or_else(|| {
                PuzzleError::MalformedHeader(format!("bad `c r m n` line {header:?}"))
            })?;
        let quota = Quota::new(nums[0], nums[1])
            .ok_or_else(|| PuzzleError::MalformedHeader("quotas must be positive".into()))?;
        let dims = BoardDims::new(nums[2], nums[3]);
        if !quota.admits(dims) {
            return Err(PuzzleError::DimensionMismatch {
                c: quota.c(),
                r: quota.r(),
                m: dims.m,
                n: dims.n,
            });
        }
        let mut parks = Vec::with_capacity(dims.cells());
        for row in 0..dims.m {
            let (lineno, line) = next_line(&format!("row {row}"))?;
            let ids = parse_numbers(line).ok_or_else(|| {
                PuzzleError::TruncatedGrid(format!("line {lineno}: non-numeric park id"))
            })?;
            if ids.len() != dims.n {
                return Err(PuzzleError::TruncatedGrid(format!(
                    "line {lineno}: expected {} ids, got {}",
                    dims.n,
                    ids.len()
                )));
            }
            parks.extend(ids);
        }
        if let Some((i, l)) = lines.next() {
            if !l.trim().is_empty() {
                return Err(PuzzleError::TrailingData(i + 1));
            }
        }
        Self::new(quota, dims, parks)
    }

    /// Canonical text form: single spaces, one line per row, trailing newline.
    pub fn serialize(&self) -> String {
        let mut out = format!(
            "{MAGIC}\n{} {} {} {}\n",
            self.quota.c(),
            self.quota.r(),
            self.dims.m,
            self.dims.n
        );
        for row in self.parks.chunks(self.dims.n.max(1)).take(self.dims.m) {
            for (j, id) in row.iter().enumerate() {
                if j > 0 {
                    out.push(' ');
                }
                let _ = write!(out, "{id}");
            }
            out.push('\n');
        }
        out
    }
}

/// Relabels ids by first appearance: the first id seen becomes 0, the next
/// new one 1, and so on.
pub fn canonical_labels(ids: &[usize]) -> Vec<usize> {
    let mut map = std::collections::HashMap::new();
    ids.iter()
        .map(|&id| {
            let next = map.len();
            *map.entry(id).or_insert(next)
        })
        .collect()
}

fn parse_numbers(line: &str) -> Option<Vec<usize>> {
    line.split(' ')
        .map(|t| {
            if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
                None
            } else {
                t.parse().ok()
            }
        })
        .collect()
}
