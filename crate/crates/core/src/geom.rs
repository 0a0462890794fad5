//! Board geometry shared by every module: quotas, dimensions, cells and the
//! kings-move adjacency rule.

use std::fmt;

use num_integer::Integer;

/// Tree quotas of a `(c, r)`-tree puzzle: `c` trees per column, `r` per row
/// and per park.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Quota {
    c: usize,
    r: usize,
}

impl Quota {
    /// Returns `None` unless both quotas are positive.
    pub fn new(c: usize, r: usize) -> Option<Self> {
        (c >= 1 && r >= 1).then_some(Self { c, r })
    }

    /// Trees per column.
    pub fn c(self) -> usize {
        self.c
    }

    /// Trees per row and per park.
    pub fn r(self) -> usize {
        self.r
    }

    /// The quota with rows and columns exchanged.
    pub fn transposed(self) -> Self {
        Self {
            c: self.r,
            r: self.c,
        }
    }

    /// Whether an `m x n` board can hold this quota (`c * n == r * m`).
    pub fn admits(self, dims: BoardDims) -> bool {
        self.c * dims.n == self.r * dims.m
    }
}

impl fmt::Display for Quota {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.c, self.r)
    }
}

/// Board size: `m` rows by `n` columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoardDims {
    pub m: usize,
    pub n: usize,
}

impl BoardDims {
    pub fn new(m: usize, n: usize) -> Self {
        Self { m, n }
    }

    pub fn cells(self) -> usize {
        self.m * self.n
    }

    pub fn contains(self, cell: Cell) -> bool {
        cell.row < self.m && cell.col < self.n
    }

    pub fn transposed(self) -> Self {
        Self {
            m: self.n,
            n: self.m,
        }
    }
}

impl fmt::Display for BoardDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.m, self.n)
    }
}

/// A board position, 0-based, row 0 at the top and column 0 at the left.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

impl Cell {
    pub const fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }

    pub fn transposed(self) -> Self {
        Self {
            row: self.col,
            col: self.row,
        }
    }

    /// Chess-style label for display, e.g. `(1, 5)` is `F2`. Only meaningful
    /// for boards up to 26 columns wide.
    pub fn chess_label(self) -> String {
        let file = if self.col < 26 {
            char::from(b'A' + self.col as u8).to_string()
        } else {
            format!("[{}]", self.col)
        };
        format!("{}{}", file, self.row + 1)
    }

    /// The up to eight cells a king could move to, clipped to `dims`.
    pub fn neighbours(self, dims: BoardDims) -> impl Iterator<Item = Cell> {
        let rows = self.row.saturating_sub(1)..=(self.row + 1).min(dims.m.saturating_sub(1));
        let cols = self.col.saturating_sub(1)..=(self.col + 1).min(dims.n.saturating_sub(1));
        rows.flat_map(move |row| cols.clone().map(move |col| Cell { row, col }))
            .filter(move |&c| c != self)
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.row, self.col)
    }
}

/// Two distinct cells touch, orthogonally or diagonally. This is the single
/// definition of tree adjacency used by the verifier, the solver and the
/// enumerator.
pub fn kings_adjacent(a: Cell, b: Cell) -> bool {
    a != b && a.row.abs_diff(b.row) <= 1 && a.col.abs_diff(b.col) <= 1
}

/// The `i`-th legal board size for a quota: `(c' i, r' i)` with
/// `c' = c / gcd(c, r)` and `r' = r / gcd(c, r)`.
pub fn valid_sizes(quota: Quota, i: usize) -> BoardDims {
    let g = quota.c.gcd(&quota.r);
    BoardDims::new(quota.c / g * i, quota.r / g * i)
}
