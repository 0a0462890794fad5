//! Certificates: proposed solutions as a canonical list of tree cells.
//!
//! Text format is one `row col` pair per line, 0-based, in (row, col) order.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::geom::Cell;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("line {line}: expected `row col`, got {text:?}")]
    MalformedLine { line: usize, text: String },
    #[error("duplicate tree at {0}")]
    DuplicateCell(Cell),
}

/// A set of tree positions, kept sorted by (row, col) and free of duplicates.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Certificate {
    trees: Vec<Cell>,
}

impl Certificate {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sorts the cells canonically; fails on the first duplicate.
    pub fn from_cells(cells: impl IntoIterator<Item = Cell>) -> Result<Self, CertificateError> {
        let mut trees: Vec<Cell> = cells.into_iter().collect();
        trees.sort_unstable();
        if let Some(w) = trees.windows(2).find(|w| w[0] == w[1]) {
            return Err(CertificateError::DuplicateCell(w[0]));
        }
        Ok(Self { trees })
    }

    /// For callers that already hold a set.
    pub fn from_set(cells: &BTreeSet<Cell>) -> Self {
        Self {
            trees: cells.iter().copied().collect(),
        }
    }

    pub fn trees(&self) -> &[Cell] {
        &self.trees
    }

    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    pub fn contains(&self, cell: Cell) -> bool {
        self.trees.binary_search(&cell).is_ok()
    }

    /// Mirror image with rows and columns exchanged.
    pub fn transposed(&self) -> Self {
        let mut trees: Vec<Cell> = self.trees.iter().map(|c| c.transposed()).collect();
        trees.sort_unstable();
        Self { trees }
    }

    pub fn parse(text: &str) -> Result<Self, CertificateError> {
        let mut cells = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let malformed = || CertificateError::MalformedLine {
                line: i + 1,
                text: line.to_owned(),
            };
            let mut parts = line.split_whitespace();
            let row = parts
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(malformed)?;
            let col = parts
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(malformed)?;
            if parts.next().is_some() {
                return Err(malformed());
            }
            cells.push(Cell::new(row, col));
        }
        Self::from_cells(cells)
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for c in &self.trees {
            let _ = writeln!(out, "{} {}", c.row, c.col);
        }
        out
    }
}
