//! Exact solver: deduction to a fixed point, then depth-first branching.
//!
//! Branching picks the unsatisfied unit with the fewest open cells (ties to
//! the earlier unit: rows, then columns, then parks) and splits on its first
//! open cell in (row, col) order, trying a tree before an empty cell. The
//! search is deterministic and solutions are returned sorted.

mod propagate;

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use thiserror::Error;

use crate::certificate::Certificate;
use crate::puzzle::Puzzle;
use propagate::{Engine, State};

pub use propagate::{propagate, CellState, Contradiction};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes_expanded: u64,
    pub propagation_steps: u64,
    pub max_depth: usize,
    pub solutions_found: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SolveOutcome {
    /// Sorted, without repeats.
    pub solutions: Vec<Certificate>,
    pub stats: SearchStats,
    /// False when the search stopped at the cap or the deadline before
    /// proving that no further solutions exist.
    pub complete: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    /// The time budget ran out; the partial result is attached.
    #[error("deadline exceeded after {} nodes", .partial.stats.nodes_expanded)]
    DeadlineExceeded { partial: SolveOutcome },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveOptions {
    /// Stop after this many solutions; `None` for all of them.
    pub cap: Option<usize>,
    pub deadline: Option<Duration>,
}

impl SolveOptions {
    /// Enough to decide uniqueness: stop at the second solution.
    pub fn uniqueness() -> Self {
        Self {
            cap: Some(2),
            deadline: None,
        }
    }

    pub fn all() -> Self {
        Self {
            cap: None,
            deadline: None,
        }
    }
}

struct Search<'e> {
    engine: &'e Engine,
    deadline: Option<Instant>,
    cap: Option<u64>,
    stats: SearchStats,
    keep: bool,
    found: Vec<Certificate>,
    timed_out: bool,
    capped: bool,
}

impl Search<'_> {
    fn stop(&self) -> bool {
        self.timed_out || self.capped
    }

    fn run(&mut self, mut st: State, depth: usize) {
        if self.stop() {
            return;
        }
        if let Some(d) = self.deadline {
            if self.stats.nodes_expanded.is_multiple_of(64) && Instant::now() >= d {
                self.timed_out = true;
                return;
            }
        }
        self.stats.nodes_expanded += 1;
        self.stats.max_depth = self.stats.max_depth.max(depth);
        match self.engine.propagate(&mut st) {
            Ok(steps) => self.stats.propagation_steps += steps,
            Err(Contradiction) => return,
        }
        let Some(cell) = self.branch_cell(&st) else {
            // Every cell decided and every unit consistent: a solution.
            self.stats.solutions_found += 1;
            if self.keep {
                let trees = (0..st.cells.len())
                    .filter(|&i| st.cells[i] == CellState::Tree)
                    .map(|i| self.engine.cell(i));
                self.found
                    .push(Certificate::from_cells(trees).expect("cells are distinct"));
            }
            if self.cap.is_some_and(|c| self.stats.solutions_found >= c) {
                self.capped = true;
            }
            return;
        };
        let mut with_tree = st.clone();
        if self.engine.set_tree(&mut with_tree, cell).is_ok() {
            self.run(with_tree, depth + 1);
        }
        if self.engine.exclude(&mut st, cell).is_ok() {
            self.run(st, depth + 1);
        }
    }

    fn branch_cell(&self, st: &State) -> Option<usize> {
        let engine = self.engine;
        let best = (0..engine.units.len())
            .filter(|&u| st.open[u] > 0)
            .min_by_key(|&u| (st.open[u], u))?;
        engine.units[best]
            .cells
            .iter()
            .copied()
            .find(|&i| st.cells[i] == CellState::Unknown)
    }
}

/// Finds up to `opts.cap` solutions.
pub fn solve(puzzle: &Puzzle, opts: SolveOptions) -> Result<SolveOutcome, SolveError> {
    let engine = Engine::new(puzzle);
    let (mut found, stats, timed_out, capped) = run_search(&engine, opts, true);
    found.sort();
    let outcome = SolveOutcome {
        solutions: found,
        stats,
        complete: !timed_out && !capped,
    };
    if timed_out {
        Err(SolveError::DeadlineExceeded { partial: outcome })
    } else {
        Ok(outcome)
    }
}

/// Counts every solution without storing them.
pub fn count_solutions(
    puzzle: &Puzzle,
    deadline: Option<Duration>,
) -> Result<(BigUint, SearchStats), SolveError> {
    let engine = Engine::new(puzzle);
    let opts = SolveOptions {
        cap: None,
        deadline,
    };
    let (_, stats, timed_out, _) = run_search(&engine, opts, false);
    if timed_out {
        return Err(SolveError::DeadlineExceeded {
            partial: SolveOutcome {
                solutions: Vec::new(),
                stats,
                complete: false,
            },
        });
    }
    Ok((BigUint::from(stats.solutions_found), stats))
}

fn run_search(
    engine: &Engine,
    opts: SolveOptions,
    keep: bool,
) -> (Vec<Certificate>, SearchStats, bool, bool) {
    let mut s = Search {
        engine,
        deadline: opts.deadline.map(|d| Instant::now() + d),
        cap: opts.cap.map(|c| c as u64),
        stats: SearchStats::default(),
        keep,
        found: Vec::new(),
        timed_out: false,
        capped: false,
    };
    if opts.cap == Some(0) {
        return (Vec::new(), s.stats, false, true);
    }
    if let Ok(st) = engine.state(None) {
        s.run(st, 0);
    }
    (s.found, s.stats, s.timed_out, s.capped)
}

/// Whether deduction alone, from an empty board, decides every cell.
pub fn solved_by_propagation(puzzle: &Puzzle) -> Option<Certificate> {
    let blank = vec![CellState::Unknown; puzzle.dims().cells()];
    let fixed = propagate(puzzle, &blank).ok()?;
    if fixed.contains(&CellState::Unknown) {
        return None;
    }
    let n = puzzle.dims().n;
    let trees = (0..fixed.len())
        .filter(|&i| fixed[i] == CellState::Tree)
        .map(|i| crate::geom::Cell::new(i / n, i % n));
    let cert = Certificate::from_cells(trees).ok()?;
    crate::verify::verify(puzzle, &cert).valid.then_some(cert)
}
