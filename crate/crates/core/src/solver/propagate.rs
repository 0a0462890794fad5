//! Deduction rules over rows, columns and parks ("units").
//!
//! Rules applied until nothing changes:
//! - adjacency: every neighbour of a tree is excluded;
//! - saturation: a unit holding its quota excludes its remaining cells;
//! - exhaustion: a unit whose open cells exactly fill its quota gets trees
//!   everywhere; generalized to runs, so that an odd run of `2k - 1` open
//!   cells in one line that must take `k` trees is filled at alternate cells;
//! - confinement: if all open cells of a park lie in one line and the park
//!   needs as many trees as that line, the rest of the line is excluded, and
//!   symmetrically for a line whose open cells all lie in one park;
//! - starvation: a cell is excluded if a tree there would leave some nearly
//!   decided unit with fewer open cells than it still needs, counting the
//!   cell's neighbours and the cells of every unit the tree would complete.

use crate::geom::Cell;
use crate::puzzle::Puzzle;

/// Per-cell knowledge: blank, known tree, or known empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellState {
    Unknown,
    Tree,
    Excluded,
}

/// The state cannot be extended to a solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Contradiction;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum UnitKind {
    Row(usize),
    Col(usize),
    Park(usize),
}

#[derive(Debug)]
pub(crate) struct Unit {
    pub kind: UnitKind,
    pub quota: u32,
    /// Row-major cell indices.
    pub cells: Vec<usize>,
}

/// Static unit structure of one puzzle.
#[derive(Debug)]
pub(crate) struct Engine {
    pub m: usize,
    pub n: usize,
    pub units: Vec<Unit>,
    pub cell_units: Vec<[usize; 3]>,
}

/// Mutable search state with per-unit counters.
#[derive(Debug, Clone)]
pub(crate) struct State {
    pub cells: Vec<CellState>,
    pub trees: Vec<u32>,
    pub open: Vec<u32>,
    dirty: Vec<bool>,
    queue: Vec<usize>,
}

impl Engine {
    pub fn new(puzzle: &Puzzle) -> Self {
        let dims = puzzle.dims();
        let (m, n) = (dims.m, dims.n);
        let q = puzzle.quota();
        let mut units = Vec::with_capacity(2 * m + n);
        for row in 0..m {
            units.push(Unit {
                kind: UnitKind::Row(row),
                quota: q.r() as u32,
                cells: (0..n).map(|c| row * n + c).collect(),
            });
        }
        for col in 0..n {
            units.push(Unit {
                kind: UnitKind::Col(col),
                quota: q.c() as u32,
                cells: (0..m).map(|r| r * n + col).collect(),
            });
        }
        for (park, cells) in puzzle.park_cells().into_iter().enumerate() {
            units.push(Unit {
                kind: UnitKind::Park(park),
                quota: q.r() as u32,
                cells: cells.iter().map(|c| c.row * n + c.col).collect(),
            });
        }
        let cell_units = (0..m * n)
            .map(|i| [i / n, m + i % n, m + n + puzzle.park_ids()[i]])
            .collect();
        Self {
            m,
            n,
            units,
            cell_units,
        }
    }

    pub fn cell(&self, i: usize) -> Cell {
        Cell::new(i / self.n, i % self.n)
    }

    /// A state with all cells unknown, or seeded from `cells`.
    pub fn state(&self, cells: Option<&[CellState]>) -> Result<State, Contradiction> {
        let len = self.m * self.n;
        let mut st = State {
            cells: vec![CellState::Unknown; len],
            trees: vec![0; self.units.len()],
            open: self.units.iter().map(|u| u.cells.len() as u32).collect(),
            dirty: vec![false; self.units.len()],
            queue: Vec::new(),
        };
        for u in 0..self.units.len() {
            st.mark(u);
        }
        if let Some(seed) = cells {
            for (i, &s) in seed.iter().enumerate() {
                match s {
                    CellState::Unknown => {}
                    CellState::Tree => self.set_tree(&mut st, i)?,
                    CellState::Excluded => self.exclude(&mut st, i)?,
                }
            }
        }
        Ok(st)
    }

    pub fn set_tree(&self, st: &mut State, i: usize) -> Result<(), Contradiction> {
        match st.cells[i] {
            CellState::Tree => return Ok(()),
            CellState::Excluded => return Err(Contradiction),
            CellState::Unknown => {}
        }
        st.cells[i] = CellState::Tree;
        for &u in &self.cell_units[i] {
            st.trees[u] += 1;
            st.open[u] -= 1;
            st.mark(u);
        }
        let (row, col) = (i / self.n, i % self.n);
        for r in row.saturating_sub(1)..=(row + 1).min(self.m - 1) {
            for c in col.saturating_sub(1)..=(col + 1).min(self.n - 1) {
                let j = r * self.n + c;
                if j != i {
                    self.exclude(st, j)?;
                }
            }
        }
        Ok(())
    }

    pub fn exclude(&self, st: &mut State, i: usize) -> Result<(), Contradiction> {
        match st.cells[i] {
            CellState::Excluded => Ok(()),
            CellState::Tree => Err(Contradiction),
            CellState::Unknown => {
                st.cells[i] = CellState::Excluded;
                for &u in &self.cell_units[i] {
                    st.open[u] -= 1;
                    st.mark(u);
                }
                Ok(())
            }
        }
    }

    /// Runs every rule to a fixed point. Returns the number of unit
    /// inspections performed.
    pub fn propagate(&self, st: &mut State) -> Result<u64, Contradiction> {
        let mut steps = 0u64;
        loop {
            while let Some(u) = st.queue.pop() {
                st.dirty[u] = false;
                steps += 1;
                self.apply(st, u)?;
            }
            // Confinement compares two different units, so a change in one
            // may enable a rule on another that was not marked. Sweep once
            // more; stop when a sweep changes nothing.
            for u in 0..self.units.len() {
                st.mark(u);
            }
            let before = st.open.iter().map(|&x| x as u64).sum::<u64>();
            while let Some(u) = st.queue.pop() {
                st.dirty[u] = false;
                steps += 1;
                self.apply(st, u)?;
            }
            for u in 0..self.units.len() {
                steps += 1;
                self.starve(st, u)?;
            }
            let after = st.open.iter().map(|&x| x as u64).sum::<u64>();
            if after == before {
                return Ok(steps);
            }
        }
    }

    fn apply(&self, st: &mut State, u: usize) -> Result<(), Contradiction> {
        let unit = &self.units[u];
        let trees = st.trees[u];
        let open = st.open[u];
        if trees > unit.quota || trees + open < unit.quota {
            return Err(Contradiction);
        }
        if open == 0 {
            return Ok(());
        }
        let need = unit.quota - trees;
        if need == 0 {
            for k in 0..unit.cells.len() {
                let i = self.units[u].cells[k];
                if st.cells[i] == CellState::Unknown {
                    self.exclude(st, i)?;
                }
            }
            return Ok(());
        }
        if open == need {
            for k in 0..unit.cells.len() {
                let i = self.units[u].cells[k];
                if st.cells[i] == CellState::Unknown {
                    self.set_tree(st, i)?;
                }
            }
            return Ok(());
        }
        self.pack_runs(st, u, need)?;
        if st.trees[u] == trees && st.open[u] == open {
            self.confine(st, u, need)?;
        }
        Ok(())
    }

    fn open_cells(&self, st: &State, u: usize) -> Vec<usize> {
        self.units[u]
            .cells
            .iter()
            .copied()
            .filter(|&i| st.cells[i] == CellState::Unknown)
            .collect()
    }

    /// Capacity of the open cells as runs of consecutive cells. When the
    /// cells sit in one line the bound is exact and forces odd runs.
    fn pack_runs(&self, st: &mut State, u: usize, need: u32) -> Result<(), Contradiction> {
        let open = self.open_cells(st, u);
        let n = self.n;
        let same_row = open.iter().all(|&i| i / n == open[0] / n);
        let same_col = open.iter().all(|&i| i % n == open[0] % n);
        // Runs are measured along rows unless everything is in one column.
        let mut keyed: Vec<(usize, usize)> = if same_col && !same_row {
            open.iter().map(|&i| (i % n, i / n)).collect()
        } else {
            open.iter().map(|&i| (i / n, i % n)).collect()
        };
        keyed.sort_unstable();
        let mut runs: Vec<(usize, usize, usize)> = Vec::new(); // (line, start, len)
        for &(line, pos) in &keyed {
            match runs.last_mut() {
                Some((l, s, len)) if *l == line && *s + *len == pos => *len += 1,
                _ => runs.push((line, pos, 1)),
            }
        }
        let capacity: usize = runs.iter().map(|&(_, _, len)| len.div_ceil(2)).sum();
        if capacity < need as usize {
            return Err(Contradiction);
        }
        if capacity == need as usize && (same_row || same_col) {
            for (line, start, len) in runs {
                if len % 2 == 1 {
                    for k in (0..len).step_by(2) {
                        let pos = start + k;
                        let i = if same_col && !same_row {
                            pos * n + line
                        } else {
                            line * n + pos
                        };
                        self.set_tree(st, i)?;
                    }
                }
            }
        }
        Ok(())
    }

    fn confine(&self, st: &mut State, u: usize, need: u32) -> Result<(), Contradiction> {
        let open = self.open_cells(st, u);
        let first = self.cell_units[open[0]];
        match self.units[u].kind {
            UnitKind::Park(_) => {
                for (axis, &line) in first.iter().enumerate() {
                    if open.iter().all(|&i| self.cell_units[i][axis] == line) {
                        let line_need = self.units[line]
                            .quota
                            .checked_sub(st.trees[line])
                            .ok_or(Contradiction)?;
                        if need > line_need {
                            return Err(Contradiction);
                        }
                        if need == line_need {
                            self.exclude_outside(st, line, u)?;
                        }
                    }
                }
            }
            UnitKind::Row(_) | UnitKind::Col(_) => {
                let park = first[2];
                if open.iter().all(|&i| self.cell_units[i][2] == park) {
                    let park_need = self.units[park]
                        .quota
                        .checked_sub(st.trees[park])
                        .ok_or(Contradiction)?;
                    if need > park_need {
                        return Err(Contradiction);
                    }
                    if need == park_need {
                        self.exclude_outside(st, park, u)?;
                    }
                }
            }
        }
        Ok(())
    }

    fn need(&self, st: &State, u: usize) -> Result<u32, Contradiction> {
        self.units[u]
            .quota
            .checked_sub(st.trees[u])
            .ok_or(Contradiction)
    }

    fn neighbours(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        let (row, col) = (i / self.n, i % self.n);
        (row.saturating_sub(1)..=(row + 1).min(self.m - 1))
            .flat_map(move |r| {
                (col.saturating_sub(1)..=(col + 1).min(self.n - 1)).map(move |c| r * self.n + c)
            })
            .filter(move |&j| j != i)
    }

    /// Excludes every cell whose tree would leave unit `u` short. Only units
    /// with few open cells are examined, which keeps the candidate set small.
    fn starve(&self, st: &mut State, u: usize) -> Result<(), Contradiction> {
        let need = self.need(st, u)?;
        let open = self.open_cells(st, u);
        if need == 0 || open.len() > 2 * need as usize + 2 {
            return Ok(());
        }
        // A tree kills a cell of `u` by touching it or by completing a unit
        // the two cells share.
        let mut candidates: Vec<usize> = Vec::new();
        for &i in &open {
            candidates.extend(self.neighbours(i));
            for &v in &self.cell_units[i] {
                if v != u && self.need(st, v)? == 1 {
                    candidates.extend(self.units[v].cells.iter().copied());
                }
            }
        }
        candidates.sort_unstable();
        candidates.dedup();
        for x in candidates {
            if st.cells[x] != CellState::Unknown {
                continue;
            }
            let completes: Vec<usize> = self.cell_units[x]
                .iter()
                .copied()
                .filter(|&v| self.units[v].quota == st.trees[v] + 1)
                .collect();
            let (xr, xc) = (x / self.n, x % self.n);
            let survivors = open
                .iter()
                .filter(|&&i| {
                    let touching = (i / self.n).abs_diff(xr) <= 1 && (i % self.n).abs_diff(xc) <= 1;
                    let completed = self.cell_units[i].iter().any(|v| completes.contains(v));
                    !touching && !completed
                })
                .count() as u32;
            let inside = self.cell_units[x].contains(&u);
            if survivors + u32::from(inside) < need {
                self.exclude(st, x)?;
            }
        }
        Ok(())
    }

    /// Excludes the open cells of `target` that do not belong to `keep`.
    fn exclude_outside(
        &self,
        st: &mut State,
        target: usize,
        keep: usize,
    ) -> Result<(), Contradiction> {
        let slot = match self.units[keep].kind {
            UnitKind::Row(_) => 0,
            UnitKind::Col(_) => 1,
            UnitKind::Park(_) => 2,
        };
        for k in 0..self.units[target].cells.len() {
            let i = self.units[target].cells[k];
            if st.cells[i] == CellState::Unknown && self.cell_units[i][slot] != keep {
                self.exclude(st, i)?;
            }
        }
        Ok(())
    }
}

impl State {
    fn mark(&mut self, u: usize) {
        if !self.dirty[u] {
            self.dirty[u] = true;
            self.queue.push(u);
        }
    }
}

/// Applies the deduction rules to `state` (row-major, one entry per cell)
/// and returns their fixed point.
pub fn propagate(puzzle: &Puzzle, state: &[CellState]) -> Result<Vec<CellState>, Contradiction> {
    assert_eq!(
        state.len(),
        puzzle.dims().cells(),
        "state does not match the board"
    );
    let engine = Engine::new(puzzle);
    let mut st = engine.state(Some(state))?;
    engine.propagate(&mut st)?;
    Ok(st.cells)
}
