//! Reduction from 3-SAT to Parks puzzles.
//!
//! Every occurrence of a variable gets a variable park: one block of `2r`
//! cells in a single row whose trees sit either on the even offsets (the
//! variable is true) or on the odd offsets (false). The column quota of the
//! block is then topped up by the clause parks, which is how clauses read
//! the variables.
//!
//! Variables with several occurrences are tied together by an IFF gadget: a
//! staircase of variable parks, each one block left of and one row below
//! the previous, closed into a cycle by two coupler parks. A tree on the
//! left end of one park forbids a tree on the right end of the park below,
//! so any park that is not "false" forces everything below it to "true";
//! the couplers make the two ends equal, so the whole staircase agrees.
//!
//! Each clause has three parks. `Y` covers the first literal's block and the
//! false-side cells of the second, `B` covers the second literal's block and
//! the false-side cells of the third, and `R` covers the true-side cells of
//! all three. The false-side cells of a literal are those its variable park
//! leaves open when the literal is false. Together they complete the three
//! blocks in exactly one way when some literal is true and in no way
//! otherwise.

mod cnf;
mod layout;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::certificate::Certificate;
use crate::geom::{BoardDims, Cell, Quota};
use crate::puzzle::Puzzle;

pub use cnf::{parse_dimacs, Assignment, CnfError, CnfFormula, Literal, Occurrence};
pub use layout::{OrPart, Parity, Role, Segment, VarPart, Window};
use layout::{Plan, PlannedPark};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReduceError {
    #[error("assignment falsifies clause {0}")]
    UnsatisfiedClause(usize),
    #[error("assignment has {found} values, formula has {expected} variables")]
    AssignmentLength { expected: usize, found: usize },
    #[error("park {park} holds neither variable pattern")]
    AmbiguousPark { park: usize },
    #[error("occurrences of variable {var} disagree")]
    InconsistentOccurrences { var: usize },
}

/// Where a variable park sits and how to read it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariablePark {
    pub var: usize,
    /// `(clause, position)`; `None` for a variable that occurs nowhere.
    pub occurrence: Option<(usize, usize)>,
    pub negated: bool,
    pub park: usize,
    pub row: usize,
    pub block_start: usize,
    pub width: usize,
    /// Tree columns when the literal is true: the even offsets of the block
    /// for a plain literal, the odd ones for a negated literal.
    pub true_columns: Vec<usize>,
    pub false_columns: Vec<usize>,
}

/// Rows and columns (inclusive) spanned by one gadget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetBox {
    pub label: String,
    pub rows: (usize, usize),
    pub cols: (usize, usize),
}

/// Every park's role and home row, with per-occurrence lookups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionMap {
    pub quota: Quota,
    pub dims: BoardDims,
    pub num_vars: usize,
    pub num_clauses: usize,
    pub gray_blocks: usize,
    pub variable_parks: Vec<VariablePark>,
    pub gadgets: Vec<GadgetBox>,
    /// Role, home row and segments of each park, indexed by park id.
    pub parks: Vec<ParkInfo>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParkInfo {
    pub role: Role,
    pub row: usize,
    pub segments: Vec<Segment>,
}

/// Cells a clause park may use in a block when the literal is false: the
/// complement of the variable park's pattern in that case.
fn lit_false_window(negated: bool) -> Window {
    if negated {
        Window::OddComb
    } else {
        Window::EvenComb
    }
}

fn lit_true_window(negated: bool) -> Window {
    if negated {
        Window::EvenComb
    } else {
        Window::OddComb
    }
}

/// Gray blocks to start from: enough that stacking rarely needs more.
fn initial_gray_blocks(phi: &CnfFormula, quota: Quota) -> usize {
    (3 * phi.clauses().len()).div_ceil(quota.c()).max(1)
}

struct Planner {
    parks: Vec<PlannedPark>,
    blocks: usize,
    clause_units: Vec<Vec<usize>>,
    var_units: Vec<Vec<usize>>,
}

impl Planner {
    fn new() -> Self {
        Self {
            parks: Vec::new(),
            blocks: 0,
            clause_units: Vec::new(),
            var_units: Vec::new(),
        }
    }

    fn park(&mut self, role: Role, segments: Vec<Segment>) -> usize {
        self.parks.push(PlannedPark { role, segments });
        self.parks.len() - 1
    }

    fn full(block: usize) -> Vec<Segment> {
        vec![Segment {
            block,
            window: Window::Full,
        }]
    }

    /// Staircase plus couplers for `a >= 1` variable parks. Returns the
    /// block of each occurrence park.
    fn iff(&mut self, var: usize, a: usize) -> Vec<usize> {
        let head = self.blocks;
        let tail = head + a + 1;
        self.blocks += a + 2;
        let role = |part| Role::Variable { var, part };
        let coupler_a = self.park(
            role(VarPart::CouplerA),
            vec![
                Segment {
                    block: head,
                    window: Window::OddComb,
                },
                Segment {
                    block: tail,
                    window: Window::EvenComb,
                },
            ],
        );
        let coupler_b = self.park(
            role(VarPart::CouplerB),
            vec![
                Segment {
                    block: tail,
                    window: Window::OddComb,
                },
                Segment {
                    block: head,
                    window: Window::EvenComb,
                },
            ],
        );
        self.var_units.push(vec![coupler_a]);
        self.var_units.push(vec![coupler_b]);
        let mut stair = vec![self.park(role(VarPart::Tail), Self::full(tail))];
        let mut blocks = Vec::with_capacity(a);
        for k in 0..a {
            let block = tail - 1 - k;
            blocks.push(block);
            stair.push(self.park(role(VarPart::Occurrence(k)), Self::full(block)));
        }
        stair.push(self.park(role(VarPart::Head), Self::full(head)));
        self.var_units.push(stair);
        blocks
    }

    fn single(&mut self, var: usize, part: VarPart) -> usize {
        let block = self.blocks;
        self.blocks += 1;
        let p = self.park(Role::Variable { var, part }, Self::full(block));
        self.var_units.push(vec![p]);
        block
    }

    fn sink(&mut self, var: usize, k: usize, block: usize) {
        let p = self.park(
            Role::Variable {
                var,
                part: VarPart::Sink(k),
            },
            Self::full(block),
        );
        self.var_units.push(vec![p]);
    }

    fn finish(self, quota: Quota, gray_blocks: usize) -> Plan {
        let mut units = self.clause_units;
        units.extend(self.var_units);
        Plan {
            quota,
            func_blocks: self.blocks,
            parks: self.parks,
            units,
            gray_blocks,
        }
    }
}

/// Compiles `phi` into a puzzle whose solutions correspond one to one to the
/// satisfying assignments of `phi`.
pub fn reduce(phi: &CnfFormula, quota: Quota) -> (Puzzle, ReductionMap) {
    let one_tree = quota.c() == 1 && quota.r() == 1;
    let mut planner = Planner::new();
    let mut occ_block: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for var in 0..phi.num_vars() {
        let occs = phi.occurrences_of(var);
        match occs.len() {
            0 => {
                let block = planner.single(var, VarPart::Free);
                planner.sink(var, 0, block);
            }
            1 if one_tree => {
                let block = planner.single(var, VarPart::Occurrence(0));
                occ_block.insert((occs[0].clause, occs[0].position), block);
            }
            a => {
                for (o, block) in occs.iter().zip(planner.iff(var, a)) {
                    occ_block.insert((o.clause, o.position), block);
                }
            }
        }
    }
    for (clause, lits) in phi.clauses().iter().enumerate() {
        let b = |pos: usize| occ_block[&(clause, pos)];
        let seg = |pos: usize, window| Segment {
            block: b(pos),
            window,
        };
        let role = |part| Role::Clause { clause, part };
        let y = planner.park(
            role(OrPart::Y),
            vec![
                seg(0, Window::Full),
                seg(1, lit_false_window(lits[1].negated)),
            ],
        );
        let bb = planner.park(
            role(OrPart::B),
            vec![
                seg(1, Window::Full),
                seg(2, lit_false_window(lits[2].negated)),
            ],
        );
        let r = planner.park(
            role(OrPart::R),
            (0..3)
                .map(|p| seg(p, lit_true_window(lits[p].negated)))
                .collect(),
        );
        planner.clause_units.extend([vec![y], vec![bb], vec![r]]);
    }
    let plan = planner.finish(quota, initial_gray_blocks(phi, quota));
    let built = layout::build(&plan);
    let map = make_map(phi, quota, &built);
    (built.puzzle, map)
}

/// Largest board `reduce` may emit for `phi`, row and column bounds taken
/// separately. A variable with `a` occurrences accounts for at most
/// `8(c-1) + 4 + a` rows and `4r + 2ra` columns, a clause for at most
/// `3 + 6c` rows and `6r` columns, and the white frame with its gray block
/// for `2c` rows and `2r` columns.
pub fn size_bound(phi: &CnfFormula, quota: Quota) -> BoardDims {
    let (c, r) = (quota.c(), quota.r());
    let clauses = phi.clauses().len();
    let (mut m, mut n) = (2 * c + clauses * (3 + 6 * c), 2 * r + clauses * 6 * r);
    for v in 0..phi.num_vars() {
        let a = phi.occurrences_of(v).len();
        m += 8 * (c - 1) + 4 + a;
        n += 4 * r + 2 * r * a;
    }
    BoardDims::new(m, n)
}

/// One IFF gadget with `a` variable parks, each paired with a sink park
/// that takes the opposite pattern, inside the usual white frame and gray
/// blocks. It has exactly two solutions.
pub fn iff_harness(quota: Quota, a: usize) -> Puzzle {
    assert!(a >= 1, "the gadget needs at least one variable park");
    let mut planner = Planner::new();
    let blocks = planner.iff(0, a);
    for (k, block) in blocks.into_iter().enumerate() {
        planner.sink(0, k, block);
    }
    layout::build(&planner.finish(quota, 1)).puzzle
}

fn make_map(phi: &CnfFormula, quota: Quota, built: &layout::Built) -> ReductionMap {
    let r = quota.r();
    let width = 2 * r;
    let mut variable_parks = Vec::new();
    let occs: Vec<Vec<Occurrence>> = (0..phi.num_vars()).map(|v| phi.occurrences_of(v)).collect();
    for (id, p) in built.parks.iter().enumerate() {
        let Role::Variable { var, part } = p.role else {
            continue;
        };
        let (occurrence, negated) = match part {
            VarPart::Occurrence(k) => {
                let o = occs[var][k];
                (Some((o.clause, o.position)), o.literal.negated)
            }
            VarPart::Free => (None, false),
            _ => continue,
        };
        let block_start = p.segments[0].block * width;
        let even: Vec<usize> = (0..r).map(|k| block_start + 2 * k).collect();
        let odd: Vec<usize> = (0..r).map(|k| block_start + 2 * k + 1).collect();
        let (true_columns, false_columns) = if negated { (odd, even) } else { (even, odd) };
        variable_parks.push(VariablePark {
            var,
            occurrence,
            negated,
            park: id,
            row: p.row,
            block_start,
            width,
            true_columns,
            false_columns,
        });
    }
    variable_parks.sort_by_key(|v| (v.var, v.occurrence.map_or((0, 0), |o| o)));

    let mut boxes: BTreeMap<(u8, usize), GadgetBox> = BTreeMap::new();
    for p in &built.parks {
        let key = match p.role {
            Role::Clause { clause, .. } => (0, clause),
            Role::Variable { var, .. } => (1, var),
            _ => continue,
        };
        let lo = p.runs[0].0;
        let hi = p.runs[p.runs.len() - 1].1;
        let label = match key {
            (0, j) => format!("or{j}"),
            (_, v) => match occs[v].len() {
                0 => format!("free{v}"),
                1 if quota.c() == 1 && quota.r() == 1 => format!("var{v}"),
                _ => format!("iff{v}"),
            },
        };
        let e = boxes.entry(key).or_insert(GadgetBox {
            label,
            rows: (p.row, p.row),
            cols: (lo, hi),
        });
        e.rows = (e.rows.0.min(p.row), e.rows.1.max(p.row));
        e.cols = (e.cols.0.min(lo), e.cols.1.max(hi));
    }

    ReductionMap {
        quota,
        dims: built.puzzle.dims(),
        num_vars: phi.num_vars(),
        num_clauses: phi.clauses().len(),
        gray_blocks: built.gray_blocks,
        variable_parks,
        gadgets: boxes.into_values().collect(),
        parks: built
            .parks
            .iter()
            .map(|p| ParkInfo {
                role: p.role,
                row: p.row,
                segments: p.segments.clone(),
            })
            .collect(),
    }
}

impl ReductionMap {
    /// Text form, one record per line:
    ///
    /// ```text
    /// parks-map v1
    /// quota C R
    /// dims M N
    /// formula VARS CLAUSES
    /// occurrence VAR CLAUSE POSITION NEGATED PARK ROW true COLS false COLS
    /// free VAR PARK ROW true COLS false COLS
    /// gadget LABEL ROW_LO ROW_HI COL_LO COL_HI
    /// ```
    ///
    /// `NEGATED` is 0 or 1 and `COLS` a comma-separated column list.
    pub fn serialize(&self) -> String {
        let cols = |v: &[usize]| {
            v.iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        let mut out = String::from("parks-map v1\n");
        let _ = writeln!(out, "quota {} {}", self.quota.c(), self.quota.r());
        let _ = writeln!(out, "dims {} {}", self.dims.m, self.dims.n);
        let _ = writeln!(out, "formula {} {}", self.num_vars, self.num_clauses);
        for v in &self.variable_parks {
            match v.occurrence {
                Some((clause, position)) => {
                    let _ = writeln!(
                        out,
                        "occurrence {} {} {} {} {} {} true {} false {}",
                        v.var,
                        clause,
                        position,
                        u8::from(v.negated),
                        v.park,
                        v.row,
                        cols(&v.true_columns),
                        cols(&v.false_columns)
                    );
                }
                None => {
                    let _ = writeln!(
                        out,
                        "free {} {} {} true {} false {}",
                        v.var,
                        v.park,
                        v.row,
                        cols(&v.true_columns),
                        cols(&v.false_columns)
                    );
                }
            }
        }
        for g in &self.gadgets {
            let _ = writeln!(
                out,
                "gadget {} {} {} {} {}",
                g.label, g.rows.0, g.rows.1, g.cols.0, g.cols.1
            );
        }
        out
    }

    fn blocks(&self) -> usize {
        self.dims.n / (2 * self.quota.r())
    }

    /// The occurrence parks of one clause, by position.
    fn clause_parks(&self, clause: usize) -> [&VariablePark; 3] {
        let mut found: [Option<&VariablePark>; 3] = [None; 3];
        for v in &self.variable_parks {
            if let Some((c, p)) = v.occurrence {
                if c == clause {
                    found[p] = Some(v);
                }
            }
        }
        found.map(|v| v.expect("every clause slot has a variable park"))
    }
}

/// Plants the trees that correspond to a satisfying assignment.
pub fn assignment_to_certificate(
    map: &ReductionMap,
    puzzle: &Puzzle,
    a: &Assignment,
) -> Result<Certificate, ReduceError> {
    if a.len() != map.num_vars {
        return Err(ReduceError::AssignmentLength {
            expected: map.num_vars,
            found: a.len(),
        });
    }
    debug_assert_eq!(puzzle.dims(), map.dims);
    let r = map.quota.r();
    let width = 2 * r;
    let pattern = |row: usize, block: usize, parity: Parity| -> Vec<Cell> {
        (0..r)
            .map(|k| Cell::new(row, block * width + parity.offset() + 2 * k))
            .collect()
    };
    let var_parity = |var: usize| {
        if a.get(var) {
            Parity::Even
        } else {
            Parity::Odd
        }
    };
    let mut trees = Vec::with_capacity(map.dims.m * r);
    for p in &map.parks {
        let seg = |i: usize| p.segments[i].block;
        let cells = match p.role {
            Role::White => pattern(0, map.blocks() - 1, Parity::Even),
            Role::Filler { block, parity } | Role::Gray { block, parity } => {
                pattern(p.row, block, parity)
            }
            Role::Variable { var, part } => match part {
                VarPart::Head | VarPart::Tail | VarPart::Occurrence(_) | VarPart::Free => {
                    pattern(p.row, seg(0), var_parity(var))
                }
                VarPart::Sink(_) => pattern(p.row, seg(0), var_parity(var).flip()),
                // Segments are [odd(head), even(tail)] and [odd(tail), even(head)] combs.
                VarPart::CouplerA | VarPart::CouplerB => {
                    if a.get(var) {
                        pattern(p.row, seg(0), Parity::Odd)
                    } else {
                        pattern(p.row, seg(1), Parity::Even)
                    }
                }
            },
            Role::Clause { clause, part } => {
                let occ = map.clause_parks(clause);
                let lit = |i: usize| a.get(occ[i].var) != occ[i].negated;
                // The cells each block still needs: opposite to its variable park.
                let fill = |i: usize| {
                    let block = occ[i].block_start / width;
                    pattern(p.row, block, var_parity(occ[i].var).flip())
                };
                let target = if lit(2) {
                    match part {
                        OrPart::R => 2,
                        OrPart::B => 1,
                        OrPart::Y => 0,
                    }
                } else if lit(1) {
                    match part {
                        OrPart::R => 1,
                        OrPart::B => 2,
                        OrPart::Y => 0,
                    }
                } else if lit(0) {
                    match part {
                        OrPart::R => 0,
                        OrPart::Y => 1,
                        OrPart::B => 2,
                    }
                } else {
                    return Err(ReduceError::UnsatisfiedClause(clause));
                };
                fill(target)
            }
        };
        trees.extend(cells);
    }
    Ok(Certificate::from_cells(trees).expect("parks plant distinct cells"))
}

/// Reads the assignment back from the variable parks of a solution.
pub fn certificate_to_assignment(
    map: &ReductionMap,
    cert: &Certificate,
) -> Result<Assignment, ReduceError> {
    let mut values: Vec<Option<bool>> = vec![None; map.num_vars];
    for v in &map.variable_parks {
        let held: Vec<usize> = cert
            .trees()
            .iter()
            .filter(|t| t.row == v.row && (v.block_start..v.block_start + v.width).contains(&t.col))
            .map(|t| t.col)
            .collect();
        let literal = if held == v.true_columns {
            true
        } else if held == v.false_columns {
            false
        } else {
            return Err(ReduceError::AmbiguousPark { park: v.park });
        };
        let value = literal != v.negated;
        match values[v.var] {
            Some(prev) if prev != value => {
                return Err(ReduceError::InconsistentOccurrences { var: v.var })
            }
            _ => values[v.var] = Some(value),
        }
    }
    Ok(Assignment::new(
        values
            .into_iter()
            .map(|v| v.expect("every variable has a park"))
            .collect(),
    ))
}
