//! Placement of gadget parks on the board.
//!
//! The board is cut into vertical blocks of `2r` columns: first the
//! functional blocks used by the gadgets, then `K` gray blocks. Each row
//! below the top one is the home row of exactly one park, and that park's
//! cells in its home row (its runs) are the only places a tree can go: every
//! other cell a park owns (connectors between runs, absorbed pockets) lies
//! strictly below its home row. Counting trees row by row from the top then
//! shows each park fills its quota inside its home row.
//!
//! Inside one block the useful tree patterns are the even offsets ("T") and
//! the odd offsets ("F"). Windows of `2r - 1` cells force one of the two:
//! an even window must take every even offset, an odd window every odd one.
//! Parks that spread their trees over several blocks use combs instead,
//! which hold the cells of one parity only; a partly used window could
//! otherwise mix the two patterns.
//! Fillers and grays are single windows, so their trees are fixed; they
//! give every column of their block `c - 1` (functional) or `c` (gray)
//! trees. The last gray block lacks one even gray; the white park, which
//! owns the whole top row, makes up for it.
//!
//! Rows whose runs come within one column of each other interact. Gadget
//! units are stacked greedily, taking the earliest one that neither
//! interacts with the row above nor crosses its connector; when none fits,
//! a filler or gray row is slotted in first. Whatever is left goes to the
//! bottom.

use crate::geom::{BoardDims, Quota};
use crate::puzzle::Puzzle;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Window {
    /// All `2r` columns of the block.
    Full,
    /// Offsets `0..=2r-2`; holding `r` trees forces the even offsets.
    Even,
    /// Offsets `1..=2r-1`; holding `r` trees forces the odd offsets.
    Odd,
    /// Only the `r` even offsets, as separate cells.
    EvenComb,
    /// Only the `r` odd offsets, as separate cells.
    OddComb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn offset(self) -> usize {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn window(self) -> Window {
        match self {
            Parity::Even => Window::Even,
            Parity::Odd => Window::Odd,
        }
    }

    pub fn comb(self) -> Window {
        match self {
            Parity::Even => Window::EvenComb,
            Parity::Odd => Window::OddComb,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Segment {
    pub block: usize,
    pub window: Window,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrPart {
    /// Whole first block plus the second literal's false-side window.
    Y,
    /// Whole second block plus the third literal's false-side window.
    B,
    /// The true-side windows of all three literals.
    R,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarPart {
    /// Leftmost staircase park, in the lowest row of the staircase.
    Head,
    /// Rightmost staircase park, in the highest row.
    Tail,
    /// The variable park of the variable's `k`-th occurrence.
    Occurrence(usize),
    /// Coupler joining the head's odd comb and the tail's even comb.
    CouplerA,
    /// Coupler joining the tail's odd comb and the head's even comb.
    CouplerB,
    /// Variable park of a variable that occurs nowhere.
    Free,
    /// Takes the complement of the `k`-th variable park's pattern.
    Sink(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Clause { clause: usize, part: OrPart },
    Variable { var: usize, part: VarPart },
    Filler { block: usize, parity: Parity },
    Gray { block: usize, parity: Parity },
    White,
}

#[derive(Debug, Clone)]
pub struct PlannedPark {
    pub role: Role,
    pub segments: Vec<Segment>,
}

/// The gadget parks, before fillers, grays and white are added.
#[derive(Debug, Clone)]
pub struct Plan {
    pub quota: Quota,
    pub func_blocks: usize,
    pub parks: Vec<PlannedPark>,
    /// Groups of parks that take consecutive rows, top to bottom.
    pub units: Vec<Vec<usize>>,
    /// Initial number of gray blocks; grown if stacking fails.
    pub gray_blocks: usize,
}

#[derive(Debug, Clone)]
pub struct BuiltPark {
    pub role: Role,
    pub row: usize,
    pub segments: Vec<Segment>,
    /// Inclusive column intervals of the park's cells in its home row.
    pub runs: Vec<(usize, usize)>,
}

#[derive(Debug, Clone)]
pub struct Built {
    pub puzzle: Puzzle,
    /// Indexed by park id.
    pub parks: Vec<BuiltPark>,
    pub gray_blocks: usize,
}

type Runs = Vec<(usize, usize)>;

fn runs_of(segments: &[Segment], r: usize) -> Runs {
    let mut iv: Runs = Vec::new();
    for s in segments {
        let base = 2 * r * s.block;
        match s.window {
            Window::Full => iv.push((base, base + 2 * r - 1)),
            Window::Even => iv.push((base, base + 2 * r - 2)),
            Window::Odd => iv.push((base + 1, base + 2 * r - 1)),
            Window::EvenComb => iv.extend((0..r).map(|k| (base + 2 * k, base + 2 * k))),
            Window::OddComb => iv.extend((0..r).map(|k| (base + 2 * k + 1, base + 2 * k + 1))),
        }
    }
    iv.sort_unstable();
    let mut merged: Runs = Vec::with_capacity(iv.len());
    for (lo, hi) in iv {
        match merged.last_mut() {
            Some(last) if lo <= last.1 + 1 => last.1 = last.1.max(hi),
            _ => merged.push((lo, hi)),
        }
    }
    merged
}

/// Runs of two neighbouring rows come within one column of each other.
fn interact(a: &Runs, b: &Runs) -> bool {
    a.iter()
        .any(|&(alo, ahi)| b.iter().any(|&(blo, bhi)| alo <= bhi + 1 && blo <= ahi + 1))
}

/// Columns a connector needs in the row below, if the park has several runs.
fn connector(runs: &Runs) -> Option<(usize, usize)> {
    (runs.len() > 1).then(|| (runs[0].1, runs[runs.len() - 1].0))
}

fn blocked_by(span: Option<(usize, usize)>, runs: &Runs) -> bool {
    span.is_some_and(|(lo, hi)| runs.iter().any(|&(a, b)| a <= hi && lo <= b))
}

/// Adds separators and white, stacks rows and paints the board. Grows the
/// number of gray blocks until the stacking succeeds.
pub fn build(plan: &Plan) -> Built {
    let mut gray = plan.gray_blocks.max(1);
    loop {
        if let Some(b) = try_build(plan, gray) {
            return b;
        }
        gray += 1;
        assert!(
            gray <= plan.gray_blocks + 4 * plan.func_blocks + 64,
            "gadget stacking does not converge"
        );
    }
}

fn try_build(plan: &Plan, gray_blocks: usize) -> Option<Built> {
    let (c, r) = (plan.quota.c(), plan.quota.r());
    let blocks = plan.func_blocks + gray_blocks;
    let dims = BoardDims::new(2 * c * blocks, 2 * r * blocks);
    let terminal = blocks - 1;

    let mut parks: Vec<PlannedPark> = plan.parks.clone();
    let mut pool = Vec::new();
    for block in 0..plan.func_blocks {
        for parity in [Parity::Even, Parity::Odd] {
            for _ in 1..c {
                pool.push(parks.len());
                parks.push(PlannedPark {
                    role: Role::Filler { block, parity },
                    segments: vec![Segment {
                        block,
                        window: parity.window(),
                    }],
                });
            }
        }
    }
    for block in plan.func_blocks..blocks {
        for parity in [Parity::Even, Parity::Odd] {
            let copies = if block == terminal && parity == Parity::Even {
                c - 1
            } else {
                c
            };
            for _ in 0..copies {
                pool.push(parks.len());
                parks.push(PlannedPark {
                    role: Role::Gray { block, parity },
                    segments: vec![Segment {
                        block,
                        window: parity.window(),
                    }],
                });
            }
        }
    }
    let runs: Vec<Runs> = parks.iter().map(|p| runs_of(&p.segments, r)).collect();

    // Row 0 is white; its trees sit in the even columns of the last block.
    let white_trees: Runs = (0..r)
        .map(|k| (2 * r * terminal + 2 * k, 2 * r * terminal + 2 * k))
        .collect();
    let mut order: Vec<usize> = Vec::with_capacity(dims.m);
    let mut used = vec![false; parks.len()];
    let mut prev: Runs = white_trees;
    let mut span: Option<(usize, usize)> = None;
    let mut pending: Vec<&Vec<usize>> = plan.units.iter().collect();
    while !pending.is_empty() {
        let fits = |prev: &Runs, span, u: &Vec<usize>| {
            !interact(prev, &runs[u[0]]) && !blocked_by(span, &runs[u[0]])
        };
        let pick = match pending.iter().position(|u| fits(&prev, span, u)) {
            Some(k) => k,
            None => {
                // No unit fits directly: slot in the first separator that
                // lets some unit follow.
                let (s, k) = pool
                    .iter()
                    .filter(|&&s| !used[s] && fits(&prev, span, &vec![s]))
                    .find_map(|&s| {
                        pending
                            .iter()
                            .position(|u| fits(&runs[s], None, u))
                            .map(|k| (s, k))
                    })?;
                used[s] = true;
                order.push(s);
                prev = runs[s].clone();
                span = None;
                k
            }
        };
        let unit = pending.remove(pick);
        for (i, &p) in unit.iter().enumerate() {
            debug_assert!(
                i == 0 || span.is_none(),
                "staircase parks have a single run"
            );
            order.push(p);
            prev = runs[p].clone();
            span = connector(&runs[p]);
        }
    }
    let rest: Vec<usize> = pool.iter().copied().filter(|&s| !used[s]).collect();
    let tail = order_leftovers(&rest, &runs, &prev, span)?;
    if rest.is_empty() && span.is_some() {
        return None;
    }
    order.extend(tail);
    debug_assert_eq!(order.len() + 1, dims.m);

    Some(paint(plan.quota, dims, parks, runs, &order, gray_blocks))
}

/// A conflict-free order for the remaining separators, by depth-first
/// search that prefers the block with the most rows still to place.
fn order_leftovers(
    rest: &[usize],
    runs: &[Runs],
    prev: &Runs,
    span: Option<(usize, usize)>,
) -> Option<Vec<usize>> {
    fn go(
        rest: &[usize],
        runs: &[Runs],
        prev: &Runs,
        span: Option<(usize, usize)>,
        used: &mut Vec<bool>,
        out: &mut Vec<usize>,
        budget: &mut u64,
    ) -> bool {
        if out.len() == rest.len() {
            return true;
        }
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        let key = |i: usize| runs[rest[i]][0].0;
        let mut cands: Vec<usize> = (0..rest.len())
            .filter(|&i| {
                !used[i] && !interact(prev, &runs[rest[i]]) && !blocked_by(span, &runs[rest[i]])
            })
            .collect();
        // Most crowded column range first, then left to right.
        let crowd = |i: usize| {
            (0..rest.len())
                .filter(|&j| !used[j] && interact(&runs[rest[i]], &runs[rest[j]]))
                .count()
        };
        cands.sort_by_key(|&i| (std::cmp::Reverse(crowd(i)), key(i), i));
        cands.dedup_by_key(|&mut i| runs[rest[i]].clone());
        for i in cands {
            used[i] = true;
            out.push(rest[i]);
            if go(rest, runs, &runs[rest[i]], None, used, out, budget) {
                return true;
            }
            out.pop();
            used[i] = false;
        }
        false
    }
    let mut used = vec![false; rest.len()];
    let mut out = Vec::with_capacity(rest.len());
    let mut budget = 200_000u64;
    go(rest, runs, prev, span, &mut used, &mut out, &mut budget).then_some(out)
}

fn paint(
    quota: Quota,
    dims: BoardDims,
    parks: Vec<PlannedPark>,
    runs: Vec<Runs>,
    order: &[usize],
    gray_blocks: usize,
) -> Built {
    let (m, n) = (dims.m, dims.n);
    const NONE: usize = usize::MAX;
    // Park ids follow home rows; white comes last.
    let white = m - 1;
    let mut owner = vec![NONE; m * n];
    let mut built: Vec<BuiltPark> = Vec::with_capacity(m);
    for (k, &p) in order.iter().enumerate() {
        let row = k + 1;
        for &(lo, hi) in &runs[p] {
            for col in lo..=hi {
                owner[row * n + col] = k;
            }
        }
        built.push(BuiltPark {
            role: parks[p].role,
            row,
            segments: parks[p].segments.clone(),
            runs: runs[p].clone(),
        });
    }
    for (k, &p) in order.iter().enumerate() {
        if let Some((lo, hi)) = connector(&runs[p]) {
            let row = k + 2;
            for col in lo..=hi {
                let cell = &mut owner[row * n + col];
                assert_eq!(*cell, NONE, "connector crosses another run");
                *cell = k;
            }
        }
    }
    built.push(BuiltPark {
        role: Role::White,
        row: 0,
        segments: Vec::new(),
        runs: vec![(0, n - 1)],
    });

    // White: the top row and every free cell reachable from it.
    let mut stack: Vec<usize> = (0..n).collect();
    for &i in &stack {
        owner[i] = white;
    }
    flood(&mut owner, &mut stack, dims, white);
    // Pockets join the park just above their first cell, which always has
    // its home row above the pocket.
    for i in 0..m * n {
        if owner[i] == NONE {
            let host = owner[i - n];
            owner[i] = host;
            stack.push(i);
            flood(&mut owner, &mut stack, dims, host);
        }
    }
    let puzzle = Puzzle::new(quota, dims, owner).expect("layout yields a legal puzzle");
    Built {
        puzzle,
        parks: built,
        gray_blocks,
    }
}

fn flood(owner: &mut [usize], stack: &mut Vec<usize>, dims: BoardDims, id: usize) {
    let n = dims.n;
    while let Some(i) = stack.pop() {
        let (row, col) = (i / n, i % n);
        let mut near = Vec::with_capacity(4);
        if row > 0 {
            near.push(i - n);
        }
        if row + 1 < dims.m {
            near.push(i + n);
        }
        if col > 0 {
            near.push(i - 1);
        }
        if col + 1 < n {
            near.push(i + 1);
        }
        for j in near {
            if owner[j] == usize::MAX {
                owner[j] = id;
                stack.push(j);
            }
        }
    }
}
