//! Independent oracles and generators shared by the integration tests. They
//! deliberately avoid the library's own search and counting code.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use parks_core::reduce::{CnfFormula, Literal};
use parks_core::{BoardDims, Cell, Certificate, Puzzle, Quota, ViolationKind};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn q(c: usize, r: usize) -> Quota {
    Quota::new(c, r).unwrap()
}

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

pub fn load_puzzle(name: &str) -> Puzzle {
    Puzzle::parse(&std::fs::read_to_string(data(name)).unwrap()).unwrap()
}

pub fn load_certificate(name: &str) -> Certificate {
    Certificate::parse(&std::fs::read_to_string(data(name)).unwrap()).unwrap()
}

/// Violation kinds with multiplicity, found by full scans and an all-pairs
/// adjacency check.
pub fn naive_violation_kinds(p: &Puzzle, trees: &[Cell]) -> BTreeMap<ViolationKind, usize> {
    let dims = p.dims();
    let (c, r) = (p.quota().c(), p.quota().r());
    let mut kinds = BTreeMap::new();
    let mut add = |k: ViolationKind| *kinds.entry(k).or_insert(0) += 1;
    let mut inside = Vec::new();
    for (i, t) in trees.iter().enumerate() {
        if t.row >= dims.m || t.col >= dims.n {
            add(ViolationKind::OutOfBounds);
        } else if trees[..i].contains(t) {
            add(ViolationKind::Duplicate);
        } else {
            inside.push(*t);
        }
    }
    for row in 0..dims.m {
        if inside.iter().filter(|t| t.row == row).count() != r {
            add(ViolationKind::RowCount);
        }
    }
    for col in 0..dims.n {
        if inside.iter().filter(|t| t.col == col).count() != c {
            add(ViolationKind::ColumnCount);
        }
    }
    for park in 0..p.num_parks() {
        if inside.iter().filter(|&&t| p.park(t) == park).count() != r {
            add(ViolationKind::ParkCount);
        }
    }
    for (i, a) in inside.iter().enumerate() {
        for b in &inside[i + 1..] {
            if a.row.abs_diff(b.row) <= 1 && a.col.abs_diff(b.col) <= 1 {
                add(ViolationKind::Adjacency);
            }
        }
    }
    kinds
}

pub fn naive_valid(p: &Puzzle, trees: &[Cell]) -> bool {
    naive_violation_kinds(p, trees).is_empty()
}

/// All `k`-subsets of `0..n`.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, k: usize, from: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if acc.len() == k {
            out.push(acc.clone());
            return;
        }
        for j in from..n {
            acc.push(j);
            go(n, k, j + 1, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(n, k, 0, &mut Vec::new(), &mut out);
    out
}

/// Every placement with `r` trees per row (no other constraint), filtered by
/// `keep`. Only for small boards.
fn placements(dims: BoardDims, r: usize, mut keep: impl FnMut(&[Cell]) -> bool) -> Vec<Vec<Cell>> {
    let rows = subsets(dims.n, r);
    let mut out = Vec::new();
    let mut pick = vec![0usize; dims.m];
    if dims.m == 0 {
        if keep(&[]) {
            out.push(Vec::new());
        }
        return out;
    }
    if rows.is_empty() {
        return out;
    }
    loop {
        let trees: Vec<Cell> = (0..dims.m)
            .flat_map(|i| rows[pick[i]].iter().map(move |&col| Cell::new(i, col)))
            .collect();
        if keep(&trees) {
            out.push(trees);
        }
        let mut i = 0;
        loop {
            if i == dims.m {
                return out;
            }
            pick[i] += 1;
            if pick[i] < rows.len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
    }
}

/// Solutions of a puzzle by exhaustive search, sorted.
pub fn brute_solutions(p: &Puzzle) -> Vec<Certificate> {
    let mut out: Vec<Certificate> = placements(p.dims(), p.quota().r(), |t| naive_valid(p, t))
        .into_iter()
        .map(|t| Certificate::from_cells(t).unwrap())
        .collect();
    out.sort();
    out
}

/// Tree configurations (parks ignored) by exhaustive search.
pub fn brute_configs(quota: Quota, dims: BoardDims) -> Vec<Certificate> {
    let ok = |trees: &[Cell]| {
        (0..dims.n).all(|col| trees.iter().filter(|t| t.col == col).count() == quota.c())
            && trees.iter().enumerate().all(|(i, a)| {
                trees[i + 1..]
                    .iter()
                    .all(|b| a.row.abs_diff(b.row) > 1 || a.col.abs_diff(b.col) > 1)
            })
    };
    let mut out: Vec<Certificate> = placements(dims, quota.r(), ok)
        .into_iter()
        .map(|t| Certificate::from_cells(t).unwrap())
        .collect();
    out.sort();
    out
}

/// A puzzle whose park ids are assigned at random (usually not contiguous).
pub fn random_puzzle(rng: &mut impl Rng, quota: Quota, dims: BoardDims) -> Puzzle {
    let cells = dims.cells();
    let mut ids: Vec<usize> = (0..cells).map(|_| rng.gen_range(0..dims.m)).collect();
    let mut slots: Vec<usize> = (0..cells).collect();
    slots.shuffle(rng);
    for (park, &slot) in slots.iter().take(dims.m).enumerate() {
        ids[slot] = park;
    }
    Puzzle::new(quota, dims, ids).unwrap()
}

/// A puzzle with contiguous parks, grown from `m` random seed cells.
pub fn random_contiguous_puzzle(rng: &mut impl Rng, quota: Quota, dims: BoardDims) -> Puzzle {
    let (m, n) = (dims.m, dims.n);
    let mut owner = vec![usize::MAX; m * n];
    let mut slots: Vec<usize> = (0..m * n).collect();
    slots.shuffle(rng);
    let mut frontier: Vec<usize> = Vec::new();
    for (park, &slot) in slots.iter().take(m).enumerate() {
        owner[slot] = park;
        frontier.push(slot);
    }
    while !frontier.is_empty() {
        let k = rng.gen_range(0..frontier.len());
        let i = frontier[k];
        let (row, col) = (i / n, i % n);
        let mut near = Vec::with_capacity(4);
        if row > 0 {
            near.push(i - n);
        }
        if row + 1 < m {
            near.push(i + n);
        }
        if col > 0 {
            near.push(i - 1);
        }
        if col + 1 < n {
            near.push(i + 1);
        }
        let free: Vec<usize> = near
            .into_iter()
            .filter(|&j| owner[j] == usize::MAX)
            .collect();
        match free.choose(rng) {
            Some(&j) => {
                owner[j] = owner[i];
                frontier.push(j);
            }
            None => {
                frontier.swap_remove(k);
            }
        }
    }
    Puzzle::new(quota, dims, owner).unwrap()
}

/// A random certificate: sometimes near-valid, sometimes arbitrary.
pub fn random_certificate(rng: &mut impl Rng, p: &Puzzle) -> Vec<Cell> {
    let dims = p.dims();
    let count = rng.gen_range(0..=dims.m * p.quota().r() + 2);
    (0..count)
        .map(|_| {
            let row = rng.gen_range(0..dims.m + 1);
            let col = rng.gen_range(0..dims.n + 1);
            Cell::new(
                row.min(dims.m - usize::from(rng.gen_bool(0.9))),
                col.min(dims.n - usize::from(rng.gen_bool(0.9))),
            )
        })
        .collect()
}

/// All 3-CNF formulas over `vars` variables with `clauses` clauses, up to
/// renaming variables in order of first appearance.
pub fn formulas(vars: usize, clauses: usize) -> Vec<CnfFormula> {
    let lits: Vec<Literal> = (0..vars)
        .flat_map(|v| [Literal::pos(v), Literal::neg(v)])
        .collect();
    let slots = 3 * clauses;
    let mut out = Vec::new();
    let mut idx = vec![0usize; slots];
    loop {
        let chosen: Vec<Literal> = idx.iter().map(|&i| lits[i]).collect();
        // Keep only canonical first-appearance variable order that uses every variable.
        let mut seen = Vec::new();
        for l in &chosen {
            if !seen.contains(&l.var) {
                seen.push(l.var);
            }
        }
        if seen.len() == vars && seen.iter().enumerate().all(|(i, &v)| i == v) {
            let cl = chosen.chunks(3).map(|c| [c[0], c[1], c[2]]).collect();
            out.push(CnfFormula::new(vars, cl).unwrap());
        }
        let mut k = 0;
        loop {
            if k == slots {
                return out;
            }
            idx[k] += 1;
            if idx[k] < lits.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Puzzle with four parks, one per row, on the 4x4 one-tree board.
pub fn row_parks_4x4() -> Puzzle {
    Puzzle::from_rows(q(1, 1), &(0..4).map(|r| vec![r; 4]).collect::<Vec<_>>()).unwrap()
}

/// Every satisfying assignment, by evaluating the clauses on all bit
/// patterns. Variable `v` is bit `v`.
pub fn brute_sat(phi: &CnfFormula) -> Vec<Vec<bool>> {
    let n = phi.num_vars();
    (0u64..1 << n)
        .map(|bits| (0..n).map(|v| bits >> v & 1 == 1).collect::<Vec<bool>>())
        .filter(|vals| {
            phi.clauses()
                .iter()
                .all(|cl| cl.iter().any(|l| vals[l.var] != l.negated))
        })
        .collect()
}

/// `formulas` further reduced by polarity symmetry: the first occurrence of
/// every variable is positive.
pub fn canonical_formulas(vars: usize, clauses: usize) -> Vec<CnfFormula> {
    formulas(vars, clauses)
        .into_iter()
        .filter(|phi| {
            let mut seen = vec![false; vars];
            phi.clauses().iter().flatten().all(|l| {
                let first = !seen[l.var];
                seen[l.var] = true;
                !first || !l.negated
            })
        })
        .collect()
}
