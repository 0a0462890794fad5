mod common;

use common::{brute_configs, q};
use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use parks_core::census::{
    census_4x4_contiguous, census_4x4_noncontiguous, contiguous_left_only_puzzles,
    for_each_partition,
};
use parks_core::enumerate::count_configs;
use parks_core::sequences::{
    a002464_explicit, a002464_recurrence, bell, binomial, stirling2, total_puzzles,
};
use parks_core::solver::count_solutions;
use parks_core::BoardDims;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

/// Set partitions of `n` labelled items into exactly `k` blocks, by
/// walking every restricted growth string.
fn brute_stirling(n: usize, k: usize) -> u64 {
    fn walk(pos: usize, n: usize, k: usize, used: usize) -> u64 {
        if pos == n {
            return u64::from(used == k);
        }
        (0..=used.min(k - 1))
            .map(|b| walk(pos + 1, n, k, used.max(b + 1)))
            .sum()
    }
    if k == 0 {
        return u64::from(n == 0);
    }
    walk(0, n, k, 0)
}

#[test]
fn square_counts() {
    let anchors: [(usize, u64); 5] = [(4, 2), (5, 14), (8, 5242), (10, 479306), (13, 831283558)];
    for (n, v) in anchors {
        assert_eq!(a002464_recurrence(n), BigInt::from(v), "n={n}");
        assert_eq!(a002464_explicit(n), BigInt::from(v), "n={n}");
    }
    for n in 0..=40 {
        assert_eq!(a002464_recurrence(n), a002464_explicit(n), "n={n}");
    }
}

#[test]
fn square_counts_match_enumeration() {
    for n in 4..=10 {
        let dp = count_configs(q(1, 1), BoardDims::new(n, n), None)
            .unwrap()
            .count;
        assert_eq!(BigInt::from(dp.clone()), a002464_recurrence(n), "n={n}");
        assert_eq!(BigInt::from(dp), a002464_explicit(n), "n={n}");
    }
    for n in 1..=4 {
        let brute = brute_configs(q(1, 1), BoardDims::new(n, n)).len();
        assert_eq!(a002464_recurrence(n), BigInt::from(brute), "n={n}");
    }
}

#[test]
fn stirling_numbers() {
    assert_eq!(stirling2(4, 2), BigUint::from(7u32));
    assert_eq!(stirling2(9, 3), BigUint::from(3025u32));
    assert_eq!(brute_stirling(4, 2), 7);
    assert_eq!(brute_stirling(9, 3), 3025);
    for n in 0..=9 {
        for k in 0..=n + 1 {
            assert_eq!(
                stirling2(n, k),
                BigUint::from(brute_stirling(n, k)),
                "S({n},{k})"
            );
        }
    }
    assert_eq!(stirling2(0, 0), BigUint::from(1u32));
    assert_eq!(stirling2(5, 0), BigUint::from(0u32));
    assert_eq!(stirling2(3, 5), BigUint::from(0u32));
}

#[test]
fn bell_numbers_are_row_sums() {
    let known: [u64; 8] = [1, 1, 2, 5, 15, 52, 203, 877];
    for (n, &b) in known.iter().enumerate() {
        assert_eq!(bell(n), BigUint::from(b));
    }
    for n in 0..=15 {
        let row: BigUint = (0..=n).map(|k| stirling2(n, k)).sum();
        assert_eq!(bell(n), row, "n={n}");
    }
}

#[test]
fn binomials_and_totals() {
    assert_eq!(binomial(10, 3), BigUint::from(120u32));
    assert_eq!(binomial(3, 10), BigUint::from(0u32));
    assert_eq!(total_puzzles(4, 4), stirling2(16, 4));
    assert_eq!(total_puzzles(4, 4), BigUint::from(171_798_901u64));
}

#[test]
fn analytic_census() {
    let report = census_4x4_noncontiguous();
    assert_eq!(
        report.noncontiguous_one_sided,
        Some(BigInt::from(15_204_352u64))
    );
    assert_eq!(
        report.noncontiguous_unique_total,
        Some(BigInt::from(30_408_704u64))
    );
    assert_eq!(
        report.at_least_one_solution_total,
        Some(BigInt::from(31_981_568u64))
    );
}

#[test]
fn contiguous_census() {
    let report = census_4x4_contiguous();
    assert_eq!(report.contiguous_one_sided, Some(BigInt::from(5880)));
    assert_eq!(report.contiguous_unique_total, Some(BigInt::from(11760)));
    let analytic = census_4x4_noncontiguous();
    let ratio = report.contiguous_unique_total.unwrap().to_f64().unwrap()
        / analytic
            .noncontiguous_unique_total
            .unwrap()
            .to_f64()
            .unwrap();
    assert!(
        (ratio * 100.0 - 0.0387).abs() < 0.00005,
        "ratio {}%",
        ratio * 100.0
    );
}

#[test]
fn census_puzzles_have_unique_solutions() {
    let mut puzzles = contiguous_left_only_puzzles();
    assert_eq!(puzzles.len(), 5880);
    assert!(puzzles.iter().all(|p| p.is_contiguous()));
    let mut rng = StdRng::seed_from_u64(7);
    puzzles.shuffle(&mut rng);
    for p in puzzles.iter().take(200) {
        let (count, _) = count_solutions(p, None).unwrap();
        assert_eq!(count, BigUint::from(1u32));
    }
}

#[test]
fn partition_walk_small_boards() {
    for (m, n, k) in [(2, 2, 2), (2, 3, 2), (3, 3, 3), (2, 4, 3)] {
        let mut visits = 0u64;
        for_each_partition(BoardDims::new(m, n), k, false, |_| visits += 1);
        assert_eq!(BigUint::from(visits), stirling2(m * n, k), "{m}x{n} k={k}");
    }
    // Connected 2-park splits of a 2x2 board: two straight cuts and four
    // single-corner cuts.
    let mut connected = 0;
    for_each_partition(BoardDims::new(2, 2), 2, true, |_| connected += 1);
    assert_eq!(connected, 6);
}

#[test]
fn partition_walk_full_board() {
    let mut visits = 0u64;
    for_each_partition(BoardDims::new(4, 4), 4, false, |_| visits += 1);
    assert_eq!(BigUint::from(visits), stirling2(16, 4));
}
