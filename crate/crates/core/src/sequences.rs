//! Exact integer sequences: the 1-tree square configuration counts (OEIS
//! A002464), Stirling numbers of the second kind and Bell numbers.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

/// Terms `n = 0..=3`. The recurrence needs four seeds; together with
/// `c(0) = 1` these reproduce every known square count from `n = 4` on.
const A002464_SEEDS: [i64; 4] = [1, 1, 0, 0];

/// `c(n)` by the four-term recurrence
/// `c(n) = (n+1) c(n-1) - (n-2) c(n-2) - (n-5) c(n-3) + (n-3) c(n-4)`.
pub fn a002464_recurrence(n: usize) -> BigInt {
    let mut window: Vec<BigInt> = A002464_SEEDS.iter().map(|&v| BigInt::from(v)).collect();
    if n < window.len() {
        return window.swap_remove(n);
    }
    for k in 4..=n as i64 {
        let next = BigInt::from(k + 1) * &window[3]
            - BigInt::from(k - 2) * &window[2]
            - BigInt::from(k - 5) * &window[1]
            + BigInt::from(k - 3) * &window[0];
        window.remove(0);
        window.push(next);
    }
    window.pop().expect("window holds four terms")
}

/// `c(n)` by inclusion-exclusion:
/// `n! + sum_{k=1}^{n-1} (-1)^k (n-k)! sum_{r=1}^{k} 2^r C(n-k, r) C(k-1, r-1)`.
pub fn a002464_explicit(n: usize) -> BigInt {
    let fact = factorials(n);
    let mut total = BigInt::from(fact[n].clone());
    for k in 1..n {
        let mut inner = BigUint::zero();
        for r in 1..=k.min(n - k) {
            inner += (BigUint::one() << r) * binomial(n - k, r) * binomial(k - 1, r - 1);
        }
        let term = BigInt::from(&fact[n - k] * inner);
        if k % 2 == 1 {
            total -= term;
        } else {
            total += term;
        }
    }
    total
}

fn factorials(n: usize) -> Vec<BigUint> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(BigUint::one());
    for k in 1..=n {
        let next = &out[k - 1] * BigUint::from(k);
        out.push(next);
    }
    out
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Partitions of an `n`-set into `k` nonempty blocks.
pub fn stirling2(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    // One row of the triangle at a time, columns 0..=k.
    let mut row = vec![BigUint::zero(); k + 1];
    row[0] = BigUint::one();
    for i in 1..=n {
        for j in (1..=k.min(i)).rev() {
            let keep = BigUint::from(j) * &row[j];
            row[j] = keep + &row[j - 1];
        }
        row[0] = BigUint::zero();
    }
    row.swap_remove(k)
}

/// Bell numbers by the Bell triangle: each row starts with the previous
/// row's last entry, and each entry adds its left neighbour to the entry
/// above that neighbour.
pub fn bell(n: usize) -> BigUint {
    let mut row = vec![BigUint::one()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(row.last().expect("nonempty").clone());
        for v in &row {
            let sum = next.last().expect("nonempty") + v;
            next.push(sum);
        }
        row = next;
    }
    row.swap_remove(0)
}

/// Number of `m x n` puzzles: the ways to split the board into `m` parks.
pub fn total_puzzles(m: usize, n: usize) -> BigUint {
    stirling2(m * n, m)
}
