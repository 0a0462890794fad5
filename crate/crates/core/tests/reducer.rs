mod common;

use common::{brute_sat, data, formulas, q};
use num_bigint::BigUint;
use parks_core::reduce::{
    assignment_to_certificate, certificate_to_assignment, iff_harness, parse_dimacs, reduce,
    size_bound, Assignment, CnfError, CnfFormula, Literal, ReduceError,
};
use parks_core::solver::{count_solutions, solve, SolveOptions};
use parks_core::{verify, BoardDims, Quota};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

fn running_example() -> CnfFormula {
    parse_dimacs(&std::fs::read_to_string(data("running_example.cnf")).unwrap()).unwrap()
}

/// Solves the reduced puzzle exhaustively and checks that reading back the
/// solutions yields each satisfying assignment exactly once, and that every
/// satisfying assignment plants a valid certificate.
fn check_bijection(phi: &CnfFormula, quota: Quota) {
    let (p, map) = reduce(phi, quota);
    assert!(p.is_contiguous(), "{quota} {}", phi.to_dimacs());
    let out = solve(&p, SolveOptions::all()).unwrap();
    let mut read: Vec<Vec<bool>> = out
        .solutions
        .iter()
        .map(|s| {
            certificate_to_assignment(&map, s)
                .unwrap()
                .values()
                .to_vec()
        })
        .collect();
    read.sort();
    let mut want = brute_sat(phi);
    want.sort();
    assert_eq!(read, want, "{quota} {}", phi.to_dimacs());
    for vals in want {
        let cert = assignment_to_certificate(&map, &p, &Assignment::new(vals)).unwrap();
        assert!(verify(&p, &cert).valid);
    }
}

#[test]
fn one_tree_bijection() {
    for vars in 1..=3 {
        for phi in formulas(vars, 1) {
            check_bijection(&phi, q(1, 1));
        }
    }
    let mut rng = StdRng::seed_from_u64(11);
    for vars in 1..=4 {
        let mut pool = formulas(vars, 2);
        pool.shuffle(&mut rng);
        for phi in pool.iter().take(25) {
            check_bijection(phi, q(1, 1));
        }
    }
}

#[test]
fn general_quota_bijection() {
    for quota in [q(1, 2), q(2, 1), q(2, 2)] {
        for vars in 1..=2 {
            for phi in formulas(vars, 1) {
                check_bijection(&phi, quota);
            }
        }
    }
}

#[test]
fn running_example_counts() {
    let phi = running_example();
    assert_eq!(brute_sat(&phi).len(), 12);
    for quota in [q(1, 1), q(2, 2)] {
        let (p, _) = reduce(&phi, quota);
        let (count, _) = count_solutions(&p, None).unwrap();
        assert_eq!(count, BigUint::from(12u32), "{quota}");
    }
    check_bijection(&phi, q(1, 1));
}

#[test]
fn unsatisfiable_formula_gives_unsolvable_puzzle() {
    let phi = parse_dimacs("p cnf 1 2\n1 1 1 0\n-1 -1 -1 0\n").unwrap();
    assert!(brute_sat(&phi).is_empty());
    for quota in [q(1, 1), q(1, 2), q(2, 1)] {
        let (p, _) = reduce(&phi, quota);
        let (count, _) = count_solutions(&p, None).unwrap();
        assert_eq!(count, BigUint::from(0u32), "{quota}");
    }
}

#[test]
fn forward_map_rejects_falsifying_assignments() {
    let phi = running_example();
    let (p, map) = reduce(&phi, q(1, 1));
    let bad = Assignment::new(vec![true, false, false, false]);
    assert_eq!(
        assignment_to_certificate(&map, &p, &bad),
        Err(ReduceError::UnsatisfiedClause(1))
    );
    let short = Assignment::new(vec![true]);
    assert_eq!(
        assignment_to_certificate(&map, &p, &short),
        Err(ReduceError::AssignmentLength {
            expected: 4,
            found: 1
        })
    );
    let all_true = Assignment::new(vec![true; 4]);
    let cert = assignment_to_certificate(&map, &p, &all_true).unwrap();
    assert!(verify(&p, &cert).valid);
    assert_eq!(certificate_to_assignment(&map, &cert).unwrap(), all_true);
}

#[test]
fn reduced_puzzles_are_contiguous_and_deterministic() {
    let phi = running_example();
    for quota in [
        q(1, 1),
        q(1, 2),
        q(2, 1),
        q(2, 2),
        q(3, 1),
        q(1, 3),
        q(3, 3),
    ] {
        let (p, map) = reduce(&phi, quota);
        assert!(p.is_contiguous(), "{quota}");
        assert_eq!(p.num_parks(), p.dims().m);
        assert_eq!(quota.c() * p.dims().n, quota.r() * p.dims().m);
        assert_eq!(p.dims().n % (2 * quota.r()), 0);
        assert_eq!(reduce(&phi, quota), (p, map));
    }
    assert_eq!(reduce(&phi, q(1, 1)).0.dims(), BoardDims::new(32, 32));
    assert_eq!(reduce(&phi, q(2, 2)).0.dims(), BoardDims::new(68, 68));
}

fn random_formula(rng: &mut StdRng, vars: usize, clauses: usize) -> CnfFormula {
    let lit = |rng: &mut StdRng| {
        let v = rng.gen_range(0..vars);
        if rng.gen_bool(0.5) {
            Literal::neg(v)
        } else {
            Literal::pos(v)
        }
    };
    let cl = (0..clauses)
        .map(|_| [lit(rng), lit(rng), lit(rng)])
        .collect();
    CnfFormula::new(vars, cl).unwrap()
}

#[test]
fn emitted_sizes_respect_bound() {
    let mut rng = StdRng::seed_from_u64(5);
    let quotas = [
        q(1, 1),
        q(1, 2),
        q(2, 1),
        q(2, 2),
        q(3, 1),
        q(1, 3),
        q(3, 2),
    ];
    for _ in 0..200 {
        let vars = rng.gen_range(1..=6);
        let clauses = rng.gen_range(0..=5);
        let phi = random_formula(&mut rng, vars, clauses);
        for &quota in &quotas {
            let (p, _) = reduce(&phi, quota);
            let bound = size_bound(&phi, quota);
            assert!(
                p.dims().m <= bound.m && p.dims().n <= bound.n,
                "{quota} {}: {:?} exceeds {bound:?}",
                phi.to_dimacs(),
                p.dims()
            );
        }
    }
}

#[test]
fn random_formulas_count_correctly() {
    let mut rng = StdRng::seed_from_u64(9);
    for _ in 0..30 {
        let vars = rng.gen_range(1..=5);
        let clauses = rng.gen_range(1..=3);
        let phi = random_formula(&mut rng, vars, clauses);
        let (p, _) = reduce(&phi, q(1, 1));
        let (count, _) = count_solutions(&p, None).unwrap();
        assert_eq!(
            count,
            BigUint::from(brute_sat(&phi).len()),
            "{}",
            phi.to_dimacs()
        );
    }
}

#[test]
fn iff_harness_has_two_solutions() {
    for quota in [q(1, 1), q(1, 2), q(2, 1), q(2, 2), q(1, 3), q(3, 1)] {
        for a in 1..=3 {
            let p = iff_harness(quota, a);
            assert!(p.is_contiguous());
            let out = solve(&p, SolveOptions::all()).unwrap();
            assert_eq!(out.solutions.len(), 2, "{quota} with {a} parks");
        }
    }
}

#[test]
fn map_text_layout() {
    let phi = running_example();
    let (p, map) = reduce(&phi, q(1, 1));
    let text = map.serialize();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "parks-map v1");
    assert_eq!(lines[1], "quota 1 1");
    assert_eq!(lines[2], format!("dims {} {}", p.dims().m, p.dims().n));
    assert_eq!(lines[3], "formula 4 2");
    let occurrences: Vec<&str> = lines
        .iter()
        .copied()
        .filter(|l| l.starts_with("occurrence "))
        .collect();
    assert_eq!(occurrences.len(), 6);
    for line in occurrences {
        let f: Vec<&str> = line.split_whitespace().collect();
        assert_eq!(f.len(), 11);
        assert_eq!((f[7], f[9]), ("true", "false"));
        let var: usize = f[1].parse().unwrap();
        let (clause, pos): (usize, usize) = (f[2].parse().unwrap(), f[3].parse().unwrap());
        let lit = phi.clauses()[clause][pos];
        assert_eq!(lit.var, var);
        assert_eq!(f[4], if lit.negated { "1" } else { "0" });
    }
    assert!(lines.iter().all(|l| !l.starts_with("free ")));
    let free = parse_dimacs("p cnf 2 1\n1 1 1 0\n").unwrap();
    assert_eq!(
        reduce(&free, q(1, 1))
            .1
            .serialize()
            .lines()
            .filter(|l| l.starts_with("free 1 "))
            .count(),
        1
    );
}

#[test]
fn dimacs_reader() {
    let phi = parse_dimacs("c comment\np cnf 3 2\n1 -2 3 0 -1\n2 0\n").unwrap();
    assert_eq!(phi.num_vars(), 3);
    assert_eq!(
        phi.clauses()[0],
        [Literal::pos(0), Literal::neg(1), Literal::pos(2)]
    );
    // Short clauses repeat their last literal.
    assert_eq!(
        phi.clauses()[1],
        [Literal::neg(0), Literal::pos(1), Literal::pos(1)]
    );
    assert_eq!(parse_dimacs(&phi.to_dimacs()).unwrap(), phi);
    assert!(matches!(
        parse_dimacs("1 2 3 0\n"),
        Err(CnfError::MalformedDimacs(_))
    ));
    assert!(matches!(
        parse_dimacs("p cnf 2 1\n1 2 3 0\n"),
        Err(CnfError::MalformedDimacs(_))
    ));
    assert!(matches!(
        parse_dimacs("p cnf 3 2\n1 2 3 0\n"),
        Err(CnfError::MalformedDimacs(_))
    ));
    assert!(matches!(
        parse_dimacs("p cnf 3 1\n1 2 3\n"),
        Err(CnfError::MalformedDimacs(_))
    ));
    assert_eq!(
        parse_dimacs("p cnf 4 1\n1 2 3 4 0\n"),
        Err(CnfError::ClauseTooLong { clause: 0, len: 4 })
    );
    assert_eq!(
        parse_dimacs("p cnf 3 1\n0\n"),
        Err(CnfError::EmptyClause(0))
    );
    assert_eq!(parse_dimacs("p cnf 0 0\n"), Err(CnfError::NoVariables));
    assert_eq!(
        CnfFormula::new(2, vec![[Literal::pos(0), Literal::pos(2), Literal::pos(1)]]),
        Err(CnfError::VariableOutOfRange {
            var: 2,
            num_vars: 2
        })
    );
}
