//! 3-CNF formulas, truth assignments and the DIMACS reader.

use std::fmt::Write as _;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CnfError {
    #[error("malformed DIMACS: {0}")]
    MalformedDimacs(String),
    #[error("clause {clause} has {len} literals; at most 3 are supported")]
    ClauseTooLong { clause: usize, len: usize },
    #[error("clause {0} is empty")]
    EmptyClause(usize),
    #[error("literal refers to variable {var} but the formula has {num_vars}")]
    VariableOutOfRange { var: usize, num_vars: usize },
    #[error("a formula needs at least one variable")]
    NoVariables,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    /// 0-based variable index.
    pub var: usize,
    pub negated: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Self {
            var,
            negated: false,
        }
    }

    pub fn neg(var: usize) -> Self {
        Self { var, negated: true }
    }

    /// Value under an assignment.
    pub fn eval(self, a: &Assignment) -> bool {
        a.get(self.var) != self.negated
    }

    /// 1-based signed DIMACS form.
    pub fn to_dimacs(self) -> i64 {
        let v = self.var as i64 + 1;
        if self.negated {
            -v
        } else {
            v
        }
    }
}

/// A conjunction of clauses with exactly three literals each. Literals may
/// repeat within a clause.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<[Literal; 3]>,
}

/// One literal slot of one clause.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Occurrence {
    pub clause: usize,
    pub position: usize,
    pub literal: Literal,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<[Literal; 3]>) -> Result<Self, CnfError> {
        if num_vars == 0 {
            return Err(CnfError::NoVariables);
        }
        for lit in clauses.iter().flatten() {
            if lit.var >= num_vars {
                return Err(CnfError::VariableOutOfRange {
                    var: lit.var,
                    num_vars,
                });
            }
        }
        Ok(Self { num_vars, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[[Literal; 3]] {
        &self.clauses
    }

    /// Occurrences of variable `var`, in clause order then position order.
    pub fn occurrences_of(&self, var: usize) -> Vec<Occurrence> {
        self.occurrences()
            .filter(|o| o.literal.var == var)
            .collect()
    }

    pub fn occurrences(&self) -> impl Iterator<Item = Occurrence> + '_ {
        self.clauses.iter().enumerate().flat_map(|(clause, lits)| {
            lits.iter()
                .enumerate()
                .map(move |(position, &literal)| Occurrence {
                    clause,
                    position,
                    literal,
                })
        })
    }

    /// Index of the first clause the assignment falsifies.
    pub fn first_falsified(&self, a: &Assignment) -> Option<usize> {
        self.clauses
            .iter()
            .position(|c| !c.iter().any(|l| l.eval(a)))
    }

    pub fn is_satisfied_by(&self, a: &Assignment) -> bool {
        self.first_falsified(a).is_none()
    }

    /// Satisfying assignments by exhaustive search, in binary counting
    /// order (variable 0 is the lowest bit).
    pub fn satisfying_assignments(&self) -> Vec<Assignment> {
        assert!(
            self.num_vars < 26,
            "exhaustive search is for small formulas"
        );
        (0u64..1 << self.num_vars)
            .map(|bits| Assignment::from_bits(self.num_vars, bits))
            .filter(|a| self.is_satisfied_by(a))
            .collect()
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for clause in &self.clauses {
            for lit in clause {
                let _ = write!(out, "{} ", lit.to_dimacs());
            }
            out.push_str("0\n");
        }
        out
    }
}

/// Reads DIMACS CNF. Clauses with one or two literals are padded to three
/// by repeating their last literal.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula, CnfError> {
    let bad = |msg: String| CnfError::MalformedDimacs(msg);
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Vec<Literal>> = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(bad(format!("line {}: second header", i + 1)));
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            match parts.as_slice() {
                ["p", "cnf", v, c] => {
                    let v = v
                        .parse()
                        .map_err(|_| bad(format!("line {}: bad variable count", i + 1)))?;
                    let c = c
                        .parse()
                        .map_err(|_| bad(format!("line {}: bad clause count", i + 1)))?;
                    header = Some((v, c));
                }
                _ => return Err(bad(format!("line {}: expected `p cnf V C`", i + 1))),
            }
            continue;
        }
        let (num_vars, _) =
            header.ok_or_else(|| bad(format!("line {}: clause before header", i + 1)))?;
        for tok in line.split_whitespace() {
            let v: i64 = tok
                .parse()
                .map_err(|_| bad(format!("line {}: bad literal {tok:?}", i + 1)))?;
            if v == 0 {
                if current.is_empty() {
                    return Err(CnfError::EmptyClause(clauses.len()));
                }
                clauses.push(std::mem::take(&mut current));
                continue;
            }
            let var = v.unsigned_abs() as usize;
            if var > num_vars {
                return Err(bad(format!(
                    "line {}: variable {var} exceeds header count {num_vars}",
                    i + 1
                )));
            }
            current.push(Literal {
                var: var - 1,
                negated: v < 0,
            });
        }
    }
    let (num_vars, num_clauses) = header.ok_or_else(|| bad("missing `p cnf` header".into()))?;
    if !current.is_empty() {
        return Err(bad("last clause is not terminated by 0".into()));
    }
    if clauses.len() != num_clauses {
        return Err(bad(format!(
            "header promises {num_clauses} clauses, found {}",
            clauses.len()
        )));
    }
    let mut padded = Vec::with_capacity(clauses.len());
    for (k, c) in clauses.into_iter().enumerate() {
        if c.len() > 3 {
            return Err(CnfError::ClauseTooLong {
                clause: k,
                len: c.len(),
            });
        }
        let last = *c.last().expect("clauses are nonempty");
        padded.push([c[0], *c.get(1).unwrap_or(&last), *c.get(2).unwrap_or(&last)]);
    }
    CnfFormula::new(num_vars, padded)
}

/// A truth value for every variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment(Vec<bool>);

impl Assignment {
    pub fn new(values: Vec<bool>) -> Self {
        Self(values)
    }

    /// Variable `i` takes bit `i` of `bits`.
    pub fn from_bits(num_vars: usize, bits: u64) -> Self {
        Self((0..num_vars).map(|i| bits >> i & 1 == 1).collect())
    }

    pub fn get(&self, var: usize) -> bool {
        self.0[var]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[bool] {
        &self.0
    }
}
