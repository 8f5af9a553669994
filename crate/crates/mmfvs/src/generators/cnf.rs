//! CNF formulas: the DIMACS text format, a small complete satisfiability
//! search, and the copy-splitting reduction that turns any 3-CNF formula
//! into an equisatisfiable partitioned one (three equal variable classes,
//! no clause touching a class twice).

use super::GenError;

/// A CNF formula over variables 1..=num_vars. A literal is a nonzero signed
/// variable index: `v` for the positive literal, `-v` for the negated one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    pub num_vars: u32,
    pub clauses: Vec<Vec<i32>>,
}

impl CnfFormula {
    /// Validates literal ranges and rejects empty clauses.
    pub fn new(num_vars: u32, clauses: Vec<Vec<i32>>) -> Result<Self, GenError> {
        for (idx, clause) in clauses.iter().enumerate() {
            if clause.is_empty() {
                return Err(GenError::EmptyClause { clause: idx });
            }
            for &lit in clause {
                if lit == 0 || lit.unsigned_abs() > num_vars {
                    return Err(GenError::LiteralOutOfRange { clause: idx, literal: lit });
                }
            }
        }
        Ok(CnfFormula { num_vars, clauses })
    }

    pub fn max_clause_width(&self) -> usize {
        self.clauses.iter().map(|c| c.len()).max().unwrap_or(0)
    }

    /// True when `assignment[v - 1]` (indexed by variable) satisfies every
    /// clause.
    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        assignment.len() == self.num_vars as usize
            && self.clauses.iter().all(|clause| {
                clause.iter().any(|&lit| assignment[(lit.unsigned_abs() - 1) as usize] == (lit > 0))
            })
    }
}

/// A CNF formula whose variables split into three equal classes with no
/// clause containing two variables of the same class. Variables 1..=part_size
/// form class 1, the next part_size class 2, the rest class 3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionedCnf {
    pub cnf: CnfFormula,
    pub part_size: u32,
}

impl PartitionedCnf {
    pub fn new(cnf: CnfFormula, part_size: u32) -> Result<Self, GenError> {
        if cnf.num_vars != 3 * part_size {
            return Err(GenError::PartSizeMismatch { vars: cnf.num_vars, expected: 3 * part_size });
        }
        let pc = PartitionedCnf { cnf, part_size };
        for (idx, clause) in pc.cnf.clauses.iter().enumerate() {
            let mut seen = [false; 3];
            for &lit in clause {
                let p = pc.part_of(lit.unsigned_abs());
                if seen[p - 1] {
                    return Err(GenError::BadPartition { clause: idx, part: p });
                }
                seen[p - 1] = true;
            }
        }
        Ok(pc)
    }

    /// Class index (1, 2, or 3) of a variable.
    pub fn part_of(&self, var: u32) -> usize {
        ((var - 1) / self.part_size + 1) as usize
    }
}

/// Parse the DIMACS cnf format: `c` comment lines, one `p cnf <vars>
/// <clauses>` header, then whitespace-separated literals with `0`
/// terminating each clause (clauses may span lines).
pub fn parse_dimacs(text: &str) -> Result<CnfFormula, GenError> {
    let mut header: Option<(u32, usize)> = None;
    let mut clauses: Vec<Vec<i32>> = Vec::new();
    let mut open: Vec<i32> = Vec::new();
    let mut open_start = 0usize;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') || trimmed.starts_with('%') {
            continue;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(GenError::Dimacs { line, what: "duplicate header".into() });
            }
            let toks: Vec<&str> = trimmed.split_whitespace().collect();
            if toks.len() != 4 || toks[0] != "p" || toks[1] != "cnf" {
                return Err(GenError::Dimacs {
                    line,
                    what: "header must be `p cnf <vars> <clauses>`".into(),
                });
            }
            let vars = toks[2].parse::<u32>().map_err(|_| GenError::Dimacs {
                line,
                what: format!("bad variable count {:?}", toks[2]),
            })?;
            let count = toks[3].parse::<usize>().map_err(|_| GenError::Dimacs {
                line,
                what: format!("bad clause count {:?}", toks[3]),
            })?;
            header = Some((vars, count));
            continue;
        }
        let (vars, _) =
            header.ok_or(GenError::Dimacs { line, what: "literals before the header".into() })?;
        for tok in trimmed.split_whitespace() {
            let lit = tok.parse::<i32>().map_err(|_| GenError::Dimacs {
                line,
                what: format!("bad literal {tok:?}"),
            })?;
            if lit == 0 {
                if open.is_empty() {
                    return Err(GenError::Dimacs { line, what: "empty clause".into() });
                }
                clauses.push(std::mem::take(&mut open));
            } else {
                if lit.unsigned_abs() > vars {
                    return Err(GenError::Dimacs {
                        line,
                        what: format!("literal {lit} out of range (header says {vars} variables)"),
                    });
                }
                if open.is_empty() {
                    open_start = line;
                }
                open.push(lit);
            }
        }
    }
    let (vars, count) =
        header.ok_or(GenError::Dimacs { line: 0, what: "missing `p cnf` header".into() })?;
    if !open.is_empty() {
        return Err(GenError::Dimacs {
            line: open_start,
            what: "clause not terminated by 0".into(),
        });
    }
    if clauses.len() != count {
        return Err(GenError::Dimacs {
            line: 0,
            what: format!("header promises {count} clauses, found {}", clauses.len()),
        });
    }
    CnfFormula::new(vars, clauses)
}

pub fn write_dimacs(cnf: &CnfFormula) -> String {
    let mut out = format!("p cnf {} {}\n", cnf.num_vars, cnf.clauses.len());
    for clause in &cnf.clauses {
        for lit in clause {
            out.push_str(&lit.to_string());
            out.push(' ');
        }
        out.push_str("0\n");
    }
    out
}

/// Complete satisfiability search (unit propagation plus branching on the
/// smallest unassigned variable, true first). Returns the first satisfying
/// assignment found, indexed by variable, with unconstrained variables set
/// to true. Exponential in the worst case — meant for small formulas.
pub fn satisfying_assignment(cnf: &CnfFormula) -> Option<Vec<bool>> {
    let n = cnf.num_vars as usize;
    let mut assign: Vec<Option<bool>> = vec![None; n + 1];
    if dpll(cnf, &mut assign) {
        Some((1..=n).map(|v| assign[v].unwrap_or(true)).collect())
    } else {
        None
    }
}

fn dpll(cnf: &CnfFormula, assign: &mut Vec<Option<bool>>) -> bool {
    let mut trail: Vec<usize> = Vec::new();
    let undo = |assign: &mut Vec<Option<bool>>, trail: &[usize]| {
        for &v in trail {
            assign[v] = None;
        }
    };
    loop {
        let mut changed = false;
        for clause in &cnf.clauses {
            let mut satisfied = false;
            let mut last_free: Option<i32> = None;
            let mut free = 0usize;
            for &lit in clause {
                match assign[lit.unsigned_abs() as usize] {
                    Some(v) if v == (lit > 0) => {
                        satisfied = true;
                        break;
                    }
                    Some(_) => {}
                    None => {
                        free += 1;
                        last_free = Some(lit);
                    }
                }
            }
            if satisfied {
                continue;
            }
            match free {
                0 => {
                    undo(assign, &trail);
                    return false;
                }
                1 => {
                    let lit = last_free.unwrap();
                    assign[lit.unsigned_abs() as usize] = Some(lit > 0);
                    trail.push(lit.unsigned_abs() as usize);
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            break;
        }
    }
    match (1..assign.len()).find(|&v| assign[v].is_none()) {
        None => true,
        Some(v) => {
            for val in [true, false] {
                assign[v] = Some(val);
                if dpll(cnf, assign) {
                    return true;
                }
                assign[v] = None;
            }
            undo(assign, &trail);
            false
        }
    }
}

/// Split every variable x into three copies x1, x2, x3 (one per class: copy
/// i of variable x is variable (i-1)·n + x), send the t-th literal of each
/// clause to copy t, and chain the copies with the implications
/// (¬x1 ∨ x2), (¬x2 ∨ x3), (¬x3 ∨ x1) so all three must agree. The result
/// has m + 3n clauses, is partition-valid by construction (clause positions
/// land in distinct classes), and is satisfiable iff the input is.
pub fn sat_to_3p3sat(phi: &CnfFormula) -> Result<PartitionedCnf, GenError> {
    let n = phi.num_vars;
    let copy = |t: usize, var: u32| (t as u32) * n + var;
    let mut clauses: Vec<Vec<i32>> = Vec::with_capacity(phi.clauses.len() + 3 * n as usize);
    for (idx, clause) in phi.clauses.iter().enumerate() {
        if clause.len() > 3 {
            return Err(GenError::ClauseTooWide { clause: idx, width: clause.len() });
        }
        clauses.push(
            clause
                .iter()
                .enumerate()
                .map(|(t, &lit)| {
                    let v = copy(t, lit.unsigned_abs()) as i32;
                    if lit > 0 {
                        v
                    } else {
                        -v
                    }
                })
                .collect(),
        );
    }
    for x in 1..=n {
        let (x1, x2, x3) = (copy(0, x) as i32, copy(1, x) as i32, copy(2, x) as i32);
        clauses.push(vec![-x1, x2]);
        clauses.push(vec![-x2, x3]);
        clauses.push(vec![-x3, x1]);
    }
    PartitionedCnf::new(CnfFormula::new(3 * n, clauses)?, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn brute_satisfiable(cnf: &CnfFormula) -> bool {
        let n = cnf.num_vars;
        assert!(n <= 20, "brute enumeration only meant for tiny formulas");
        (0u32..1 << n).any(|mask| {
            let assignment: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
            cnf.is_satisfied_by(&assignment)
        })
    }

    #[test]
    fn dimacs_roundtrip_and_comments() {
        let text = "c a comment\np cnf 3 2\n1 -2 0 2\n3 0\n";
        let cnf = parse_dimacs(text).unwrap();
        assert_eq!(cnf.num_vars, 3);
        assert_eq!(cnf.clauses, vec![vec![1, -2], vec![2, 3]]);
        let again = parse_dimacs(&write_dimacs(&cnf)).unwrap();
        assert_eq!(again, cnf);
    }

    #[test]
    fn dimacs_errors_carry_line_numbers() {
        let cases: Vec<(&str, usize, &str)> = vec![
            ("1 2 0\n", 1, "before the header"),
            ("p cnf 2 1\np cnf 2 1\n", 2, "duplicate"),
            ("p dnf 2 1\n1 0\n", 1, "header must be"),
            ("p cnf x 1\n", 1, "bad variable count"),
            ("p cnf 2 1\n1 y 0\n", 2, "bad literal"),
            ("p cnf 2 1\n3 0\n", 2, "out of range"),
            ("p cnf 2 1\n0\n", 2, "empty clause"),
            ("p cnf 2 1\n1 2\n", 2, "not terminated"),
            ("p cnf 2 2\n1 0\n", 0, "promises 2 clauses"),
            ("c nothing\n", 0, "missing"),
        ];
        for (text, want_line, what) in cases {
            match parse_dimacs(text) {
                Err(GenError::Dimacs { line, what: w }) => {
                    assert_eq!(line, want_line, "line for {text:?}");
                    assert!(w.contains(what), "{w:?} should mention {what:?}");
                }
                other => panic!("{text:?} gave {other:?}"),
            }
        }
    }

    #[test]
    fn formula_validation_rejects_bad_shapes() {
        assert!(matches!(
            CnfFormula::new(2, vec![vec![]]),
            Err(GenError::EmptyClause { clause: 0 })
        ));
        assert!(matches!(
            CnfFormula::new(2, vec![vec![1], vec![0]]),
            Err(GenError::LiteralOutOfRange { clause: 1, literal: 0 })
        ));
        assert!(matches!(
            CnfFormula::new(2, vec![vec![-3]]),
            Err(GenError::LiteralOutOfRange { clause: 0, literal: -3 })
        ));
    }

    #[test]
    fn partition_rejects_a_doubled_class() {
        // variables 1..=2 are class 1 of a 6-variable formula
        let cnf = CnfFormula::new(6, vec![vec![1, 2]]).unwrap();
        assert!(matches!(
            PartitionedCnf::new(cnf, 2),
            Err(GenError::BadPartition { clause: 0, part: 1 })
        ));
        let cnf = CnfFormula::new(6, vec![vec![1, -1]]).unwrap();
        assert!(matches!(PartitionedCnf::new(cnf, 2), Err(GenError::BadPartition { .. })));
    }

    #[test]
    fn splitting_counts_clauses_and_classes() {
        // two variables, one clause
        let phi = CnfFormula::new(2, vec![vec![1, -2]]).unwrap();
        let pc = sat_to_3p3sat(&phi).unwrap();
        assert_eq!(pc.part_size, 2);
        assert_eq!(pc.cnf.num_vars, 6);
        assert_eq!(pc.cnf.clauses.len(), 7); // m + 3n = 1 + 6
        assert_eq!(pc.cnf.clauses[0], vec![1, -4]); // copy 1 of x, copy 2 of y
        let wide = CnfFormula::new(4, vec![vec![1, 2, 3, 4]]).unwrap();
        assert!(matches!(
            sat_to_3p3sat(&wide),
            Err(GenError::ClauseTooWide { clause: 0, width: 4 })
        ));
    }

    #[test]
    fn splitting_preserves_satisfiability() {
        // the canonical unsatisfiable formula
        let phi = CnfFormula::new(1, vec![vec![1], vec![-1]]).unwrap();
        let pc = sat_to_3p3sat(&phi).unwrap();
        assert!(satisfying_assignment(&pc.cnf).is_none());

        let mut rng = ChaCha8Rng::seed_from_u64(101);
        for trial in 0..60 {
            let n = rng.gen_range(2..=6u32);
            let m = rng.gen_range(1..=14usize);
            let clauses: Vec<Vec<i32>> = (0..m)
                .map(|_| {
                    let width = rng.gen_range(1..=3usize);
                    (0..width)
                        .map(|_| {
                            let v = rng.gen_range(1..=n) as i32;
                            if rng.gen_bool(0.5) {
                                v
                            } else {
                                -v
                            }
                        })
                        .collect()
                })
                .collect();
            let phi = CnfFormula::new(n, clauses).unwrap();
            let pc = sat_to_3p3sat(&phi).unwrap();
            let direct = brute_satisfiable(&phi);
            let split = satisfying_assignment(&pc.cnf);
            assert_eq!(direct, split.is_some(), "trial {trial}: {phi:?}");
            if let Some(a) = split {
                assert!(pc.cnf.is_satisfied_by(&a), "trial {trial}: search must return a model");
            }
        }
    }

    #[test]
    fn search_agrees_with_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..80 {
            let n = rng.gen_range(1..=8u32);
            let m = rng.gen_range(1..=20usize);
            let clauses: Vec<Vec<i32>> = (0..m)
                .map(|_| {
                    (0..rng.gen_range(1..=3usize))
                        .map(|_| {
                            let v = rng.gen_range(1..=n) as i32;
                            if rng.gen_bool(0.5) {
                                v
                            } else {
                                -v
                            }
                        })
                        .collect()
                })
                .collect();
            let cnf = CnfFormula::new(n, clauses).unwrap();
            match satisfying_assignment(&cnf) {
                Some(a) => assert!(cnf.is_satisfied_by(&a)),
                None => assert!(!brute_satisfiable(&cnf)),
            }
        }
    }
}
