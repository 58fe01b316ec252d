//! DIMACS CNF and weighted CNF readers.
//!
//! `p cnf <vars> <clauses>` yields unit-weight clauses. `p wcnf <vars>
//! <clauses> [top]` expects a leading (real) weight on every clause line; the
//! optional `top` value is accepted and ignored, so every clause is soft.

use thiserror::Error;

use crate::expr::{BoolExpr, PseudoBooleanObjective};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DimacsError {
    #[error("line {line}: invalid p-line: {msg}")]
    Header { line: usize, msg: String },
    #[error("missing 'p cnf' or 'p wcnf' header")]
    MissingHeader,
    #[error("line {line}: literal {lit} out of range for {n} variables")]
    LiteralOutOfRange { line: usize, lit: i64, n: usize },
    #[error("line {line}: invalid token '{token}'")]
    Token { line: usize, token: String },
    #[error("line {line}: invalid clause weight '{token}'")]
    Weight { line: usize, token: String },
    #[error("clause starting on line {line} is not terminated by 0")]
    MissingTerminator { line: usize },
}

/// Both readings of a CNF file.
#[derive(Debug, Clone, PartialEq)]
pub struct CnfInstance {
    /// MAX-SAT view: one weighted OR-clause per input clause.
    pub objective: PseudoBooleanObjective,
    /// SAT view: the conjunction of all clauses.
    pub conjunction: BoolExpr,
    /// Raw clauses as signed literals.
    pub clauses: Vec<Vec<i64>>,
}

impl CnfInstance {
    pub fn n_vars(&self) -> usize {
        self.objective.n_vars
    }
}

fn clause_expr(lits: &[i64]) -> BoolExpr {
    BoolExpr::or(lits.iter().map(|l| BoolExpr::literal(*l)).collect())
}

/// Parses DIMACS CNF / WCNF text into its MAX-SAT and SAT views.
pub fn parse_dimacs(text: &str) -> Result<CnfInstance, DimacsError> {
    let mut header: Option<(usize, bool)> = None;
    let mut clauses: Vec<(f64, Vec<i64>)> = Vec::new();
    let mut pending: Option<(usize, f64, Vec<i64>)> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(DimacsError::Header {
                    line: line_no,
                    msg: "duplicate header".into(),
                });
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let weighted = match fields.get(1) {
                Some(&"cnf") => false,
                Some(&"wcnf") => true,
                _ => {
                    return Err(DimacsError::Header {
                        line: line_no,
                        msg: "expected 'cnf' or 'wcnf'".into(),
                    })
                }
            };
            let max_fields = if weighted { 5 } else { 4 };
            if fields.len() < 4 || fields.len() > max_fields {
                return Err(DimacsError::Header {
                    line: line_no,
                    msg: format!("wrong number of fields in '{line}'"),
                });
            }
            let n: usize = fields[2].parse().map_err(|_| DimacsError::Header {
                line: line_no,
                msg: format!("bad variable count '{}'", fields[2]),
            })?;
            fields[3].parse::<usize>().map_err(|_| DimacsError::Header {
                line: line_no,
                msg: format!("bad clause count '{}'", fields[3]),
            })?;
            header = Some((n, weighted));
            continue;
        }
        let (n, weighted) = header.ok_or(DimacsError::MissingHeader)?;
        for token in line.split_whitespace() {
            let (_, weight, lits) = match pending.as_mut() {
                Some(p) => p,
                None if weighted => {
                    let w: f64 = token.parse().map_err(|_| DimacsError::Weight {
                        line: line_no,
                        token: token.to_string(),
                    })?;
                    if !w.is_finite() {
                        return Err(DimacsError::Weight {
                            line: line_no,
                            token: token.to_string(),
                        });
                    }
                    pending = Some((line_no, w, Vec::new()));
                    continue;
                }
                None => pending.insert((line_no, 1.0, Vec::new())),
            };
            let lit: i64 = token.parse().map_err(|_| DimacsError::Token {
                line: line_no,
                token: token.to_string(),
            })?;
            if lit == 0 {
                clauses.push((*weight, std::mem::take(lits)));
                pending = None;
            } else if lit.unsigned_abs() as usize > n {
                return Err(DimacsError::LiteralOutOfRange {
                    line: line_no,
                    lit,
                    n,
                });
            } else {
                lits.push(lit);
            }
        }
    }

    let (n, _) = header.ok_or(DimacsError::MissingHeader)?;
    if let Some((line, _, _)) = pending {
        return Err(DimacsError::MissingTerminator { line });
    }

    let objective = PseudoBooleanObjective {
        n_vars: n,
        clauses: clauses
            .iter()
            .map(|(w, lits)| (*w, clause_expr(lits)))
            .collect(),
    };
    let conjunction = BoolExpr::and(clauses.iter().map(|(_, lits)| clause_expr(lits)).collect());
    Ok(CnfInstance {
        objective,
        conjunction,
        clauses: clauses.into_iter().map(|(_, l)| l).collect(),
    })
}

/// Writes unit-weight clauses as DIMACS CNF.
pub fn write_dimacs(n: usize, clauses: &[Vec<i64>]) -> String {
    let mut out = format!("p cnf {} {}\n", n, clauses.len());
    for c in clauses {
        for l in c {
            out.push_str(&l.to_string());
            out.push(' ');
        }
        out.push_str("0\n");
    }
    out
}
