//! Boolean formula AST, infix parser and printer, truth tables.
//!
//! Grammar (lowest to highest precedence):
//!
//! ```text
//! implies := or ( "=>" implies )?        right-associative
//! or      := xor ( "|" xor )*
//! xor     := and ( "^" and )*
//! and     := unary ( "&" unary )*
//! unary   := "!" unary | atom
//! atom    := "x" DIGITS | "0" | "1" | "(" implies ")"
//! ```
//!
//! Variables are 1-based. In assignments and truth tables, `x₁` is the least
//! significant bit of the integer index.

use std::fmt;

use thiserror::Error;

/// Largest register for which a full truth table is materialized.
pub const MAX_TABLE_VARS: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExprError {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("variable x{index} exceeds the declared count {n}")]
    VarOutOfRange { index: usize, n: usize },
    #[error("truth table over {0} variables exceeds the limit of {MAX_TABLE_VARS}")]
    TableTooLarge(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BoolExpr {
    Const(bool),
    Var(usize),
    Not(Box<BoolExpr>),
    And(Vec<BoolExpr>),
    Or(Vec<BoolExpr>),
    Xor(Vec<BoolExpr>),
    Implies(Box<BoolExpr>, Box<BoolExpr>),
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum NaryOp {
    And,
    Or,
    Xor,
}

fn nary(op: NaryOp, children: Vec<BoolExpr>) -> BoolExpr {
    let mut flat = Vec::with_capacity(children.len());
    for c in children {
        match (op, c) {
            (NaryOp::And, BoolExpr::And(cs))
            | (NaryOp::Or, BoolExpr::Or(cs))
            | (NaryOp::Xor, BoolExpr::Xor(cs)) => flat.extend(cs),
            (_, c) => flat.push(c),
        }
    }
    match flat.len() {
        0 => BoolExpr::Const(matches!(op, NaryOp::And)),
        1 => flat.pop().expect("one child"),
        _ => match op {
            NaryOp::And => BoolExpr::And(flat),
            NaryOp::Or => BoolExpr::Or(flat),
            NaryOp::Xor => BoolExpr::Xor(flat),
        },
    }
}

impl BoolExpr {
    pub fn var(j: usize) -> Self {
        BoolExpr::Var(j)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(e: BoolExpr) -> Self {
        BoolExpr::Not(Box::new(e))
    }

    /// Flattening conjunction; one child collapses to itself, none to `1`.
    pub fn and(children: Vec<BoolExpr>) -> Self {
        nary(NaryOp::And, children)
    }

    /// Flattening disjunction; one child collapses to itself, none to `0`.
    pub fn or(children: Vec<BoolExpr>) -> Self {
        nary(NaryOp::Or, children)
    }

    pub fn xor(children: Vec<BoolExpr>) -> Self {
        nary(NaryOp::Xor, children)
    }

    pub fn implies(lhs: BoolExpr, rhs: BoolExpr) -> Self {
        BoolExpr::Implies(Box::new(lhs), Box::new(rhs))
    }

    /// Literal for a signed DIMACS-style index.
    pub fn literal(lit: i64) -> Self {
        let v = BoolExpr::Var(lit.unsigned_abs() as usize);
        if lit < 0 {
            BoolExpr::not(v)
        } else {
            v
        }
    }

    /// Largest variable index, 0 if none.
    pub fn max_var(&self) -> usize {
        match self {
            BoolExpr::Const(_) => 0,
            BoolExpr::Var(j) => *j,
            BoolExpr::Not(e) => e.max_var(),
            BoolExpr::And(cs) | BoolExpr::Or(cs) | BoolExpr::Xor(cs) => {
                cs.iter().map(BoolExpr::max_var).max().unwrap_or(0)
            }
            BoolExpr::Implies(a, b) => a.max_var().max(b.max_var()),
        }
    }

    pub fn check_vars(&self, n: usize) -> Result<(), ExprError> {
        let m = self.max_var();
        if m > n {
            Err(ExprError::VarOutOfRange { index: m, n })
        } else {
            Ok(())
        }
    }

    /// Evaluates on the assignment whose bit `j-1` is `x_j`.
    pub fn eval(&self, x: u64) -> bool {
        match self {
            BoolExpr::Const(b) => *b,
            BoolExpr::Var(j) => (x >> (j - 1)) & 1 == 1,
            BoolExpr::Not(e) => !e.eval(x),
            BoolExpr::And(cs) => cs.iter().all(|c| c.eval(x)),
            BoolExpr::Or(cs) => cs.iter().any(|c| c.eval(x)),
            BoolExpr::Xor(cs) => cs.iter().fold(false, |acc, c| acc ^ c.eval(x)),
            BoolExpr::Implies(a, b) => !a.eval(x) || b.eval(x),
        }
    }

    /// Evaluates on an explicit assignment `[x₁, x₂, …]`.
    pub fn eval_bits(&self, bits: &[bool]) -> Result<bool, ExprError> {
        self.check_vars(bits.len())?;
        Ok(self.eval(crate::zham::bits_to_index(bits)))
    }

    /// Values on all `2ⁿ` assignments, indexed with `x₁` as the LSB.
    pub fn truth_table(&self, n: usize) -> Result<Vec<bool>, ExprError> {
        if n > MAX_TABLE_VARS {
            return Err(ExprError::TableTooLarge(n));
        }
        self.check_vars(n)?;
        Ok((0..1u64 << n).map(|x| self.eval(x)).collect())
    }

    pub fn parse(text: &str, n: usize) -> Result<Self, ExprError> {
        parse_expr(text, n)
    }

    fn precedence(&self) -> u8 {
        match self {
            BoolExpr::Implies(..) => 1,
            BoolExpr::Or(_) => 2,
            BoolExpr::Xor(_) => 3,
            BoolExpr::And(_) => 4,
            BoolExpr::Not(_) | BoolExpr::Const(_) | BoolExpr::Var(_) => 5,
        }
    }
}

impl fmt::Display for BoolExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn child(f: &mut fmt::Formatter<'_>, c: &BoolExpr, min_prec: u8) -> fmt::Result {
            if c.precedence() < min_prec {
                write!(f, "({c})")
            } else {
                write!(f, "{c}")
            }
        }
        fn join(f: &mut fmt::Formatter<'_>, cs: &[BoolExpr], op: &str, prec: u8) -> fmt::Result {
            for (i, c) in cs.iter().enumerate() {
                if i > 0 {
                    write!(f, " {op} ")?;
                }
                // Nested same-operator children only arise from hand-built trees;
                // parenthesize them so the printed form reparses to the same shape.
                child(f, c, prec + 1)?;
            }
            Ok(())
        }
        match self {
            BoolExpr::Const(b) => write!(f, "{}", *b as u8),
            BoolExpr::Var(j) => write!(f, "x{j}"),
            BoolExpr::Not(e) => {
                write!(f, "!")?;
                child(f, e, 5)
            }
            BoolExpr::And(cs) => join(f, cs, "&", 4),
            BoolExpr::Xor(cs) => join(f, cs, "^", 3),
            BoolExpr::Or(cs) => join(f, cs, "|", 2),
            BoolExpr::Implies(a, b) => {
                child(f, a, 2)?;
                write!(f, " => ")?;
                child(f, b, 1)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok {
    Var(usize),
    Const(bool),
    Not,
    And,
    Or,
    Xor,
    Implies,
    LParen,
    RParen,
    End,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ExprError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'!' => Tok::Not,
            b'&' => Tok::And,
            b'|' => Tok::Or,
            b'^' => Tok::Xor,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0' => Tok::Const(false),
            b'1' => Tok::Const(true),
            b'=' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    i += 1;
                    Tok::Implies
                } else {
                    return Err(ExprError::Syntax {
                        pos: i,
                        msg: "expected '=>'".into(),
                    });
                }
            }
            b'x' | b'X' => {
                let mut j = i + 1;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                if j == i + 1 {
                    return Err(ExprError::Syntax {
                        pos: i,
                        msg: "variable needs an index, e.g. x1".into(),
                    });
                }
                let index: usize = text[i + 1..j].parse().map_err(|_| ExprError::Syntax {
                    pos: i,
                    msg: "variable index too large".into(),
                })?;
                if index == 0 {
                    return Err(ExprError::Syntax {
                        pos: i,
                        msg: "variables are numbered from x1".into(),
                    });
                }
                i = j - 1;
                Tok::Var(index)
            }
            _ => {
                return Err(ExprError::Syntax {
                    pos: i,
                    msg: format!("unexpected character '{}'", c as char),
                })
            }
        };
        i += 1;
        out.push((start, tok));
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    n: usize,
}

impl Parser {
    fn peek(&self) -> Tok {
        self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.peek();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn implies(&mut self) -> Result<BoolExpr, ExprError> {
        let lhs = self.or()?;
        if self.peek() == Tok::Implies {
            self.bump();
            let rhs = self.implies()?;
            return Ok(BoolExpr::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<BoolExpr, ExprError> {
        let mut cs = vec![self.xor()?];
        while self.peek() == Tok::Or {
            self.bump();
            cs.push(self.xor()?);
        }
        Ok(BoolExpr::or(cs))
    }

    fn xor(&mut self) -> Result<BoolExpr, ExprError> {
        let mut cs = vec![self.and()?];
        while self.peek() == Tok::Xor {
            self.bump();
            cs.push(self.and()?);
        }
        Ok(BoolExpr::xor(cs))
    }

    fn and(&mut self) -> Result<BoolExpr, ExprError> {
        let mut cs = vec![self.unary()?];
        while self.peek() == Tok::And {
            self.bump();
            cs.push(self.unary()?);
        }
        Ok(BoolExpr::and(cs))
    }

    fn unary(&mut self) -> Result<BoolExpr, ExprError> {
        let pos = self.pos();
        match self.bump() {
            Tok::Not => Ok(BoolExpr::not(self.unary()?)),
            Tok::Var(j) => {
                if j > self.n {
                    Err(ExprError::VarOutOfRange { index: j, n: self.n })
                } else {
                    Ok(BoolExpr::Var(j))
                }
            }
            Tok::Const(b) => Ok(BoolExpr::Const(b)),
            Tok::LParen => {
                let e = self.implies()?;
                let close = self.pos();
                if self.bump() != Tok::RParen {
                    return Err(ExprError::Syntax {
                        pos: close,
                        msg: "expected ')'".into(),
                    });
                }
                Ok(e)
            }
            Tok::End => Err(ExprError::Syntax {
                pos,
                msg: "unexpected end of input".into(),
            }),
            t => Err(ExprError::Syntax {
                pos,
                msg: format!("unexpected token {t:?}"),
            }),
        }
    }
}

/// Parses an infix formula over `x1..xn`.
pub fn parse_expr(text: &str, n: usize) -> Result<BoolExpr, ExprError> {
    let mut p = Parser {
        toks: tokenize(text)?,
        at: 0,
        n,
    };
    let e = p.implies()?;
    if p.peek() != Tok::End {
        return Err(ExprError::Syntax {
            pos: p.pos(),
            msg: format!("trailing input starting with {:?}", p.peek()),
        });
    }
    Ok(e)
}

/// Weighted sum `Σ_j w_j f_j(x)` of Boolean clauses.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoBooleanObjective {
    pub n_vars: usize,
    pub clauses: Vec<(f64, BoolExpr)>,
}

impl PseudoBooleanObjective {
    pub fn new(n_vars: usize, clauses: Vec<(f64, BoolExpr)>) -> Result<Self, ExprError> {
        for (_, e) in &clauses {
            e.check_vars(n_vars)?;
        }
        Ok(Self { n_vars, clauses })
    }

    pub fn eval(&self, x: u64) -> f64 {
        self.clauses
            .iter()
            .map(|(w, e)| if e.eval(x) { *w } else { 0.0 })
            .sum()
    }

    pub fn total_weight(&self) -> f64 {
        self.clauses.iter().map(|(w, _)| w).sum()
    }
}
