//! Compilation of Boolean formulas, weighted clause sums and QUBO instances
//! into diagonal Hamiltonians.
//!
//! Compilation works directly on sparse `Z`-polynomials:
//!
//! | formula   | Hamiltonian                 |
//! |-----------|-----------------------------|
//! | `0`, `1`  | `0`, `I`                    |
//! | `x_j`     | `½(I − Z_j)`                |
//! | `¬f`      | `I − H_f`                   |
//! | `f ∧ g`   | `H_f H_g`                   |
//! | `f ∨ g`   | `H_f + H_g − H_f H_g`       |
//! | `f ⊕ g`   | `H_f + H_g − 2 H_f H_g`     |
//! | `f ⇒ g`   | `I − H_f + H_f H_g`         |
//!
//! n-ary nodes fold pairwise from the left.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{BoolExpr, ExprError, PseudoBooleanObjective};
use crate::zham::{DiagonalHamiltonian, HamiltonianError, ZTermKey};

/// Default abort threshold for intermediate term counts.
pub const DEFAULT_SIZE_LIMIT: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CompileError {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Hamiltonian(#[from] HamiltonianError),
    #[error("invalid QUBO instance: {0}")]
    Qubo(String),
    #[error("penalty weight {0} is not strictly positive")]
    PenaltyWeight(f64),
    #[error("invalid penalty spec: {0}")]
    PenaltySpec(String),
}

/// Composition-rule compiler with a term-count guard.
#[derive(Debug, Clone, Copy)]
pub struct Compiler {
    pub size_limit: usize,
}

impl Default for Compiler {
    fn default() -> Self {
        Self {
            size_limit: DEFAULT_SIZE_LIMIT,
        }
    }
}

impl Compiler {
    pub fn with_size_limit(size_limit: usize) -> Self {
        Self { size_limit }
    }

    fn guard(&self, h: DiagonalHamiltonian) -> Result<DiagonalHamiltonian, CompileError> {
        if h.size() > self.size_limit {
            return Err(HamiltonianError::SizeLimit {
                size: h.size(),
                limit: self.size_limit,
            }
            .into());
        }
        Ok(h)
    }

    /// `H_f` on `n` qubits for the formula `e`.
    pub fn compile(&self, e: &BoolExpr, n: usize) -> Result<DiagonalHamiltonian, CompileError> {
        e.check_vars(n)?;
        self.compile_node(e, n)
    }

    fn compile_node(&self, e: &BoolExpr, n: usize) -> Result<DiagonalHamiltonian, CompileError> {
        let h = match e {
            BoolExpr::Const(false) => DiagonalHamiltonian::zero(n)?,
            BoolExpr::Const(true) => DiagonalHamiltonian::identity(n)?,
            BoolExpr::Var(j) => DiagonalHamiltonian::variable(n, *j)?,
            BoolExpr::Not(f) => negate(&self.compile_node(f, n)?),
            BoolExpr::And(cs) => self.fold(cs, n, |f, g| Ok(f.mul(g)?))?,
            BoolExpr::Or(cs) => self.fold(cs, n, |f, g| {
                let fg = f.mul(g)?;
                Ok(f.add(g)?.sub(&fg)?)
            })?,
            BoolExpr::Xor(cs) => self.fold(cs, n, |f, g| {
                let fg = f.mul(g)?;
                Ok(f.add(g)?.sub(&fg.scale(2.0))?)
            })?,
            BoolExpr::Implies(a, b) => {
                let ha = self.compile_node(a, n)?;
                let hb = self.compile_node(b, n)?;
                negate(&ha).add(&ha.mul(&hb)?)?
            }
        };
        self.guard(h)
    }

    fn fold<F>(&self, cs: &[BoolExpr], n: usize, op: F) -> Result<DiagonalHamiltonian, CompileError>
    where
        F: Fn(&DiagonalHamiltonian, &DiagonalHamiltonian) -> Result<DiagonalHamiltonian, CompileError>,
    {
        let mut iter = cs.iter();
        let first = iter
            .next()
            .ok_or_else(|| ExprError::Syntax {
                pos: 0,
                msg: "n-ary node without children".into(),
            })?;
        let mut acc = self.compile_node(first, n)?;
        for c in iter {
            let h = self.compile_node(c, n)?;
            acc = self.guard(op(&acc, &h)?)?;
        }
        Ok(acc)
    }

    /// `Σ_j w_j H_{f_j}`
    pub fn compile_pseudo(
        &self,
        obj: &PseudoBooleanObjective,
        n: usize,
    ) -> Result<DiagonalHamiltonian, CompileError> {
        let mut acc = DiagonalHamiltonian::zero(n)?;
        for (w, f) in &obj.clauses {
            acc = self.guard(acc.add(&self.compile(f, n)?.scale(*w))?)?;
        }
        Ok(acc)
    }
}

fn negate(h: &DiagonalHamiltonian) -> DiagonalHamiltonian {
    h.scale(-1.0).shift(1.0)
}

/// `H_f` with the default size guard.
pub fn compile(e: &BoolExpr, n: usize) -> Result<DiagonalHamiltonian, CompileError> {
    Compiler::default().compile(e, n)
}

pub fn compile_pseudo(
    obj: &PseudoBooleanObjective,
    n: usize,
) -> Result<DiagonalHamiltonian, CompileError> {
    Compiler::default().compile_pseudo(obj, n)
}

/// `f(x) = a + Σ c_j x_j + Σ_{j<k} d_jk x_j x_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuboInstance {
    n: usize,
    constant: f64,
    linear: Vec<f64>,
    /// Row-major `n × n`, symmetric with zero diagonal.
    quadratic: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct QuboDoc {
    n: usize,
    #[serde(default)]
    a: f64,
    #[serde(default)]
    linear: Vec<f64>,
    #[serde(default)]
    quadratic: Vec<(usize, usize, f64)>,
}

impl QuboInstance {
    /// Builds from a dense quadratic matrix, which must be symmetric with zero diagonal.
    pub fn new(
        constant: f64,
        linear: Vec<f64>,
        quadratic: Vec<Vec<f64>>,
    ) -> Result<Self, CompileError> {
        let n = linear.len();
        if quadratic.len() != n || quadratic.iter().any(|r| r.len() != n) {
            return Err(CompileError::Qubo(format!(
                "quadratic matrix must be {n}x{n}"
            )));
        }
        for (j, row) in quadratic.iter().enumerate() {
            if row[j] != 0.0 {
                return Err(CompileError::Qubo(format!(
                    "nonzero diagonal entry d[{0}][{0}]",
                    j + 1
                )));
            }
            for (k, v) in row.iter().enumerate() {
                if *v != quadratic[k][j] {
                    return Err(CompileError::Qubo(format!(
                        "asymmetric entries d[{}][{}] != d[{}][{}]",
                        j + 1,
                        k + 1,
                        k + 1,
                        j + 1
                    )));
                }
            }
        }
        if n > crate::zham::MAX_QUBITS {
            return Err(HamiltonianError::TooManyQubits(n).into());
        }
        Ok(Self {
            n,
            constant,
            linear,
            quadratic: quadratic.into_iter().flatten().collect(),
        })
    }

    /// Builds from 1-based `(j, k, d_jk)` couplings; repeated pairs are summed.
    pub fn from_couplings(
        n: usize,
        constant: f64,
        linear: Vec<f64>,
        couplings: &[(usize, usize, f64)],
    ) -> Result<Self, CompileError> {
        if linear.len() != n {
            return Err(CompileError::Qubo(format!(
                "expected {n} linear coefficients, got {}",
                linear.len()
            )));
        }
        let mut d = vec![vec![0.0; n]; n];
        for &(j, k, w) in couplings {
            if j == 0 || k == 0 || j > n || k > n {
                return Err(CompileError::Qubo(format!(
                    "coupling ({j}, {k}) out of range 1..={n}"
                )));
            }
            if j == k {
                return Err(CompileError::Qubo(format!(
                    "diagonal coupling ({j}, {k}); use the linear term"
                )));
            }
            d[j - 1][k - 1] += w;
            d[k - 1][j - 1] += w;
        }
        Self::new(constant, linear, d)
    }

    /// Parses `{"n":…, "a":…, "linear":[…], "quadratic":[[j,k,d],…]}`.
    pub fn from_json(text: &str) -> Result<Self, CompileError> {
        let doc: QuboDoc =
            serde_json::from_str(text).map_err(|e| CompileError::Qubo(e.to_string()))?;
        let linear = if doc.linear.is_empty() {
            vec![0.0; doc.n]
        } else {
            doc.linear
        };
        Self::from_couplings(doc.n, doc.a, linear, &doc.quadratic)
    }

    pub fn to_json(&self) -> String {
        let doc = QuboDoc {
            n: self.n,
            a: self.constant,
            linear: self.linear.clone(),
            quadratic: self.couplings().map(|(j, k, d)| (j + 1, k + 1, d)).collect(),
        };
        serde_json::to_string(&doc).expect("serializable")
    }

    pub fn n_vars(&self) -> usize {
        self.n
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    pub fn linear(&self) -> &[f64] {
        &self.linear
    }

    /// `d_jk` for 0-based indices.
    pub fn coupling(&self, j: usize, k: usize) -> f64 {
        self.quadratic[j * self.n + k]
    }

    /// Nonzero upper-triangle couplings `(j, k, d_jk)`, 0-based, `j < k`.
    pub fn couplings(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |j| {
            (j + 1..self.n).filter_map(move |k| {
                let d = self.coupling(j, k);
                (d != 0.0).then_some((j, k, d))
            })
        })
    }

    pub fn eval(&self, x: u64) -> f64 {
        let bit = |j: usize| ((x >> j) & 1) as f64;
        let lin: f64 = self.linear.iter().enumerate().map(|(j, c)| c * bit(j)).sum();
        let quad: f64 = self.couplings().map(|(j, k, d)| d * bit(j) * bit(k)).sum();
        self.constant + lin + quad
    }

    /// The same polynomial as weighted clauses `a·1 + Σ c_j·x_j + Σ d_jk·(x_j ∧ x_k)`.
    pub fn as_objective(&self) -> PseudoBooleanObjective {
        let mut clauses = vec![(self.constant, BoolExpr::Const(true))];
        clauses.extend(
            self.linear
                .iter()
                .enumerate()
                .map(|(j, c)| (*c, BoolExpr::Var(j + 1))),
        );
        clauses.extend(self.couplings().map(|(j, k, d)| {
            (d, BoolExpr::and(vec![BoolExpr::Var(j + 1), BoolExpr::Var(k + 1)]))
        }));
        PseudoBooleanObjective {
            n_vars: self.n,
            clauses,
        }
    }
}

/// Closed form `(a+c+d)I − ½Σ(c_j+d_j)Z_j + ¼Σ_{j<k} d_jk Z_jZ_k` with
/// `c = ½Σc_j`, `d = ¼Σ_{j<k}d_jk`, `d_j = ½Σ_{k≠j}d_jk`.
pub fn compile_qubo(q: &QuboInstance) -> Result<DiagonalHamiltonian, CompileError> {
    let n = q.n;
    let c = 0.5 * q.linear.iter().sum::<f64>();
    let d = 0.25 * q.couplings().map(|(_, _, w)| w).sum::<f64>();
    let mut terms = Vec::with_capacity(1 + n + n * (n.saturating_sub(1)) / 2);
    terms.push((ZTermKey::IDENTITY, q.constant + c + d));
    for j in 0..n {
        let dj = 0.5 * (0..n).filter(|k| *k != j).map(|k| q.coupling(j, k)).sum::<f64>();
        terms.push((ZTermKey::from_qubits([j]), -0.5 * (q.linear[j] + dj)));
    }
    for (j, k, w) in q.couplings() {
        terms.push((ZTermKey::from_qubits([j, k]), 0.25 * w));
    }
    Ok(DiagonalHamiltonian::from_terms(n, terms)?)
}

/// The same QUBO compiled through the composition rules.
pub fn compile_qubo_by_rules(q: &QuboInstance) -> Result<DiagonalHamiltonian, CompileError> {
    compile_pseudo(&q.as_objective(), q.n)
}

/// Objective plus weighted Boolean constraints; `g_j(x) = 1` marks `x` infeasible.
#[derive(Debug, Clone, PartialEq)]
pub struct PenaltySpec {
    pub objective: DiagonalHamiltonian,
    pub penalties: Vec<(f64, BoolExpr)>,
}

impl PenaltySpec {
    /// Uses `2‖H_f‖₁ + 1` for every weight. Since `|f(x)| ≤ ‖H_f‖₁`, every
    /// violated constraint lifts a state above all feasible eigenvalues.
    pub fn with_auto_weights(
        objective: DiagonalHamiltonian,
        constraints: Vec<BoolExpr>,
    ) -> Self {
        let w = auto_penalty_weight(&objective);
        Self {
            penalties: constraints.into_iter().map(|g| (w, g)).collect(),
            objective,
        }
    }

    /// Reads `{"n":…, "objective":[{"weight":…,"expr":…}], "penalties":[{"expr":…, "weight":…?}]}`.
    /// A missing penalty weight is chosen automatically.
    pub fn from_json(text: &str) -> Result<Self, CompileError> {
        let doc: PenaltyDoc =
            serde_json::from_str(text).map_err(|e| CompileError::PenaltySpec(e.to_string()))?;
        let mut clauses = Vec::with_capacity(doc.objective.len());
        for c in &doc.objective {
            clauses.push((c.weight.unwrap_or(1.0), BoolExpr::parse(&c.expr, doc.n)?));
        }
        let objective = compile_pseudo(&PseudoBooleanObjective::new(doc.n, clauses)?, doc.n)?;
        let auto = auto_penalty_weight(&objective);
        let mut penalties = Vec::with_capacity(doc.penalties.len());
        for p in &doc.penalties {
            penalties.push((p.weight.unwrap_or(auto), BoolExpr::parse(&p.expr, doc.n)?));
        }
        Ok(Self {
            objective,
            penalties,
        })
    }
}

#[derive(Debug, Deserialize)]
struct PenaltyDoc {
    n: usize,
    #[serde(default)]
    objective: Vec<WeightedExpr>,
    #[serde(default)]
    penalties: Vec<WeightedExpr>,
}

#[derive(Debug, Deserialize)]
struct WeightedExpr {
    expr: String,
    weight: Option<f64>,
}

pub fn auto_penalty_weight(objective: &DiagonalHamiltonian) -> f64 {
    2.0 * objective.one_norm() + 1.0
}

/// `H_p = H_f + Σ_j w_j H_{g_j}`
pub fn augment_penalties(p: &PenaltySpec) -> Result<DiagonalHamiltonian, CompileError> {
    let n = p.objective.n_qubits();
    let mut acc = p.objective.clone();
    for (w, g) in &p.penalties {
        if !(*w > 0.0) {
            return Err(CompileError::PenaltyWeight(*w));
        }
        acc = acc.add(&compile(g, n)?.scale(*w))?;
    }
    Ok(acc)
}

/// `H_g = I ⊗ x_a + H_f ⊗ Z_a` on `n + 1` qubits with the ancilla on the
/// highest index. `|x⟩|y⟩` has eigenvalue 0 iff `y = f(x)` and 1 otherwise.
pub fn ground_state_logic(f: &BoolExpr, n: usize) -> Result<DiagonalHamiltonian, CompileError> {
    let hf = compile(f, n)?;
    let ancilla_x = DiagonalHamiltonian::variable(1, 1)?;
    let ancilla_z = DiagonalHamiltonian::monomial(1, ZTermKey::from_qubits([0]), 1.0)?;
    let id = DiagonalHamiltonian::identity(n)?;
    Ok(id.tensor(&ancilla_x)?.add(&hf.tensor(&ancilla_z)?)?)
}
