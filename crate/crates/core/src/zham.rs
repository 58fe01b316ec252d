//! Diagonal Hamiltonians as sparse real polynomials in Pauli `Z` operators.
//!
//! A [`DiagonalHamiltonian`] on `n` qubits is a real-weighted sum of
//! `Z`-products `Z_S = ∏_{j∈S} Z_j`, keyed by the characteristic bit mask of
//! `S`. Multiplication uses `Z_S Z_T = Z_{S△T}`, so the algebra stays exact
//! apart from floating point coefficient arithmetic.
//!
//! Bit order: qubit `j` (1-based in all text formats) is bit `j-1` of a mask,
//! and variable `x_j` is bit `j-1` of a basis-state index.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numfmt::format_sig;

/// Coefficients with smaller magnitude are dropped after every operation.
pub const PRUNE_EPS: f64 = 1e-12;

/// Hard limit on register width for the sparse algebra (one machine word per key).
pub const MAX_QUBITS: usize = 63;

/// Significant digits used by the human-readable text form.
pub const TEXT_DIGITS: usize = 12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HamiltonianError {
    #[error("qubit count mismatch: {left} vs {right}")]
    QubitMismatch { left: usize, right: usize },
    #[error("{0} qubits exceeds the sparse limit of {MAX_QUBITS}")]
    TooManyQubits(usize),
    #[error("term mask {mask:#x} touches qubits beyond n = {n}")]
    KeyOutOfRange { mask: u64, n: usize },
    #[error("qubit index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("basis string has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("term count {size} exceeds the size limit of {limit}")]
    SizeLimit { size: usize, limit: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

/// Characteristic vector of a subset `S ⊆ [n]`; the empty mask is the identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ZTermKey(u64);

impl ZTermKey {
    pub const IDENTITY: ZTermKey = ZTermKey(0);

    pub fn new(mask: u64) -> Self {
        ZTermKey(mask)
    }

    /// Builds a key from 0-based qubit indices.
    pub fn from_qubits<I: IntoIterator<Item = usize>>(qubits: I) -> Self {
        ZTermKey(qubits.into_iter().fold(0u64, |m, q| m | (1u64 << q)))
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    pub fn is_identity(self) -> bool {
        self.0 == 0
    }

    /// `|S|`
    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    /// 0-based qubit indices in ascending order.
    pub fn qubits(self) -> impl Iterator<Item = usize> {
        let mut m = self.0;
        std::iter::from_fn(move || {
            if m == 0 {
                None
            } else {
                let q = m.trailing_zeros() as usize;
                m &= m - 1;
                Some(q)
            }
        })
    }

    /// Character `χ_S(x) = (-1)^{S·x}`.
    pub fn character(self, x: u64) -> f64 {
        if (self.0 & x).count_ones() % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// `Z_S Z_T = Z_{S△T}`
    pub fn product(self, other: ZTermKey) -> ZTermKey {
        ZTermKey(self.0 ^ other.0)
    }

    pub fn shifted(self, by: usize) -> ZTermKey {
        ZTermKey(self.0 << by)
    }

    /// `Z1Z3`-style label, `I` for the identity.
    pub fn label(self) -> String {
        if self.is_identity() {
            return "I".to_string();
        }
        self.qubits().map(|q| format!("Z{}", q + 1)).collect()
    }
}

/// Sparse real-weighted sum of `Z`-products on a fixed register.
///
/// Terms iterate in ascending mask order. The zero operator has no terms.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalHamiltonian {
    n: usize,
    terms: BTreeMap<ZTermKey, f64>,
}

fn check_width(n: usize) -> Result<(), HamiltonianError> {
    if n > MAX_QUBITS {
        Err(HamiltonianError::TooManyQubits(n))
    } else {
        Ok(())
    }
}

fn register_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl DiagonalHamiltonian {
    pub fn zero(n: usize) -> Result<Self, HamiltonianError> {
        check_width(n)?;
        Ok(Self {
            n,
            terms: BTreeMap::new(),
        })
    }

    pub fn constant(n: usize, c: f64) -> Result<Self, HamiltonianError> {
        Self::from_terms(n, [(ZTermKey::IDENTITY, c)])
    }

    pub fn identity(n: usize) -> Result<Self, HamiltonianError> {
        Self::constant(n, 1.0)
    }

    /// `H_{x_j} = ½(I - Z_j)` for 1-based `j`.
    pub fn variable(n: usize, j: usize) -> Result<Self, HamiltonianError> {
        if j == 0 || j > n {
            return Err(HamiltonianError::IndexOutOfRange { index: j, n });
        }
        Self::from_terms(
            n,
            [
                (ZTermKey::IDENTITY, 0.5),
                (ZTermKey::from_qubits([j - 1]), -0.5),
            ],
        )
    }

    /// Single term `w·Z_S`.
    pub fn monomial(n: usize, key: ZTermKey, w: f64) -> Result<Self, HamiltonianError> {
        Self::from_terms(n, [(key, w)])
    }

    /// Sums duplicate keys and prunes small coefficients.
    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self, HamiltonianError>
    where
        I: IntoIterator<Item = (ZTermKey, f64)>,
    {
        check_width(n)?;
        let allowed = register_mask(n);
        let mut map = BTreeMap::new();
        for (k, w) in terms {
            if k.mask() & !allowed != 0 {
                return Err(HamiltonianError::KeyOutOfRange { mask: k.mask(), n });
            }
            *map.entry(k).or_insert(0.0) += w;
        }
        map.retain(|_, w: &mut f64| w.abs() >= PRUNE_EPS);
        Ok(Self { n, terms: map })
    }

    fn from_accumulator(n: usize, acc: HashMap<ZTermKey, f64>) -> Self {
        let terms = acc
            .into_iter()
            .filter(|(_, w)| w.abs() >= PRUNE_EPS)
            .collect();
        Self { n, terms }
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (ZTermKey, f64)> + '_ {
        self.terms.iter().map(|(k, w)| (*k, *w))
    }

    pub fn coeff(&self, key: ZTermKey) -> f64 {
        self.terms.get(&key).copied().unwrap_or(0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn same_width(&self, other: &Self) -> Result<(), HamiltonianError> {
        if self.n != other.n {
            Err(HamiltonianError::QubitMismatch {
                left: self.n,
                right: other.n,
            })
        } else {
            Ok(())
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, HamiltonianError> {
        self.same_width(other)?;
        let mut terms = self.terms.clone();
        for (k, w) in &other.terms {
            *terms.entry(*k).or_insert(0.0) += w;
        }
        terms.retain(|_, w| w.abs() >= PRUNE_EPS);
        Ok(Self { n: self.n, terms })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, HamiltonianError> {
        self.add(&other.scale(-1.0))
    }

    /// Product via `Z_S Z_T = Z_{S△T}`.
    pub fn mul(&self, other: &Self) -> Result<Self, HamiltonianError> {
        self.same_width(other)?;
        let mut acc: HashMap<ZTermKey, f64> =
            HashMap::with_capacity(self.terms.len().max(other.terms.len()));
        for (ka, wa) in &self.terms {
            for (kb, wb) in &other.terms {
                *acc.entry(ka.product(*kb)).or_insert(0.0) += wa * wb;
            }
        }
        Ok(Self::from_accumulator(self.n, acc))
    }

    pub fn scale(&self, w: f64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(k, c)| (*k, c * w))
            .filter(|(_, c)| c.abs() >= PRUNE_EPS)
            .collect();
        Self { n: self.n, terms }
    }

    /// Adds `c·I`.
    pub fn shift(&self, c: f64) -> Self {
        let mut terms = self.terms.clone();
        *terms.entry(ZTermKey::IDENTITY).or_insert(0.0) += c;
        terms.retain(|_, w| w.abs() >= PRUNE_EPS);
        Self { n: self.n, terms }
    }

    /// Eigenvalue on the basis state with integer index `x` (x₁ = LSB).
    pub fn eval(&self, x: u64) -> f64 {
        self.terms.iter().map(|(k, w)| w * k.character(x)).sum()
    }

    /// Eigenvalue on a basis string given as bits `[x₁, x₂, …]`.
    pub fn eval_bits(&self, bits: &[bool]) -> Result<f64, HamiltonianError> {
        if bits.len() != self.n {
            return Err(HamiltonianError::LengthMismatch {
                expected: self.n,
                got: bits.len(),
            });
        }
        Ok(self.eval(bits_to_index(bits)))
    }

    /// Largest term weight; 0 for the zero operator.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(|k| k.degree()).max().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        self.terms.len()
    }

    /// `f̂(∅) = tr(H)/2ⁿ`
    pub fn identity_coeff(&self) -> f64 {
        self.coeff(ZTermKey::IDENTITY)
    }

    /// `Σ_S |f̂(S)|`, an upper bound on the operator norm.
    pub fn one_norm(&self) -> f64 {
        self.terms.values().map(|w| w.abs()).sum()
    }

    /// `Σ_S f̂(S)²`
    pub fn sum_of_squares(&self) -> f64 {
        self.terms.values().map(|w| w * w).sum()
    }

    /// `Σ_S f̂(S)`, the eigenvalue on `|0ⁿ⟩`.
    pub fn coeff_sum(&self) -> f64 {
        self.terms.values().sum()
    }

    /// `self ⊗ other` with `self` on the low qubits and `other` shifted above it.
    pub fn tensor(&self, other: &Self) -> Result<Self, HamiltonianError> {
        let n = self.n + other.n;
        check_width(n)?;
        let mut acc = HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ka, wa) in &self.terms {
            for (kb, wb) in &other.terms {
                *acc.entry(ZTermKey(ka.0 | (kb.0 << self.n))).or_insert(0.0) += wa * wb;
            }
        }
        Ok(Self::from_accumulator(n, acc))
    }

    /// Re-embeds the operator into a wider register, keeping qubit positions.
    pub fn widen(&self, n: usize) -> Result<Self, HamiltonianError> {
        if n < self.n {
            return Err(HamiltonianError::QubitMismatch {
                left: self.n,
                right: n,
            });
        }
        check_width(n)?;
        Ok(Self {
            n,
            terms: self.terms.clone(),
        })
    }

    /// Drops coefficients below `eps` (in addition to the default pruning).
    pub fn pruned(&self, eps: f64) -> Self {
        let mut terms = self.terms.clone();
        terms.retain(|_, w| w.abs() >= eps);
        Self { n: self.n, terms }
    }

    /// Largest coefficient difference over the union of supports.
    pub fn max_coeff_diff(&self, other: &Self) -> f64 {
        let mut worst = 0.0f64;
        for (k, w) in &self.terms {
            worst = worst.max((w - other.coeff(*k)).abs());
        }
        for (k, w) in &other.terms {
            if !self.terms.contains_key(k) {
                worst = worst.max(w.abs());
            }
        }
        worst
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.n == other.n && self.max_coeff_diff(other) <= tol
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }

    pub fn to_json(&self) -> String {
        let doc = OperatorDoc {
            n: self.n,
            terms: self
                .terms()
                .map(|(k, w)| TermDoc {
                    paulis: spaced_label(k),
                    coeff: w,
                    coeff_im: None,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self, HamiltonianError> {
        let doc: OperatorDoc =
            serde_json::from_str(text).map_err(|e| HamiltonianError::Parse(e.to_string()))?;
        let mut terms = Vec::with_capacity(doc.terms.len());
        for t in &doc.terms {
            if t.coeff_im.is_some_and(|im| im != 0.0) {
                return Err(HamiltonianError::Parse(format!(
                    "term '{}' has an imaginary coefficient",
                    t.paulis
                )));
            }
            terms.push((parse_z_label(&t.paulis, doc.n)?, t.coeff));
        }
        Self::from_terms(doc.n, terms)
    }

    /// Parses the text form, e.g. `0.75 I - 0.25 Z1 - 0.25 Z1Z2`.
    pub fn from_text(text: &str, n: usize) -> Result<Self, HamiltonianError> {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens == ["0"] {
            return Self::zero(n);
        }
        let mut terms = Vec::new();
        let mut i = 0;
        let mut sign = 1.0;
        let mut expect_sign = false;
        while i < tokens.len() {
            let tok = tokens[i];
            if expect_sign {
                sign = match tok {
                    "+" => 1.0,
                    "-" => -1.0,
                    _ => {
                        return Err(HamiltonianError::Parse(format!(
                            "expected '+' or '-', found '{tok}'"
                        )))
                    }
                };
                i += 1;
                expect_sign = false;
                continue;
            }
            let coeff: f64 = tok
                .parse()
                .map_err(|_| HamiltonianError::Parse(format!("bad coefficient '{tok}'")))?;
            let label = tokens
                .get(i + 1)
                .ok_or_else(|| HamiltonianError::Parse("missing operator label".into()))?;
            terms.push((parse_z_label(label, n)?, sign * coeff));
            i += 2;
            expect_sign = true;
        }
        if !expect_sign {
            return Err(HamiltonianError::Parse("empty or dangling expression".into()));
        }
        Self::from_terms(n, terms)
    }
}

impl fmt::Display for DiagonalHamiltonian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, w)) in self.terms().enumerate() {
            let mag = format_sig(w.abs(), TEXT_DIGITS);
            match (i, w < 0.0) {
                (0, false) => write!(f, "{mag} {}", k.label())?,
                (0, true) => write!(f, "-{mag} {}", k.label())?,
                (_, false) => write!(f, " + {mag} {}", k.label())?,
                (_, true) => write!(f, " - {mag} {}", k.label())?,
            }
        }
        Ok(())
    }
}

/// Index of a basis string `[x₁, x₂, …]` with x₁ as the least significant bit.
pub fn bits_to_index(bits: &[bool]) -> u64 {
    bits.iter()
        .enumerate()
        .fold(0u64, |acc, (j, b)| acc | ((*b as u64) << j))
}

fn spaced_label(k: ZTermKey) -> String {
    if k.is_identity() {
        return "I".to_string();
    }
    k.qubits()
        .map(|q| format!("Z{}", q + 1))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Accepts `I`, `Z1Z3`, `Z1 Z3`, or an empty string.
fn parse_z_label(label: &str, n: usize) -> Result<ZTermKey, HamiltonianError> {
    let compact: String = label.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() || compact == "I" {
        return Ok(ZTermKey::IDENTITY);
    }
    let mut mask = 0u64;
    for part in compact.split('Z').skip(1) {
        let j: usize = part
            .parse()
            .map_err(|_| HamiltonianError::Parse(format!("bad Pauli label '{label}'")))?;
        if j == 0 || j > n {
            return Err(HamiltonianError::IndexOutOfRange { index: j, n });
        }
        mask ^= 1u64 << (j - 1);
    }
    if !compact.starts_with('Z') {
        return Err(HamiltonianError::Parse(format!("bad Pauli label '{label}'")));
    }
    Ok(ZTermKey(mask))
}

/// JSON document shared by diagonal and general Pauli operators.
#[derive(Debug, Serialize, Deserialize)]
pub(crate) struct OperatorDoc {
    pub n: usize,
    pub terms: Vec<TermDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
pub(crate) struct TermDoc {
    pub paulis: String,
    pub coeff: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeff_im: Option<f64>,
}
