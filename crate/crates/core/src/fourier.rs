//! Truth tables and Fourier coefficients over the parity basis.
//!
//! `f̂(S) = 2⁻ⁿ Σ_x f(x)(−1)^{S·x}`; the normalization is applied only in the
//! table-to-coefficients direction, so the inverse is the bare transform.

use std::fmt;

use serde::Deserialize;
use thiserror::Error;

use crate::expr::{BoolExpr, ExprError, MAX_TABLE_VARS};
use crate::numfmt::format_sig;
use crate::zham::{DiagonalHamiltonian, HamiltonianError, ZTermKey, TEXT_DIGITS};

/// Max-norm bound for approximate representations.
pub const APPROX_BOUND: f64 = 1.0 / 3.0;

/// Slack when validating that a Hamiltonian represents a 0/1 function.
pub const PROJECTOR_TOL: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FourierError {
    #[error("table over {0} variables exceeds the limit of {MAX_TABLE_VARS}")]
    TooLarge(usize),
    #[error("table length {0} is not a power of two")]
    BadLength(usize),
    #[error("invalid truth table: {0}")]
    Parse(String),
    #[error("operator is not a projector (deviation {deviation:e}); not a Boolean function")]
    NotBoolean { deviation: f64 },
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Hamiltonian(#[from] HamiltonianError),
}

/// Real values `f(x)` for all `2ⁿ` inputs, indexed with `x₁` as the LSB.
#[derive(Debug, Clone, PartialEq)]
pub struct TruthTable {
    n: usize,
    values: Vec<f64>,
}

impl TruthTable {
    pub fn new(values: Vec<f64>) -> Result<Self, FourierError> {
        let len = values.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(FourierError::BadLength(len));
        }
        let n = len.trailing_zeros() as usize;
        if n > MAX_TABLE_VARS {
            return Err(FourierError::TooLarge(n));
        }
        Ok(Self { n, values })
    }

    pub fn from_bools(bits: &[bool]) -> Result<Self, FourierError> {
        Self::new(bits.iter().map(|b| *b as u8 as f64).collect())
    }

    /// Character `k` of `"0111"` is `f` at index `k`.
    pub fn from_bit_string(s: &str) -> Result<Self, FourierError> {
        let values = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(0.0),
                '1' => Ok(1.0),
                _ => Err(FourierError::Parse(format!("unexpected character '{c}'"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(values)
    }

    /// A JSON array of reals.
    pub fn from_json(text: &str) -> Result<Self, FourierError> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Doc {
            Values(Vec<f64>),
            Object { values: Vec<f64> },
        }
        let doc: Doc = serde_json::from_str(text).map_err(|e| FourierError::Parse(e.to_string()))?;
        match doc {
            Doc::Values(v) | Doc::Object { values: v } => Self::new(v),
        }
    }

    pub fn of_expr(e: &BoolExpr, n: usize) -> Result<Self, FourierError> {
        Self::from_bools(&e.truth_table(n)?)
    }

    pub fn n_vars(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.n != other.n {
            return f64::INFINITY;
        }
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// In-place unnormalized Walsh–Hadamard transform:
/// `v[S] ← Σ_x v[x](−1)^{popcount(S∧x)}`.
pub fn fwht(values: &mut [f64]) {
    let len = values.len();
    assert!(len.is_power_of_two(), "length must be a power of two");
    let mut half = 1;
    while half < len {
        for block in values.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (u, v) = (*a, *b);
                *a = u + v;
                *b = u - v;
            }
        }
        half *= 2;
    }
}

/// `H_f` from a table of `f`, via the fast transform.
pub fn fourier_from_table(t: &TruthTable) -> Result<DiagonalHamiltonian, FourierError> {
    let mut coeffs = t.values.clone();
    fwht(&mut coeffs);
    let scale = 1.0 / coeffs.len() as f64;
    Ok(DiagonalHamiltonian::from_terms(
        t.n,
        coeffs
            .into_iter()
            .enumerate()
            .map(|(s, c)| (ZTermKey::new(s as u64), c * scale)),
    )?)
}

/// Eigenvalues of `h` on every basis state.
pub fn table_from_fourier(h: &DiagonalHamiltonian) -> Result<TruthTable, FourierError> {
    let n = h.n_qubits();
    if n > MAX_TABLE_VARS {
        return Err(FourierError::TooLarge(n));
    }
    let mut values = vec![0.0; 1 << n];
    for (k, w) in h.terms() {
        values[k.mask() as usize] = w;
    }
    fwht(&mut values);
    TruthTable::new(values)
}

/// Largest deviation from the projector property `h² = h`.
pub fn projector_deviation(h: &DiagonalHamiltonian) -> Result<f64, FourierError> {
    if h.n_qubits() <= MAX_TABLE_VARS && h.size() > 4096 {
        let t = table_from_fourier(h)?;
        return Ok(t
            .values
            .iter()
            .map(|v| v.abs().min((v - 1.0).abs()))
            .fold(0.0, f64::max));
    }
    Ok(h.mul(h)?.max_coeff_diff(h))
}

/// Number of satisfying assignments, `round(f̂(∅)·2ⁿ)`.
pub fn count_models(h: &DiagonalHamiltonian) -> Result<u64, FourierError> {
    let deviation = projector_deviation(h)?;
    if deviation > PROJECTOR_TOL {
        return Err(FourierError::NotBoolean { deviation });
    }
    let scaled = h.identity_coeff() * 2f64.powi(h.n_qubits() as i32);
    Ok(scaled.round().max(0.0) as u64)
}

/// Outcome of a max-norm approximation check.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproxReport {
    pub n: usize,
    pub max_error: f64,
    /// First input (by index) attaining the maximum error, up to rounding.
    pub worst_input: u64,
    pub ok: bool,
}

impl fmt::Display for ApproxReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bits: String = (0..self.n)
            .map(|j| if (self.worst_input >> j) & 1 == 1 { '1' } else { '0' })
            .collect();
        write!(
            f,
            "max_error={} worst_x={} bound={} result={}",
            format_sig(self.max_error, TEXT_DIGITS),
            if bits.is_empty() { "-".to_string() } else { bits },
            format_sig(APPROX_BOUND, TEXT_DIGITS),
            if self.ok { "PASS" } else { "FAIL" }
        )
    }
}

/// Checks `max_x |h̃(x) − f(x)| ≤ ⅓`.
pub fn check_approx(approx: &DiagonalHamiltonian, f: &BoolExpr) -> Result<ApproxReport, FourierError> {
    let n = approx.n_qubits();
    let exact = TruthTable::of_expr(f, n)?;
    let values = table_from_fourier(approx)?;
    let errors: Vec<f64> = values
        .values
        .iter()
        .zip(&exact.values)
        .map(|(a, e)| (a - e).abs())
        .collect();
    let max_error = errors.iter().copied().fold(0.0, f64::max);
    let worst_input = errors
        .iter()
        .position(|e| *e >= max_error - 1e-12)
        .unwrap_or(0) as u64;
    Ok(ApproxReport {
        n,
        max_error,
        worst_input,
        ok: max_error <= APPROX_BOUND + 1e-12,
    })
}
