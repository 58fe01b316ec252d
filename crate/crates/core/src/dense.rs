//! Brute-force dense matrices for checking every construction at small `n`.
//!
//! Index convention matches the rest of the crate: qubit `q` is bit `q` of
//! the basis index, and `a.tensor(b)` places `a` on the low qubits.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use crate::circuit::{emit_bit_query, emit_controlled_terms, Circuit, CircuitError, Gate};
use crate::compiler::{compile, CompileError};
use crate::expr::BoolExpr;
use crate::fourier::{table_from_fourier, FourierError};
use crate::pauli::{Pauli, PauliOperator, PauliString};
use crate::zham::{DiagonalHamiltonian, HamiltonianError};

pub const DEFAULT_DENSE_CAP: usize = 12;
pub const MAX_DENSE_CAP: usize = 14;
pub const DENSE_TOL: f64 = 1e-9;
/// Largest register for exhaustive diagonal spectra.
pub const MAX_SPECTRUM_QUBITS: usize = 24;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DenseError {
    #[error("{n} qubits exceed the dense cap of {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("dense cap {0} exceeds the hard maximum of {MAX_DENSE_CAP}")]
    CapTooLarge(usize),
    #[error("matrix is {rows}x{cols}; expected a square power-of-two dimension")]
    BadShape { rows: usize, cols: usize },
    #[error("operator dimensions differ: {left} vs {right} qubits")]
    QubitMismatch { left: usize, right: usize },
    #[error("operator is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Compile(#[from] CompileError),
    #[error(transparent)]
    Hamiltonian(#[from] HamiltonianError),
    #[error(transparent)]
    Fourier(#[from] FourierError),
}

/// A `2ⁿ × 2ⁿ` complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    n: usize,
    data: Vec<Complex64>,
}

impl DenseOperator {
    pub fn zeros(n: usize) -> Self {
        let dim = 1usize << n;
        Self {
            n,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(vec![ONE; 1 << n]).expect("power-of-two length")
    }

    pub fn diagonal(entries: Vec<Complex64>) -> Result<Self, DenseError> {
        let dim = entries.len();
        if !dim.is_power_of_two() {
            return Err(DenseError::BadShape { rows: dim, cols: dim });
        }
        let mut m = Self::zeros(dim.trailing_zeros() as usize);
        for (i, v) in entries.into_iter().enumerate() {
            m.data[i * dim + i] = v;
        }
        Ok(m)
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let dim = 1usize << n;
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                data.push(f(r, c));
            }
        }
        Self { n, data }
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self, DenseError> {
        let dim = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(DenseError::BadShape { rows: dim, cols: bad.len() });
        }
        if !dim.is_power_of_two() {
            return Err(DenseError::BadShape { rows: dim, cols: dim });
        }
        Ok(Self {
            n: dim.trailing_zeros() as usize,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Real 0/1 permutation-like matrix from a basis map `col → row`.
    pub fn permutation(n: usize, map: impl Fn(usize) -> usize) -> Self {
        let mut m = Self::zeros(n);
        let dim = m.dim();
        for c in 0..dim {
            m.data[map(c) * dim + c] = ONE;
        }
        m
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.dim() + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        let dim = self.dim();
        self.data[r * dim + c] = v;
    }

    pub fn diag(&self) -> Vec<Complex64> {
        (0..self.dim()).map(|i| self.get(i, i)).collect()
    }

    fn same_width(&self, other: &Self) -> Result<(), DenseError> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(DenseError::QubitMismatch { left: self.n, right: other.n })
        }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self, DenseError> {
        self.same_width(other)?;
        let dim = self.dim();
        let mut out = vec![ZERO; dim * dim];
        for r in 0..dim {
            let row = &mut out[r * dim..(r + 1) * dim];
            for k in 0..dim {
                let a = self.data[r * dim + k];
                if a == ZERO {
                    continue;
                }
                for (o, b) in row.iter_mut().zip(&other.data[k * dim..(k + 1) * dim]) {
                    *o += a * b;
                }
            }
        }
        Ok(Self { n: self.n, data: out })
    }

    pub fn add(&self, other: &Self) -> Result<Self, DenseError> {
        self.same_width(other)?;
        Ok(Self {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, DenseError> {
        self.add(&other.scale(-ONE))
    }

    pub fn scale(&self, w: Complex64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|a| a * w).collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |r, c| self.get(c, r).conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.get(i, i)).sum()
    }

    /// `self` on the low qubits, `other` above.
    pub fn tensor(&self, other: &Self) -> Self {
        let lo = self.dim();
        Self::from_fn(self.n + other.n, |r, c| {
            self.get(r % lo, c % lo) * other.get(r / lo, c / lo)
        })
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        let dim = self.dim();
        self.data
            .iter()
            .enumerate()
            .all(|(i, v)| i / dim == i % dim || v.norm() <= tol)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise difference.
    pub fn max_diff(&self, other: &Self) -> f64 {
        if self.n != other.n {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest difference after rotating `self` so its entry at the position
    /// of `other`'s largest-magnitude entry has the same phase.
    pub fn max_diff_up_to_phase(&self, other: &Self) -> f64 {
        if self.n != other.n {
            return f64::INFINITY;
        }
        let (idx, _) = other
            .data
            .iter()
            .enumerate()
            .fold((0, 0.0), |best, (i, v)| if v.norm() > best.1 { (i, v.norm()) } else { best });
        let (a, b) = (self.data[idx], other.data[idx]);
        if a.norm() == 0.0 || b.norm() == 0.0 {
            return self.max_diff(other);
        }
        let rot = (b / a) / (b / a).norm();
        self.scale(rot).max_diff(other)
    }

    /// Largest difference restricted to columns accepted by `keep`.
    pub fn max_diff_on_columns(&self, other: &Self, keep: impl Fn(usize) -> bool) -> f64 {
        if self.n != other.n {
            return f64::INFINITY;
        }
        let dim = self.dim();
        self.data
            .iter()
            .zip(&other.data)
            .enumerate()
            .filter(|(i, _)| keep(i % dim))
            .map(|(_, (a, b))| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Left-multiplies by one gate, in place.
    pub fn apply_gate(&mut self, gate: &Gate) {
        let dim = self.dim();
        let bit = |r: usize, q: usize| (r >> q) & 1 == 1;
        let rz = |angle: f64, on: bool| Complex64::from_polar(1.0, if on { angle / 2.0 } else { -angle / 2.0 });
        match *gate {
            Gate::Cnot { control, target } => {
                for r in 0..dim {
                    if bit(r, control) && !bit(r, target) {
                        self.swap_rows(r, r | (1 << target));
                    }
                }
            }
            Gate::X { qubit } => {
                for r in 0..dim {
                    if !bit(r, qubit) {
                        self.swap_rows(r, r | (1 << qubit));
                    }
                }
            }
            Gate::H { qubit } => {
                for r in 0..dim {
                    if bit(r, qubit) {
                        continue;
                    }
                    let s = r | (1 << qubit);
                    for c in 0..dim {
                        let (u, v) = (self.data[r * dim + c], self.data[s * dim + c]);
                        self.data[r * dim + c] = (u + v) * FRAC_1_SQRT_2;
                        self.data[s * dim + c] = (u - v) * FRAC_1_SQRT_2;
                    }
                }
            }
            Gate::Rz { qubit, angle } => self.scale_rows(|r| rz(angle, bit(r, qubit))),
            Gate::Crz { control, qubit, angle } => {
                self.scale_rows(|r| if bit(r, control) { rz(angle, bit(r, qubit)) } else { ONE })
            }
            Gate::Ccrz { control1, control2, qubit, angle } => self.scale_rows(|r| {
                if bit(r, control1) && bit(r, control2) {
                    rz(angle, bit(r, qubit))
                } else {
                    ONE
                }
            }),
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        let dim = self.dim();
        for c in 0..dim {
            self.data.swap(a * dim + c, b * dim + c);
        }
    }

    fn scale_rows(&mut self, phase: impl Fn(usize) -> Complex64) {
        let dim = self.dim();
        for r in 0..dim {
            let p = phase(r);
            if p != ONE {
                for v in &mut self.data[r * dim..(r + 1) * dim] {
                    *v *= p;
                }
            }
        }
    }

    fn to_nalgebra(&self) -> DMatrix<Complex64> {
        let dim = self.dim();
        DMatrix::from_row_slice(dim, dim, &self.data)
    }

    fn from_nalgebra(n: usize, m: &DMatrix<Complex64>) -> Self {
        Self::from_fn(n, |r, c| m[(r, c)])
    }

    /// Largest `|A − A†|` entry.
    pub fn hermitian_deviation(&self) -> f64 {
        self.max_diff(&self.adjoint())
    }
}

fn pauli_matrix(p: Pauli) -> DenseOperator {
    let i = Complex64::new(0.0, 1.0);
    let rows = match p {
        Pauli::I => vec![vec![ONE, ZERO], vec![ZERO, ONE]],
        Pauli::X => vec![vec![ZERO, ONE], vec![ONE, ZERO]],
        Pauli::Y => vec![vec![ZERO, -i], vec![i, ZERO]],
        Pauli::Z => vec![vec![ONE, ZERO], vec![ZERO, -ONE]],
    };
    DenseOperator::from_rows(rows).expect("2x2")
}

/// Sorted eigenvalues of a diagonal Hamiltonian with their basis states.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub n: usize,
    /// `(eigenvalue, basis index)` ascending by value, then index.
    pub levels: Vec<(f64, u64)>,
}

impl Spectrum {
    pub fn min(&self) -> f64 {
        self.levels.first().map_or(0.0, |l| l.0)
    }

    pub fn max(&self) -> f64 {
        self.levels.last().map_or(0.0, |l| l.0)
    }

    /// Basis states within `tol` of the minimum, ascending by index.
    pub fn argmin(&self, tol: f64) -> Vec<u64> {
        self.within(self.min(), tol)
    }

    pub fn argmax(&self, tol: f64) -> Vec<u64> {
        self.within(self.max(), tol)
    }

    fn within(&self, target: f64, tol: f64) -> Vec<u64> {
        let mut v: Vec<u64> = self
            .levels
            .iter()
            .filter(|(e, _)| (e - target).abs() <= tol)
            .map(|l| l.1)
            .collect();
        v.sort_unstable();
        v
    }

    /// Label with `x₁` first.
    pub fn label(&self, x: u64) -> String {
        (0..self.n)
            .map(|j| if (x >> j) & 1 == 1 { '1' } else { '0' })
            .collect()
    }
}

/// Exhaustive spectrum of a diagonal Hamiltonian.
pub fn diagonal_spectrum(h: &DiagonalHamiltonian) -> Result<Spectrum, DenseError> {
    let n = h.n_qubits();
    if n > MAX_SPECTRUM_QUBITS {
        return Err(DenseError::CapExceeded { n, cap: MAX_SPECTRUM_QUBITS });
    }
    let table = table_from_fourier(h)?;
    let mut levels: Vec<(f64, u64)> = table
        .values()
        .iter()
        .enumerate()
        .map(|(x, v)| (*v, x as u64))
        .collect();
    levels.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    Ok(Spectrum { n, levels })
}

/// Outcome of one equivalence check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub residual: f64,
    pub pass: bool,
}

impl CheckResult {
    pub fn new(name: impl Into<String>, residual: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            residual,
            pass: residual <= tol,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KickbackReport {
    pub checks: Vec<CheckResult>,
}

impl KickbackReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn max_residual(&self) -> f64 {
        self.checks.iter().map(|c| c.residual).fold(0.0, f64::max)
    }
}

/// Angles used by the controlled-phase checks of the kickback suite.
pub const KICKBACK_ANGLES: [f64; 2] = [0.7, PI];

/// Dense builders with a qubit cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleSim {
    cap: usize,
}

impl Default for OracleSim {
    fn default() -> Self {
        Self { cap: DEFAULT_DENSE_CAP }
    }
}

impl OracleSim {
    pub fn new(cap: usize) -> Result<Self, DenseError> {
        if cap > MAX_DENSE_CAP {
            return Err(DenseError::CapTooLarge(cap));
        }
        Ok(Self { cap })
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn check(&self, n: usize) -> Result<(), DenseError> {
        if n > self.cap {
            Err(DenseError::CapExceeded { n, cap: self.cap })
        } else {
            Ok(())
        }
    }

    pub fn dense_of_zham(&self, h: &DiagonalHamiltonian) -> Result<DenseOperator, DenseError> {
        self.check(h.n_qubits())?;
        let values = table_from_fourier(h)?;
        DenseOperator::diagonal(values.values().iter().map(|v| Complex64::new(*v, 0.0)).collect())
    }

    /// `i^phase · P₁ ⊗ … ⊗ Pₙ` by Kronecker products.
    pub fn dense_of_pauli_string(&self, s: &PauliString) -> Result<DenseOperator, DenseError> {
        self.check(s.n_qubits())?;
        let mut m = DenseOperator::identity(0);
        for q in 0..s.n_qubits() {
            m = m.tensor(&pauli_matrix(s.factor(q)));
        }
        let i = Complex64::new(0.0, 1.0);
        Ok(m.scale(i.powu(s.phase() as u32)))
    }

    pub fn dense_of_pauli(&self, p: &PauliOperator) -> Result<DenseOperator, DenseError> {
        self.check(p.n_qubits())?;
        let mut out = DenseOperator::zeros(p.n_qubits());
        for (s, c) in p.terms() {
            out = out.add(&self.dense_of_pauli_string(&s)?.scale(c))?;
        }
        Ok(out)
    }

    /// `e^{i·phase}·G_m⋯G_1`.
    pub fn simulate_circuit(&self, c: &Circuit) -> Result<DenseOperator, DenseError> {
        self.check(c.n_qubits())?;
        let mut u = DenseOperator::identity(c.n_qubits());
        for g in c.gates() {
            u.apply_gate(g);
        }
        Ok(u.scale(Complex64::from_polar(1.0, c.global_phase())))
    }

    /// `Λ_f(U)`: `f` reads the low `k` qubits, `u` acts on the qubits above.
    pub fn dense_controlled(&self, f: &BoolExpr, k: usize, u: &DenseOperator) -> Result<DenseOperator, DenseError> {
        self.check(k + u.n_qubits())?;
        let table = f.truth_table(k).map_err(CompileError::from)?;
        let lo = 1usize << k;
        Ok(DenseOperator::from_fn(k + u.n_qubits(), |r, c| {
            let (y, yc) = (r % lo, c % lo);
            if y != yc {
                ZERO
            } else if table[y] {
                u.get(r / lo, c / lo)
            } else if r == c {
                ONE
            } else {
                ZERO
            }
        }))
    }

    /// `exp(−itH)` for a diagonal Hamiltonian, entrywise.
    pub fn expm_diagonal(&self, h: &DiagonalHamiltonian, t: f64) -> Result<DenseOperator, DenseError> {
        self.check(h.n_qubits())?;
        let values = table_from_fourier(h)?;
        DenseOperator::diagonal(
            values
                .values()
                .iter()
                .map(|v| Complex64::from_polar(1.0, -t * v))
                .collect(),
        )
    }

    /// `exp(−itA)` for Hermitian `A`: entrywise when diagonal, otherwise via
    /// an eigendecomposition.
    pub fn expm_hermitian(&self, a: &DenseOperator, t: f64) -> Result<DenseOperator, DenseError> {
        self.check(a.n_qubits())?;
        let dev = a.hermitian_deviation();
        if dev > DENSE_TOL {
            return Err(DenseError::NotHermitian(dev));
        }
        if a.is_diagonal(0.0) {
            return DenseOperator::diagonal(
                a.diag().iter().map(|v| Complex64::from_polar(1.0, -t * v.re)).collect(),
            );
        }
        let eig = a.to_nalgebra().symmetric_eigen();
        let phases = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| Complex64::from_polar(1.0, -t * l)));
        let v = &eig.eigenvectors;
        let u = v * phases * v.adjoint();
        Ok(DenseOperator::from_nalgebra(a.n_qubits(), &u))
    }

    /// Sorted eigenvalues of a Hermitian matrix.
    pub fn eigenvalues(&self, a: &DenseOperator) -> Result<Vec<f64>, DenseError> {
        self.check(a.n_qubits())?;
        let dev = a.hermitian_deviation();
        if dev > DENSE_TOL {
            return Err(DenseError::NotHermitian(dev));
        }
        let mut ev: Vec<f64> = a.to_nalgebra().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        Ok(ev)
    }

    /// Reference bit query `|x⟩|a⟩ → |x⟩|a⊕f(x)⟩` from the truth table,
    /// with the target on qubit `n` of an `n_total`-qubit register.
    pub fn bit_query_reference(&self, f: &BoolExpr, n: usize, n_total: usize) -> Result<DenseOperator, DenseError> {
        self.check(n_total)?;
        let table = f.truth_table(n).map_err(CompileError::from)?;
        let mask = (1usize << n) - 1;
        Ok(DenseOperator::permutation(n_total, |c| {
            if table[c & mask] {
                c ^ (1 << n)
            } else {
                c
            }
        }))
    }

    /// Phase kickback and bit/phase query equivalences with data on qubits
    /// `0..n`, the query target `b = n` and the control `a = n+1`.
    pub fn verify_kickback_suite(&self, f: &BoolExpr, n: usize) -> Result<KickbackReport, DenseError> {
        self.check(n + 2)?;
        let (b, a) = (n, n + 1);
        let hf = compile(f, n)?;
        let table = f.truth_table(n).map_err(CompileError::from)?;
        let mut checks = Vec::new();

        // (−1)^{f(x)} from G_f on |x⟩|−⟩
        let gf = self.simulate_circuit(&emit_bit_query(f, n)?)?;
        let minus = [Complex64::new(FRAC_1_SQRT_2, 0.0), Complex64::new(-FRAC_1_SQRT_2, 0.0)];
        let mut residual: f64 = 0.0;
        let lo = 1usize << n;
        for (x, fx) in table.iter().enumerate() {
            let sign = if *fx { -1.0 } else { 1.0 };
            for r in 0..2 * lo {
                let got: Complex64 = (0..2).map(|s| gf.get(r, x + s * lo) * minus[s]).sum();
                let expected = if r % lo == x { minus[r / lo] * sign } else { ZERO };
                residual = residual.max((got - expected).norm());
            }
        }
        checks.push(CheckResult::new("phase kickback", residual, DENSE_TOL));

        // H·Λ(e^{−iπH_f})·H on the target equals G_f
        let xb = DiagonalHamiltonian::variable(1, 1)?;
        let phase_query = self.expm_diagonal(&hf.tensor(&xb)?, PI)?;
        let mut hadamard = DenseOperator::identity(n + 1);
        hadamard.apply_gate(&Gate::H { qubit: b });
        let bit_from_phase = hadamard.matmul(&phase_query)?.matmul(&hadamard)?;
        let reference = self.bit_query_reference(f, n, n + 1)?;
        checks.push(CheckResult::new(
            "bit query from phase query",
            bit_from_phase.max_diff(&reference),
            DENSE_TOL,
        ));

        // Λ_{x_a}(e^{−itH_f}) from two bit queries around a controlled-controlled phase
        let g_ref = self.bit_query_reference(f, n, n + 2)?;
        let widened = bit_from_phase.tensor(&DenseOperator::identity(1));
        let xa = DiagonalHamiltonian::variable(1, 1)?;
        let target_ham = hf.widen(n + 1)?.tensor(&xa)?;
        for &t in &KICKBACK_ANGLES {
            let cc = emit_controlled_terms(&DiagonalHamiltonian::constant(0, 1.0)?, t, n + 2, 0, &[a, b])?;
            let cc = self.simulate_circuit(&cc)?;
            let target = self.expm_diagonal(&target_ham, t)?;
            let b_clear = |c: usize| (c >> b) & 1 == 0;

            let sandwich = g_ref.matmul(&cc)?.matmul(&g_ref)?;
            checks.push(CheckResult::new(
                format!("controlled phase from bit queries t={}", t),
                sandwich.max_diff_on_columns(&target, b_clear),
                DENSE_TOL,
            ));

            let composite = widened.matmul(&cc)?.matmul(&widened)?;
            checks.push(CheckResult::new(
                format!("controlled phase from phase queries t={}", t),
                composite.max_diff_on_columns(&target, b_clear),
                DENSE_TOL,
            ));
        }
        Ok(KickbackReport { checks })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::emit_evolution;
    use crate::zham::ZTermKey;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sim() -> OracleSim {
        OracleSim::default()
    }

    #[test]
    fn basic_diagonals() {
        let x1 = DiagonalHamiltonian::variable(1, 1).unwrap();
        assert_eq!(sim().dense_of_zham(&x1).unwrap().diag(), vec![c(0.0, 0.0), c(1.0, 0.0)]);
        let zz = DiagonalHamiltonian::monomial(2, ZTermKey::new(0b11), 1.0).unwrap();
        let d: Vec<f64> = sim().dense_of_zham(&zz).unwrap().diag().iter().map(|v| v.re).collect();
        assert_eq!(d, vec![1.0, -1.0, -1.0, 1.0]);
    }

    #[test]
    fn pauli_y_matrix() {
        let y = PauliOperator::single(1, 1, Pauli::Y, ONE).unwrap();
        let m = sim().dense_of_pauli(&y).unwrap();
        let expected = DenseOperator::from_rows(vec![vec![ZERO, c(0.0, -1.0)], vec![c(0.0, 1.0), ZERO]]).unwrap();
        assert_eq!(m, expected);
    }

    #[test]
    fn tensor_order() {
        // X on qubit 1 (low), Z on qubit 2
        let s = PauliString::from_masks(2, 0b01, 0b10, 0).unwrap();
        let m = sim().dense_of_pauli_string(&s).unwrap();
        assert_eq!(m.get(1, 0), ONE);
        assert_eq!(m.get(3, 2), -ONE);
    }

    #[test]
    fn caps() {
        assert!(OracleSim::new(15).is_err());
        let small = OracleSim::new(2).unwrap();
        let h = DiagonalHamiltonian::zero(3).unwrap();
        assert_eq!(small.dense_of_zham(&h).unwrap_err(), DenseError::CapExceeded { n: 3, cap: 2 });
    }

    #[test]
    fn empty_circuit_is_identity() {
        let u = sim().simulate_circuit(&Circuit::new(3)).unwrap();
        assert_eq!(u, DenseOperator::identity(3));
    }

    #[test]
    fn three_body_evolution() {
        let h = DiagonalHamiltonian::monomial(3, ZTermKey::new(0b111), 1.0).unwrap();
        for gamma in [0.3, 1.0, PI] {
            let u = sim().simulate_circuit(&emit_evolution(&h, gamma)).unwrap();
            let e = sim().expm_diagonal(&h, gamma).unwrap();
            assert!(u.max_diff(&e) < 1e-12);
        }
    }

    #[test]
    fn lowered_circuits_agree() {
        let mut circ = Circuit::new(3);
        circ.push(Gate::Ccrz { control1: 2, control2: 0, qubit: 1, angle: 0.77 }).unwrap();
        circ.push(Gate::Crz { control: 1, qubit: 2, angle: -1.3 }).unwrap();
        let u = sim().simulate_circuit(&circ).unwrap();
        let l = sim().simulate_circuit(&circ.lowered()).unwrap();
        assert!(u.max_diff(&l) < 1e-12);
    }

    #[test]
    fn controlled_x_is_cnot() {
        let x = sim().dense_of_pauli(&PauliOperator::single(1, 1, Pauli::X, ONE).unwrap()).unwrap();
        let f = BoolExpr::parse("x1", 1).unwrap();
        let cx = sim().dense_controlled(&f, 1, &x).unwrap();
        let expected = DenseOperator::permutation(2, |c| if c & 1 == 1 { c ^ 2 } else { c });
        assert_eq!(cx, expected);
        let never = sim().dense_controlled(&BoolExpr::Const(false), 1, &x).unwrap();
        assert_eq!(never, DenseOperator::identity(2));
    }

    #[test]
    fn hermitian_exponential() {
        let x = sim().dense_of_pauli(&PauliOperator::single(1, 1, Pauli::X, ONE).unwrap()).unwrap();
        let u = sim().expm_hermitian(&x, 1.0).unwrap();
        let (cos, sin) = (1f64.cos(), 1f64.sin());
        let expected = DenseOperator::from_rows(vec![vec![c(cos, 0.0), c(0.0, -sin)], vec![c(0.0, -sin), c(cos, 0.0)]]).unwrap();
        assert!(u.max_diff(&expected) < 1e-12);
        let not_h = DenseOperator::from_rows(vec![vec![ZERO, ONE], vec![ZERO, ZERO]]).unwrap();
        assert!(matches!(sim().expm_hermitian(&not_h, 1.0), Err(DenseError::NotHermitian(_))));
    }

    #[test]
    fn phase_alignment() {
        let u = DenseOperator::identity(2);
        let v = u.scale(Complex64::from_polar(1.0, 0.4));
        assert!(u.max_diff(&v) > 0.1);
        assert!(v.max_diff_up_to_phase(&u) < 1e-15);
    }

    #[test]
    fn majority_spectrum() {
        let maj = compile(&BoolExpr::parse("(x1 & x2) | (x1 & x3) | (x2 & x3)", 3).unwrap(), 3).unwrap();
        let s = diagonal_spectrum(&maj).unwrap();
        assert_eq!(s.min(), 0.0);
        assert_eq!(s.max(), 1.0);
        let ground: Vec<String> = s.argmin(1e-9).iter().map(|x| s.label(*x)).collect();
        assert_eq!(ground, vec!["000", "100", "010", "001"]);
    }

    #[test]
    fn kickback_small_cases() {
        for (text, n) in [("x1", 1), ("0", 1), ("x1 & x2", 2), ("x1 ^ x2 ^ x3", 3)] {
            let f = BoolExpr::parse(text, n).unwrap();
            let report = sim().verify_kickback_suite(&f, n).unwrap();
            assert_eq!(report.checks.len(), 6);
            assert!(report.all_pass(), "{text}: {report:?}");
        }
    }
}
