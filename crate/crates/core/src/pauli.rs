//! General Pauli strings and complex-weighted Pauli operators.
//!
//! A string is stored in symplectic form: bit `q` of `x` marks an `X` or `Y`
//! factor on qubit `q`, bit `q` of `z` a `Z` or `Y` factor. A qubit in both
//! masks carries the Hermitian `Y` (not `XZ`). The overall phase is an
//! integer power of `i`, so products of strings are exact.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::numfmt::format_sig;
use crate::zham::{
    DiagonalHamiltonian, HamiltonianError, OperatorDoc, TermDoc, MAX_QUBITS, PRUNE_EPS,
    TEXT_DIGITS,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

fn i_pow(k: u8) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// `i^phase · P` where `P` is a tensor product of `I, X, Y, Z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: u64,
    z: u64,
    phase: u8,
}

impl PauliString {
    pub fn identity(n: usize) -> Result<Self, HamiltonianError> {
        if n > MAX_QUBITS {
            return Err(HamiltonianError::TooManyQubits(n));
        }
        Ok(Self {
            n,
            x: 0,
            z: 0,
            phase: 0,
        })
    }

    pub fn from_masks(n: usize, x: u64, z: u64, phase: u8) -> Result<Self, HamiltonianError> {
        let mut s = Self::identity(n)?;
        let allowed = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        if (x | z) & !allowed != 0 {
            return Err(HamiltonianError::KeyOutOfRange { mask: x | z, n });
        }
        s.x = x;
        s.z = z;
        s.phase = phase % 4;
        Ok(s)
    }

    /// Single factor `p` on 1-based qubit `j`.
    pub fn single(n: usize, j: usize, p: Pauli) -> Result<Self, HamiltonianError> {
        if j == 0 || j > n {
            return Err(HamiltonianError::IndexOutOfRange { index: j, n });
        }
        let (bx, bz) = p.bits();
        Self::from_masks(n, (bx as u64) << (j - 1), (bz as u64) << (j - 1), 0)
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    pub fn phase(&self) -> u8 {
        self.phase
    }

    /// Factor on 0-based qubit `q`.
    pub fn factor(&self, q: usize) -> Pauli {
        Pauli::from_bits((self.x >> q) & 1 == 1, (self.z >> q) & 1 == 1)
    }

    /// Product `self · other` as a single string with exact phase.
    ///
    /// With `P = i^{|x∧z|} XˣZᶻ` and `ZᶻXˣ' = (-1)^{|z∧x'|} Xˣ'Zᶻ`, the phase
    /// exponent is `|xa∧za| + |xb∧zb| + 2|za∧xb| − |xc∧zc|`.
    pub fn mul(&self, other: &Self) -> Result<Self, HamiltonianError> {
        if self.n != other.n {
            return Err(HamiltonianError::QubitMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let x = self.x ^ other.x;
        let z = self.z ^ other.z;
        let pop = |m: u64| m.count_ones() as i64;
        let exp = self.phase as i64
            + other.phase as i64
            + pop(self.x & self.z)
            + pop(other.x & other.z)
            + 2 * pop(self.z & other.x)
            - pop(x & z);
        Ok(Self {
            n: self.n,
            x,
            z,
            phase: exp.rem_euclid(4) as u8,
        })
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()) % 2 == 0
    }

    /// `XZY`-style label without phase, `I` for the identity.
    pub fn label(&self) -> String {
        self.label_with("")
    }

    fn label_with(&self, sep: &str) -> String {
        let support = self.x | self.z;
        if support == 0 {
            return "I".to_string();
        }
        (0..self.n)
            .filter(|q| (support >> q) & 1 == 1)
            .map(|q| format!("{}{}", self.factor(q).letter(), q + 1))
            .collect::<Vec<_>>()
            .join(sep)
    }
}

/// Complex-weighted sum of canonical (phase-free) Pauli strings.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliOperator {
    n: usize,
    terms: BTreeMap<(u64, u64), Complex64>,
}

impl PauliOperator {
    pub fn zero(n: usize) -> Result<Self, HamiltonianError> {
        PauliString::identity(n)?;
        Ok(Self {
            n,
            terms: BTreeMap::new(),
        })
    }

    pub fn identity(n: usize) -> Result<Self, HamiltonianError> {
        Self::from_string(&PauliString::identity(n)?, Complex64::new(1.0, 0.0))
    }

    pub fn from_string(s: &PauliString, coeff: Complex64) -> Result<Self, HamiltonianError> {
        let mut op = Self::zero(s.n)?;
        op.accumulate(s.x, s.z, coeff * i_pow(s.phase));
        Ok(op)
    }

    /// `coeff · p_j`
    pub fn single(n: usize, j: usize, p: Pauli, coeff: Complex64) -> Result<Self, HamiltonianError> {
        Self::from_string(&PauliString::single(n, j, p)?, coeff)
    }

    pub fn from_diagonal(h: &DiagonalHamiltonian) -> Self {
        let terms = h
            .terms()
            .map(|(k, w)| ((0u64, k.mask()), Complex64::new(w, 0.0)))
            .collect();
        Self {
            n: h.n_qubits(),
            terms,
        }
    }

    fn accumulate(&mut self, x: u64, z: u64, c: Complex64) {
        *self.terms.entry((x, z)).or_insert(Complex64::new(0.0, 0.0)) += c;
    }

    fn pruned_self(mut self) -> Self {
        self.terms.retain(|_, c| c.norm() >= PRUNE_EPS);
        self
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Canonical strings (phase 0) with their coefficients, ascending by `(x, z)`.
    pub fn terms(&self) -> impl Iterator<Item = (PauliString, Complex64)> + '_ {
        self.terms.iter().map(|((x, z), c)| {
            (
                PauliString {
                    n: self.n,
                    x: *x,
                    z: *z,
                    phase: 0,
                },
                *c,
            )
        })
    }

    /// Coefficient of the canonical string with masks `(x, z)`.
    pub fn coeff(&self, x: u64, z: u64) -> Complex64 {
        self.terms
            .get(&(x, z))
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
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
        let mut out = self.clone();
        for ((x, z), c) in &other.terms {
            out.accumulate(*x, *z, *c);
        }
        Ok(out.pruned_self())
    }

    pub fn sub(&self, other: &Self) -> Result<Self, HamiltonianError> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, w: Complex64) -> Self {
        let terms = self.terms.iter().map(|(k, c)| (*k, c * w)).collect();
        Self { n: self.n, terms }.pruned_self()
    }

    pub fn mul(&self, other: &Self) -> Result<Self, HamiltonianError> {
        self.same_width(other)?;
        let mut out = Self::zero(self.n)?;
        for (sa, ca) in self.terms() {
            for (sb, cb) in other.terms() {
                let s = sa.mul(&sb)?;
                out.accumulate(s.x, s.z, ca * cb * i_pow(s.phase));
            }
        }
        Ok(out.pruned_self())
    }

    /// Canonical strings are Hermitian, so only coefficients are conjugated.
    pub fn adjoint(&self) -> Self {
        let terms = self.terms.iter().map(|(k, c)| (*k, c.conj())).collect();
        Self { n: self.n, terms }
    }

    /// `ab + ba`
    pub fn anticommutator(&self, other: &Self) -> Result<Self, HamiltonianError> {
        self.mul(other)?.add(&other.mul(self)?)
    }

    /// `ab - ba`
    pub fn commutator(&self, other: &Self) -> Result<Self, HamiltonianError> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.terms.values().all(|c| c.im.abs() <= tol)
    }

    /// The diagonal part, if the operator has no `X`/`Y` factors and real weights.
    pub fn as_diagonal(&self, tol: f64) -> Option<DiagonalHamiltonian> {
        if self.terms.iter().any(|((x, _), c)| *x != 0 || c.im.abs() > tol) {
            return None;
        }
        DiagonalHamiltonian::from_terms(
            self.n,
            self.terms
                .iter()
                .map(|((_, z), c)| (crate::zham::ZTermKey::new(*z), c.re)),
        )
        .ok()
    }

    pub fn max_coeff_diff(&self, other: &Self) -> f64 {
        let mut worst = 0.0f64;
        for (k, c) in &self.terms {
            worst = worst.max((c - other.coeff(k.0, k.1)).norm());
        }
        for (k, c) in &other.terms {
            if !self.terms.contains_key(k) {
                worst = worst.max(c.norm());
            }
        }
        worst
    }

    pub fn to_json(&self) -> String {
        let doc = OperatorDoc {
            n: self.n,
            terms: self
                .terms()
                .map(|(s, c)| TermDoc {
                    paulis: s.label_with(" "),
                    coeff: c.re,
                    coeff_im: (c.im != 0.0).then_some(c.im),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self, HamiltonianError> {
        let doc: OperatorDoc =
            serde_json::from_str(text).map_err(|e| HamiltonianError::Parse(e.to_string()))?;
        let mut op = Self::zero(doc.n)?;
        for t in &doc.terms {
            let s = parse_pauli_label(&t.paulis, doc.n)?;
            op.accumulate(s.x, s.z, Complex64::new(t.coeff, t.coeff_im.unwrap_or(0.0)));
        }
        Ok(op.pruned_self())
    }
}

fn format_complex(c: Complex64) -> (bool, String) {
    let digits = TEXT_DIGITS;
    if c.im == 0.0 {
        (c.re < 0.0, format_sig(c.re.abs(), digits))
    } else if c.re == 0.0 {
        (c.im < 0.0, format!("{}i", format_sig(c.im.abs(), digits)))
    } else {
        let sign = if c.im < 0.0 { "-" } else { "+" };
        (
            false,
            format!(
                "({}{}{}i)",
                format_sig(c.re, digits),
                sign,
                format_sig(c.im.abs(), digits)
            ),
        )
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (s, c)) in self.terms().enumerate() {
            let (neg, mag) = format_complex(c);
            match (i, neg) {
                (0, false) => write!(f, "{mag} {}", s.label())?,
                (0, true) => write!(f, "-{mag} {}", s.label())?,
                (_, false) => write!(f, " + {mag} {}", s.label())?,
                (_, true) => write!(f, " - {mag} {}", s.label())?,
            }
        }
        Ok(())
    }
}

fn parse_pauli_label(label: &str, n: usize) -> Result<PauliString, HamiltonianError> {
    let compact: String = label.chars().filter(|c| !c.is_whitespace()).collect();
    let mut s = PauliString::identity(n)?;
    if compact.is_empty() || compact == "I" {
        return Ok(s);
    }
    let bad = || HamiltonianError::Parse(format!("bad Pauli label '{label}'"));
    let mut chars = compact.chars().peekable();
    while let Some(letter) = chars.next() {
        let p = match letter {
            'X' => Pauli::X,
            'Y' => Pauli::Y,
            'Z' => Pauli::Z,
            _ => return Err(bad()),
        };
        let mut digits = String::new();
        while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
            digits.push(*d);
            chars.next();
        }
        let j: usize = digits.parse().map_err(|_| bad())?;
        let single = PauliString::single(n, j, p)?;
        if (s.x | s.z) & (single.x | single.z) != 0 {
            return Err(bad());
        }
        s.x |= single.x;
        s.z |= single.z;
    }
    Ok(s)
}

/// Spin annihilation `b_j = (X_j + iY_j)/2 = |0⟩⟨1|` on 1-based qubit `j`.
pub fn spin_lowering(n: usize, j: usize) -> Result<PauliOperator, HamiltonianError> {
    let half = Complex64::new(0.5, 0.0);
    PauliOperator::single(n, j, Pauli::X, half)?.add(&PauliOperator::single(
        n,
        j,
        Pauli::Y,
        Complex64::new(0.0, 0.5),
    )?)
}

/// Spin creation `b_j† = (X_j − iY_j)/2`.
pub fn spin_raising(n: usize, j: usize) -> Result<PauliOperator, HamiltonianError> {
    Ok(spin_lowering(n, j)?.adjoint())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    Raising,
    Lowering,
}

/// Fermionic mode operator `a_j = Z_1⋯Z_{j−1} b_j` (or its adjoint).
pub fn jordan_wigner(n: usize, j: usize, kind: Ladder) -> Result<PauliOperator, HamiltonianError> {
    let spin = match kind {
        Ladder::Lowering => spin_lowering(n, j)?,
        Ladder::Raising => spin_raising(n, j)?,
    };
    let parity_mask = (1u64 << (j - 1)) - 1;
    let prefix = PauliOperator::from_string(
        &PauliString::from_masks(n, 0, parity_mask, 0)?,
        Complex64::new(1.0, 0.0),
    )?;
    prefix.mul(&spin)
}
