//! Diagonal Hamiltonians for Boolean and pseudo-Boolean functions.
//!
//! Formulas compile to sums of Pauli-Z products whose eigenvalue on the basis
//! state `|x⟩` is `f(x)`. From there the crate emits gate-level circuits for
//! `exp(−iγH)` and checks every construction against dense matrices.
//!
//! Variables are 1-based (`x1`, `Z1`) in text; qubit `j` is bit `j−1` of the
//! basis index.

pub mod circuit;
pub mod compiler;
pub mod corpus;
pub mod dense;
pub mod dimacs;
pub mod expr;
pub mod fourier;
pub mod numfmt;
pub mod pauli;
pub mod verify;
pub mod zham;

pub use circuit::{
    emit_bit_query, emit_controlled_evolution, emit_evolution, emit_qubo_evolution, Circuit, CircuitError, Gate,
};
pub use compiler::{
    augment_penalties, compile, compile_pseudo, compile_qubo, compile_qubo_by_rules, ground_state_logic,
    CompileError, Compiler, PenaltySpec, QuboInstance,
};
pub use dense::{DenseError, DenseOperator, OracleSim};
pub use dimacs::{parse_dimacs, CnfInstance, DimacsError};
pub use expr::{parse_expr, BoolExpr, ExprError, PseudoBooleanObjective};
pub use fourier::{check_approx, count_models, fourier_from_table, table_from_fourier, FourierError, TruthTable};
pub use pauli::{jordan_wigner, Ladder, Pauli, PauliOperator, PauliString};
pub use zham::{DiagonalHamiltonian, HamiltonianError, ZTermKey};

/// Any error raised by the crate.
#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Dimacs(#[from] DimacsError),
    #[error(transparent)]
    Hamiltonian(#[from] HamiltonianError),
    #[error(transparent)]
    Compile(#[from] CompileError),
    #[error(transparent)]
    Fourier(#[from] FourierError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Dense(#[from] DenseError),
}

impl Error {
    /// True for failures caused by the dense qubit cap.
    pub fn is_cap_exceeded(&self) -> bool {
        matches!(
            self,
            Error::Dense(DenseError::CapExceeded { .. } | DenseError::CapTooLarge(_))
        )
    }
}
