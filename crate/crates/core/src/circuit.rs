//! Gate-level circuits and emitters for diagonal evolutions.
//!
//! Qubits are 0-based in memory and 1-based in the text format.
//! `RZ(θ) = exp(−iθZ/2)`; a circuit implements `e^{i·phase}·G_m⋯G_1`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::compiler::{compile, compile_qubo, CompileError, QuboInstance};
use crate::expr::BoolExpr;
use crate::numfmt::format_sig;
use crate::zham::{DiagonalHamiltonian, ZTermKey};

/// Significant digits for angles in circuit text.
pub const ANGLE_DIGITS: usize = 16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CircuitError {
    #[error("gate {gate} uses qubit {qubit} outside a {n}-qubit register")]
    QubitOutOfRange { gate: String, qubit: usize, n: usize },
    #[error("gate {0} repeats a qubit")]
    RepeatedQubit(String),
    #[error("angle must be finite")]
    NonFiniteAngle,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Compile(#[from] CompileError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    Cnot { control: usize, target: usize },
    Rz { qubit: usize, angle: f64 },
    H { qubit: usize },
    X { qubit: usize },
    Crz { control: usize, qubit: usize, angle: f64 },
    Ccrz { control1: usize, control2: usize, qubit: usize, angle: f64 },
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::Cnot { control, target } => vec![control, target],
            Gate::Rz { qubit, .. } | Gate::H { qubit } | Gate::X { qubit } => vec![qubit],
            Gate::Crz { control, qubit, .. } => vec![control, qubit],
            Gate::Ccrz { control1, control2, qubit, .. } => vec![control1, control2, qubit],
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match *self {
            Gate::Rz { angle, .. } | Gate::Crz { angle, .. } | Gate::Ccrz { angle, .. } => Some(angle),
            _ => None,
        }
    }

    fn mnemonic(&self) -> &'static str {
        match self {
            Gate::Cnot { .. } => "cx",
            Gate::Rz { .. } => "rz",
            Gate::H { .. } => "h",
            Gate::X { .. } => "x",
            Gate::Crz { .. } => "crz",
            Gate::Ccrz { .. } => "ccrz",
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.mnemonic())?;
        for q in self.qubits() {
            write!(f, " {}", q + 1)?;
        }
        if let Some(a) = self.angle() {
            write!(f, " {}", format_sig(a, ANGLE_DIGITS))?;
        }
        Ok(())
    }
}

/// Gate tallies used for resource reports.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GateCounts {
    pub cnot: usize,
    pub rz: usize,
    pub h: usize,
    pub x: usize,
    pub crz: usize,
    pub ccrz: usize,
}

impl GateCounts {
    pub fn total(&self) -> usize {
        self.cnot + self.rz + self.h + self.x + self.crz + self.ccrz
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
    global_phase: f64,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            gates: Vec::new(),
            global_phase: 0.0,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn global_phase(&self) -> f64 {
        self.global_phase
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn add_phase(&mut self, phi: f64) {
        self.global_phase += phi;
    }

    pub fn push(&mut self, gate: Gate) -> Result<(), CircuitError> {
        let qs = gate.qubits();
        if let Some(&q) = qs.iter().find(|&&q| q >= self.n_qubits) {
            return Err(CircuitError::QubitOutOfRange {
                gate: gate.to_string(),
                qubit: q,
                n: self.n_qubits,
            });
        }
        for (i, q) in qs.iter().enumerate() {
            if qs[..i].contains(q) {
                return Err(CircuitError::RepeatedQubit(gate.to_string()));
            }
        }
        if gate.angle().is_some_and(|a| !a.is_finite()) {
            return Err(CircuitError::NonFiniteAngle);
        }
        self.gates.push(gate);
        Ok(())
    }

    // Emitters only produce gates on valid qubits.
    fn emit(&mut self, gate: Gate) {
        self.push(gate).expect("emitted gate out of range");
    }

    /// Appends `other`'s gates and phase.
    pub fn append(&mut self, other: &Circuit) -> Result<(), CircuitError> {
        for g in &other.gates {
            self.push(*g)?;
        }
        self.global_phase += other.global_phase;
        Ok(())
    }

    pub fn counts(&self) -> GateCounts {
        let mut c = GateCounts::default();
        for g in &self.gates {
            match g {
                Gate::Cnot { .. } => c.cnot += 1,
                Gate::Rz { .. } => c.rz += 1,
                Gate::H { .. } => c.h += 1,
                Gate::X { .. } => c.x += 1,
                Gate::Crz { .. } => c.crz += 1,
                Gate::Ccrz { .. } => c.ccrz += 1,
            }
        }
        c
    }

    pub fn cnot_count(&self) -> usize {
        self.counts().cnot
    }

    pub fn rz_count(&self) -> usize {
        self.counts().rz
    }

    /// Rewrites CRZ and CCRZ into CNOT and RZ gates.
    pub fn lowered(&self) -> Circuit {
        let mut out = Circuit {
            n_qubits: self.n_qubits,
            gates: Vec::with_capacity(self.gates.len()),
            global_phase: self.global_phase,
        };
        for g in &self.gates {
            lower_into(&mut out.gates, *g);
        }
        out
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }

    pub fn from_text(text: &str) -> Result<Self, CircuitError> {
        text.parse()
    }
}

fn lower_into(out: &mut Vec<Gate>, g: Gate) {
    match g {
        Gate::Crz { control, qubit, angle } => {
            out.push(Gate::Rz { qubit, angle: angle / 2.0 });
            out.push(Gate::Cnot { control, target: qubit });
            out.push(Gate::Rz { qubit, angle: -angle / 2.0 });
            out.push(Gate::Cnot { control, target: qubit });
        }
        Gate::Ccrz { control1, control2, qubit, angle } => {
            lower_into(out, Gate::Crz { control: control2, qubit, angle: angle / 2.0 });
            out.push(Gate::Cnot { control: control1, target: control2 });
            lower_into(out, Gate::Crz { control: control2, qubit, angle: -angle / 2.0 });
            out.push(Gate::Cnot { control: control1, target: control2 });
            lower_into(out, Gate::Crz { control: control1, qubit, angle: angle / 2.0 });
        }
        other => out.push(other),
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "qubits {}", self.n_qubits)?;
        writeln!(f, "phase {}", format_sig(self.global_phase, ANGLE_DIGITS))?;
        for g in &self.gates {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}

impl FromStr for Circuit {
    type Err = CircuitError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut circuit: Option<Circuit> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let err = |msg: String| CircuitError::Parse { line, msg };
            let fields: Vec<&str> = content.split_whitespace().collect();
            let op = fields[0];
            let args = &fields[1..];
            let qubit = |s: &str| -> Result<usize, CircuitError> {
                match s.parse::<usize>() {
                    Ok(q) if q >= 1 => Ok(q - 1),
                    _ => Err(err(format!("invalid qubit '{s}'"))),
                }
            };
            let angle = |s: &str| -> Result<f64, CircuitError> {
                s.parse::<f64>()
                    .ok()
                    .filter(|a| a.is_finite())
                    .ok_or_else(|| err(format!("invalid angle '{s}'")))
            };
            let arity = |k: usize| -> Result<(), CircuitError> {
                if args.len() == k {
                    Ok(())
                } else {
                    Err(err(format!("'{op}' takes {k} arguments, got {}", args.len())))
                }
            };

            if op == "qubits" {
                if circuit.is_some() {
                    return Err(err("duplicate 'qubits' line".into()));
                }
                arity(1)?;
                let n = args[0]
                    .parse::<usize>()
                    .map_err(|_| err(format!("invalid qubit count '{}'", args[0])))?;
                circuit = Some(Circuit::new(n));
                continue;
            }
            let c = circuit
                .as_mut()
                .ok_or_else(|| err("expected 'qubits N' first".into()))?;
            let gate = match op {
                "phase" => {
                    arity(1)?;
                    c.global_phase += angle(args[0])?;
                    continue;
                }
                "cx" => {
                    arity(2)?;
                    Gate::Cnot { control: qubit(args[0])?, target: qubit(args[1])? }
                }
                "rz" => {
                    arity(2)?;
                    Gate::Rz { qubit: qubit(args[0])?, angle: angle(args[1])? }
                }
                "h" => {
                    arity(1)?;
                    Gate::H { qubit: qubit(args[0])? }
                }
                "x" => {
                    arity(1)?;
                    Gate::X { qubit: qubit(args[0])? }
                }
                "crz" => {
                    arity(3)?;
                    Gate::Crz {
                        control: qubit(args[0])?,
                        qubit: qubit(args[1])?,
                        angle: angle(args[2])?,
                    }
                }
                "ccrz" => {
                    arity(4)?;
                    Gate::Ccrz {
                        control1: qubit(args[0])?,
                        control2: qubit(args[1])?,
                        qubit: qubit(args[2])?,
                        angle: angle(args[3])?,
                    }
                }
                other => return Err(err(format!("unknown gate '{other}'"))),
            };
            c.push(gate).map_err(|e| err(e.to_string()))?;
        }
        circuit.ok_or(CircuitError::Parse {
            line: 0,
            msg: "missing 'qubits N' header".into(),
        })
    }
}

/// Appends `Λ(exp(−iγ·w·Z_S))` with up to two control qubits. `offset`
/// shifts the qubits of `S`.
fn emit_term(c: &mut Circuit, key: ZTermKey, w: f64, gamma: f64, offset: usize, controls: &[usize]) {
    let qs: Vec<usize> = key.qubits().map(|q| q + offset).collect();
    let theta = 2.0 * gamma * w;
    let Some((&last, _)) = qs.split_last() else {
        // e^{iφ} on the all-ones control state
        let phi = -gamma * w;
        match *controls {
            [] => c.add_phase(phi),
            [a] => {
                c.emit(Gate::Rz { qubit: a, angle: phi });
                c.add_phase(phi / 2.0);
            }
            [a, b] => {
                c.emit(Gate::Crz { control: a, qubit: b, angle: phi });
                c.emit(Gate::Rz { qubit: a, angle: phi / 2.0 });
                c.add_phase(phi / 4.0);
            }
            _ => unreachable!("at most two controls"),
        }
        return;
    };
    for pair in qs.windows(2) {
        c.emit(Gate::Cnot { control: pair[0], target: pair[1] });
    }
    c.emit(match *controls {
        [] => Gate::Rz { qubit: last, angle: theta },
        [a] => Gate::Crz { control: a, qubit: last, angle: theta },
        [a, b] => Gate::Ccrz { control1: a, control2: b, qubit: last, angle: theta },
        _ => unreachable!("at most two controls"),
    });
    for pair in qs.windows(2).rev() {
        c.emit(Gate::Cnot { control: pair[0], target: pair[1] });
    }
}

/// `exp(−iγH)` as CNOT ladders around single RZ rotations.
pub fn emit_evolution(h: &DiagonalHamiltonian, gamma: f64) -> Circuit {
    let mut c = Circuit::new(h.n_qubits());
    for (key, w) in h.terms() {
        emit_term(&mut c, key, w, gamma, 0, &[]);
    }
    c
}

/// `exp(−iγH)` on qubits `offset..offset+n`, applied only when every
/// control qubit is 1. Built inside a register of `n_total` qubits.
pub fn emit_controlled_terms(
    h: &DiagonalHamiltonian,
    gamma: f64,
    n_total: usize,
    offset: usize,
    controls: &[usize],
) -> Result<Circuit, CircuitError> {
    assert!(controls.len() <= 2, "at most two controls are supported");
    let mut c = Circuit::new(n_total);
    let span = offset + h.n_qubits();
    if span > n_total {
        return Err(CircuitError::QubitOutOfRange {
            gate: "controlled evolution".into(),
            qubit: span - 1,
            n: n_total,
        });
    }
    for &q in controls {
        if q >= n_total {
            return Err(CircuitError::QubitOutOfRange {
                gate: "controlled evolution".into(),
                qubit: q,
                n: n_total,
            });
        }
        if (offset..span).contains(&q) || controls.iter().filter(|&&p| p == q).count() > 1 {
            return Err(CircuitError::RepeatedQubit("controlled evolution".into()));
        }
    }
    for (key, w) in h.terms() {
        emit_term(&mut c, key, w, gamma, offset, controls);
    }
    Ok(c)
}

/// QUBO evolution with its resource tally.
#[derive(Debug, Clone, PartialEq)]
pub struct QuboCircuit {
    pub circuit: Circuit,
    /// RZ rotations coming from linear terms.
    pub rz_singles: usize,
    /// CNOT–RZ–CNOT blocks coming from quadratic terms.
    pub rzz_blocks: usize,
}

pub fn emit_qubo_evolution(q: &QuboInstance, t: f64) -> Result<QuboCircuit, CircuitError> {
    let h = compile_qubo(q)?;
    let (mut rz_singles, mut rzz_blocks) = (0, 0);
    for (key, _) in h.terms() {
        match key.degree() {
            0 => {}
            1 => rz_singles += 1,
            2 => rzz_blocks += 1,
            d => unreachable!("QUBO Hamiltonian with a degree-{d} term"),
        }
    }
    Ok(QuboCircuit {
        circuit: emit_evolution(&h, t),
        rz_singles,
        rzz_blocks,
    })
}

/// `G_f: |x⟩|a⟩ → |x⟩|a⊕f(x)⟩` with the target on qubit `n`.
pub fn emit_bit_query(f: &BoolExpr, n: usize) -> Result<Circuit, CircuitError> {
    let hf = compile(f, n)?;
    let mut c = Circuit::new(n + 1);
    c.emit(Gate::H { qubit: n });
    c.append(&emit_controlled_terms(&hf, std::f64::consts::PI, n + 1, 0, &[n])?)?;
    c.emit(Gate::H { qubit: n });
    Ok(c)
}

/// `Λ_f(exp(−iht))`: `f` on qubits `0..k`, `h` on the `n` qubits above.
pub fn emit_controlled_evolution(
    f: &BoolExpr,
    k: usize,
    h: &DiagonalHamiltonian,
    t: f64,
) -> Result<Circuit, CircuitError> {
    let hf = compile(f, k)?;
    let joint = hf.tensor(h).map_err(CompileError::from)?;
    Ok(emit_evolution(&joint, t))
}

/// CNOT count predicted by the ladder construction, `Σ 2(|S|−1)`.
pub fn ladder_cnot_count(h: &DiagonalHamiltonian) -> usize {
    h.terms()
        .map(|(k, _)| 2 * k.degree().saturating_sub(1))
        .sum()
}
