//! Invariant suite over functions and QUBO instances, with residuals.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::circuit::{emit_bit_query, emit_evolution, emit_qubo_evolution, ladder_cnot_count};
use crate::compiler::{compile, compile_qubo, compile_qubo_by_rules, ground_state_logic, QuboInstance};
use crate::corpus::{Corpus, NamedFunction};
use crate::dense::{diagonal_spectrum, CheckResult, DenseError, DenseOperator, OracleSim, DENSE_TOL};
use crate::expr::BoolExpr;
use crate::fourier::{count_models, fourier_from_table, TruthTable};
use crate::zham::DiagonalHamiltonian;

pub const EVOLUTION_ANGLES: [f64; 3] = [0.3, 1.0, PI];

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub subject: String,
    /// `None` when skipped because the register exceeds the dense cap.
    pub check: Option<CheckResult>,
    pub label: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerifyReport {
    pub entries: Vec<Entry>,
}

impl VerifyReport {
    fn push(&mut self, subject: &str, check: CheckResult) {
        self.entries.push(Entry {
            subject: subject.to_string(),
            label: check.name.clone(),
            check: Some(check),
        });
    }

    fn skip(&mut self, subject: &str, label: &str) {
        self.entries.push(Entry {
            subject: subject.to_string(),
            check: None,
            label: label.to_string(),
        });
    }

    pub fn passed(&self) -> bool {
        self.entries
            .iter()
            .all(|e| e.check.as_ref().is_none_or(|c| c.pass))
    }

    pub fn failures(&self) -> usize {
        self.entries
            .iter()
            .filter(|e| e.check.as_ref().is_some_and(|c| !c.pass))
            .count()
    }

    pub fn merge(&mut self, other: VerifyReport) {
        self.entries.extend(other.entries);
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            match &e.check {
                Some(c) => writeln!(
                    f,
                    "{} {}: {} residual={:.3e}",
                    if c.pass { "PASS" } else { "FAIL" },
                    e.subject,
                    e.label,
                    c.residual
                )?,
                None => writeln!(f, "SKIP {}: {} (dense cap)", e.subject, e.label)?,
            }
        }
        let checks = self.entries.iter().filter(|e| e.check.is_some()).count();
        write!(f, "{} checks, {} failed", checks, self.failures())
    }
}

fn bool_residual(ok: bool) -> f64 {
    if ok {
        0.0
    } else {
        1.0
    }
}

/// Runs every applicable invariant for a Boolean function.
pub fn verify_function(sim: &OracleSim, name: &str, f: &BoolExpr, n: usize) -> Result<VerifyReport, DenseError> {
    let mut r = VerifyReport::default();
    let hf = compile(f, n)?;
    let table = TruthTable::of_expr(f, n)?;

    let via_table = fourier_from_table(&table)?;
    r.push(name, CheckResult::new("compile equals transform", hf.max_coeff_diff(&via_table), DENSE_TOL));

    let empty = hf.identity_coeff();
    r.push(name, CheckResult::new("sum of squares equals mean", (hf.sum_of_squares() - empty).abs(), DENSE_TOL));
    let f0 = table.values()[0];
    r.push(name, CheckResult::new("coefficient sum equals f(0)", (hf.coeff_sum() - f0).abs(), DENSE_TOL));
    let range = (-empty).max(empty - 1.0).max(0.0);
    r.push(name, CheckResult::new("mean in [0,1]", range, DENSE_TOL));
    let over_half = hf
        .terms()
        .filter(|(k, _)| !k.is_identity())
        .map(|(_, w)| (w.abs() - 0.5).max(0.0))
        .fold(0.0, f64::max);
    r.push(name, CheckResult::new("nonconstant coefficients at most 1/2", over_half, DENSE_TOL));

    let brute = table.values().iter().filter(|v| **v == 1.0).count() as u64;
    let counted = count_models(&hf)?;
    r.push(name, CheckResult::new("model count", bool_residual(counted == brute), 0.0));

    let gs = ground_state_logic(f, n)?;
    let spec = diagonal_spectrum(&gs)?;
    let zeros = spec.argmin(DENSE_TOL);
    let expected: Vec<u64> = {
        let mut v: Vec<u64> = (0..1u64 << n)
            .map(|x| x | ((f.eval(x) as u64) << n))
            .collect();
        v.sort_unstable();
        v
    };
    let others_one = spec
        .levels
        .iter()
        .filter(|(_, x)| expected.binary_search(x).is_err())
        .map(|(e, _)| (e - 1.0).abs())
        .fold(0.0, f64::max);
    let gs_res = if zeros == expected && spec.min().abs() <= DENSE_TOL { others_one } else { 1.0 };
    r.push(name, CheckResult::new("ground-state logic spectrum", gs_res, DENSE_TOL));

    if n <= sim.cap() {
        verify_dense_function(sim, &mut r, name, f, n, &hf, &table)?;
    } else {
        r.skip(name, "dense checks");
    }
    if n + 1 <= sim.cap() {
        let g = sim.simulate_circuit(&emit_bit_query(f, n)?)?;
        let reference = sim.bit_query_reference(f, n, n + 1)?;
        r.push(name, CheckResult::new("bit query action", g.max_diff(&reference), DENSE_TOL));
        let square = g.matmul(&g)?;
        r.push(name, CheckResult::new("bit query involution", square.max_diff(&DenseOperator::identity(n + 1)), DENSE_TOL));
        let tr = g.trace() / (1u64 << (n + 1)) as f64;
        r.push(
            name,
            CheckResult::new("bit query trace", (tr - Complex64::new(1.0 - empty, 0.0)).norm(), DENSE_TOL),
        );
    } else {
        r.skip(name, "bit query");
    }
    if n + 2 <= sim.cap() {
        for c in sim.verify_kickback_suite(f, n)?.checks {
            r.push(name, c);
        }
    } else {
        r.skip(name, "kickback suite");
    }
    Ok(r)
}

fn verify_dense_function(
    sim: &OracleSim,
    r: &mut VerifyReport,
    name: &str,
    f: &BoolExpr,
    n: usize,
    hf: &DiagonalHamiltonian,
    table: &TruthTable,
) -> Result<(), DenseError> {
    let d = sim.dense_of_zham(hf)?;
    let expected = DenseOperator::diagonal(table.values().iter().map(|v| Complex64::new(*v, 0.0)).collect())?;
    r.push(name, CheckResult::new("dense diagonal equals truth table", d.max_diff(&expected), DENSE_TOL));
    let tr = d.trace().re / (1u64 << n) as f64;
    r.push(name, CheckResult::new("normalized trace", (tr - hf.identity_coeff()).abs(), DENSE_TOL));

    let phase_query = sim.expm_hermitian(&d, PI)?;
    let signs = DenseOperator::diagonal(
        (0..1u64 << n)
            .map(|x| Complex64::new(if f.eval(x) { -1.0 } else { 1.0 }, 0.0))
            .collect(),
    )?;
    r.push(name, CheckResult::new("phase query", phase_query.max_diff_up_to_phase(&signs), DENSE_TOL));

    for gamma in EVOLUTION_ANGLES {
        let c = emit_evolution(hf, gamma);
        let u = sim.simulate_circuit(&c)?;
        let e = sim.expm_diagonal(hf, gamma)?;
        r.push(name, CheckResult::new(format!("evolution circuit gamma={gamma:.4}"), u.max_diff(&e), DENSE_TOL));
    }
    let c = emit_evolution(hf, 1.0);
    r.push(
        name,
        CheckResult::new("ladder CNOT count", bool_residual(c.cnot_count() == ladder_cnot_count(hf)), 0.0),
    );
    Ok(())
}

pub fn verify_qubo(sim: &OracleSim, name: &str, q: &QuboInstance) -> Result<VerifyReport, DenseError> {
    let mut r = VerifyReport::default();
    let closed = compile_qubo(q)?;
    let rules = compile_qubo_by_rules(q)?;
    r.push(name, CheckResult::new("closed form equals composition rules", closed.max_coeff_diff(&rules), DENSE_TOL));
    let n = q.n_vars();
    let pointwise = (0..1u64 << n)
        .map(|x| (closed.eval(x) - q.eval(x)).abs())
        .fold(0.0, f64::max);
    r.push(name, CheckResult::new("eigenvalues equal objective", pointwise, DENSE_TOL));
    let qc = emit_qubo_evolution(q, 1.0)?;
    let counts_ok = qc.rz_singles <= n && qc.rzz_blocks <= n * n.saturating_sub(1) / 2;
    r.push(name, CheckResult::new("gate count bounds", bool_residual(counts_ok), 0.0));
    if n <= sim.cap() {
        let u = sim.simulate_circuit(&qc.circuit)?;
        let e = sim.expm_diagonal(&closed, 1.0)?;
        r.push(name, CheckResult::new("evolution circuit", u.max_diff(&e), DENSE_TOL));
    } else {
        r.skip(name, "evolution circuit");
    }
    Ok(r)
}

pub fn verify_named(sim: &OracleSim, f: &NamedFunction) -> Result<VerifyReport, DenseError> {
    verify_function(sim, &f.name, &f.expr, f.n)
}

pub fn verify_corpus(sim: &OracleSim, corpus: &Corpus) -> Result<VerifyReport, DenseError> {
    let mut r = VerifyReport::default();
    for f in &corpus.functions {
        r.merge(verify_named(sim, f)?);
    }
    for (i, q) in corpus.qubos.iter().enumerate() {
        r.merge(verify_qubo(sim, &format!("qubo{i}"), q)?);
    }
    Ok(r)
}
