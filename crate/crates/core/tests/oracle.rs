use std::f64::consts::{FRAC_PI_2, PI};

use boolham::corpus::{bundled_functions, Corpus, DEFAULT_SEED};
use boolham::dense::{diagonal_spectrum, DenseOperator, OracleSim};
use boolham::pauli::{Pauli, PauliOperator};
use boolham::verify::verify_corpus;
use boolham::{compile, compile_pseudo, emit_bit_query, emit_evolution, parse_dimacs, parse_expr, Circuit};
use num_complex::Complex64;

fn sim() -> OracleSim {
    OracleSim::default()
}

#[test]
fn bit_query_matches_generator_exponential() {
    // G_f = exp(−i(π/2)·H_f ⊗ (X − I)) with the target above the data
    let s = sim();
    let one = Complex64::new(1.0, 0.0);
    for f in bundled_functions() {
        let n = f.n;
        let hf = PauliOperator::from_diagonal(&compile(&f.expr, n).unwrap());
        let x_minus_i = PauliOperator::single(1, 1, Pauli::X, one)
            .unwrap()
            .sub(&PauliOperator::identity(1).unwrap())
            .unwrap();
        let hf_dense = s.dense_of_pauli(&hf).unwrap();
        let generator = hf_dense.tensor(&s.dense_of_pauli(&x_minus_i).unwrap());
        let expected = s.expm_hermitian(&generator, FRAC_PI_2).unwrap();
        let g = s.simulate_circuit(&emit_bit_query(&f.expr, n).unwrap()).unwrap();
        assert!(g.max_diff(&expected) < 1e-9, "{}", f.name);
    }
}

#[test]
fn or_query_and_phase() {
    let s = sim();
    let f = parse_expr("x1 | x2", 2).unwrap();
    let h = compile(&f, 2).unwrap();
    let u = s.simulate_circuit(&emit_evolution(&h, PI)).unwrap();
    let signs = DenseOperator::diagonal(
        [1.0, -1.0, -1.0, -1.0].iter().map(|v| Complex64::new(*v, 0.0)).collect(),
    )
    .unwrap();
    assert!(u.max_diff_up_to_phase(&signs) < 1e-9);
}

#[test]
fn unsatisfiable_query_is_identity() {
    let f = parse_expr("x1 & !x1", 1).unwrap();
    let g = sim().simulate_circuit(&emit_bit_query(&f, 1).unwrap()).unwrap();
    assert!(g.max_diff_up_to_phase(&DenseOperator::identity(2)) < 1e-12);
}

#[test]
fn controlled_or_matches_generator() {
    let s = sim();
    let f = parse_expr("x1 | x2", 2).unwrap();
    let x = s
        .dense_of_pauli(&PauliOperator::single(1, 1, Pauli::X, Complex64::new(1.0, 0.0)).unwrap())
        .unwrap();
    let lhs = s.dense_controlled(&f, 2, &s.expm_hermitian(&x, 1.0).unwrap()).unwrap();
    let hf = s.dense_of_zham(&compile(&f, 2).unwrap()).unwrap();
    let rhs = s.expm_hermitian(&hf.tensor(&x), 1.0).unwrap();
    assert!(lhs.max_diff(&rhs) < 1e-9);
}

#[test]
fn maxsat_ground_energy() {
    let inst = parse_dimacs("p cnf 3 4\n1 2 0\n-1 2 0\n-2 3 0\n-2 -3 0\n").unwrap();
    let h = compile_pseudo(&inst.objective, 3).unwrap().scale(-1.0);
    let spec = diagonal_spectrum(&h).unwrap();
    assert_eq!(spec.min(), -3.0);
}

#[test]
fn ground_state_logic_spectrum() {
    let f = parse_expr("x1 ^ x2", 2).unwrap();
    let hg = boolham::ground_state_logic(&f, 2).unwrap();
    let spec = diagonal_spectrum(&hg).unwrap();
    assert_eq!(spec.argmin(1e-12), vec![0, 3, 5, 6]);
    assert_eq!(spec.max(), 1.0);
}

#[test]
fn circuit_text_survives_simulation() {
    let h = compile(&parse_expr("(x1 & x2) | x3", 3).unwrap(), 3).unwrap();
    let c = emit_evolution(&h, 0.37);
    let back = Circuit::from_text(&c.to_text()).unwrap();
    let (a, b) = (sim().simulate_circuit(&c).unwrap(), sim().simulate_circuit(&back).unwrap());
    assert!(a.max_diff(&b) < 1e-14);
}

#[test]
fn full_corpus_verifies() {
    let report = verify_corpus(&sim(), &Corpus::standard(DEFAULT_SEED, 50, 20)).unwrap();
    assert!(report.passed(), "{report}");
    assert_eq!(report.entries.iter().filter(|e| e.check.is_none()).count(), 0);
}
