//! Acceptance suite: one PASS/FAIL line per criterion; nonzero exit on failure.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use boolham::circuit::emit_controlled_evolution;
use boolham::corpus::{self, cnf_expr, random_expr, Corpus, DEFAULT_SEED};
use boolham::dense::{diagonal_spectrum, DenseOperator, OracleSim};
use boolham::fourier::{check_approx, count_models, fourier_from_table, TruthTable};
use boolham::pauli::{jordan_wigner, spin_lowering, spin_raising, Ladder, Pauli, PauliOperator};
use boolham::{
    augment_penalties, compile, compile_pseudo, compile_qubo, compile_qubo_by_rules, emit_bit_query,
    emit_evolution, emit_qubo_evolution, ground_state_logic, parse_expr, BoolExpr, DiagonalHamiltonian,
    PseudoBooleanObjective, ZTermKey,
};
use num_complex::Complex64;
use rand::Rng;

type Outcome = Result<String, String>;

const TOL: f64 = 1e-9;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

/// `Σ w·Z_S` with 1-based qubit lists.
fn zpoly(n: usize, terms: &[(&[usize], f64)]) -> DiagonalHamiltonian {
    DiagonalHamiltonian::from_terms(
        n,
        terms
            .iter()
            .map(|(qs, w)| (ZTermKey::from_qubits(qs.iter().map(|q| q - 1)), *w)),
    )
    .unwrap()
}

fn z(n: usize, j: usize) -> DiagonalHamiltonian {
    zpoly(n, &[(&[j], 1.0)])
}

fn id(n: usize) -> DiagonalHamiltonian {
    DiagonalHamiltonian::identity(n).unwrap()
}

fn parity(n: usize, k: usize) -> DiagonalHamiltonian {
    let all: Vec<usize> = (1..=k).collect();
    zpoly(n, &[(&all, 1.0)])
}

fn compiled(text: &str, n: usize) -> Result<DiagonalHamiltonian, String> {
    compile(&parse_expr(text, n).map_err(e)?, n).map_err(e)
}

fn golden(name: &str, got: &DiagonalHamiltonian, want: &DiagonalHamiltonian, tol: f64) -> Result<f64, String> {
    let d = got.max_coeff_diff(want);
    ensure(d <= tol, || format!("{name}: got {got}, expected {want} (diff {d:e})"))?;
    Ok(d)
}

/// Fourier coefficient straight from the definition.
fn naive_fourier(table: &[bool], n: usize) -> Vec<f64> {
    let dim = 1usize << n;
    (0..dim)
        .map(|s| {
            let sum: f64 = (0..dim)
                .filter(|x| table[*x])
                .map(|x| if (s & x).count_ones() % 2 == 0 { 1.0 } else { -1.0 })
                .sum();
            sum / dim as f64
        })
        .collect()
}

fn brute_value(h: &DiagonalHamiltonian, x: u64) -> f64 {
    h.terms()
        .map(|(k, w)| if (k.mask() & x).count_ones() % 2 == 0 { w } else { -w })
        .sum()
}

fn dense_exp(h: &DiagonalHamiltonian, t: f64) -> DenseOperator {
    DenseOperator::diagonal(
        (0..1u64 << h.n_qubits())
            .map(|x| Complex64::from_polar(1.0, -t * brute_value(h, x)))
            .collect(),
    )
    .unwrap()
}

fn clause_sat(clause: &[i64], x: u64) -> bool {
    clause.iter().any(|&l| {
        let bit = (x >> (l.unsigned_abs() - 1)) & 1 == 1;
        if l > 0 {
            bit
        } else {
            !bit
        }
    })
}

fn corpus() -> Corpus {
    Corpus::standard(DEFAULT_SEED, 50, 20)
}

fn ac1() -> Outcome {
    let mut worst: f64 = 0.0;
    let half = 0.5;
    let rows: Vec<(&str, usize, DiagonalHamiltonian)> = vec![
        ("x1", 1, id(1).scale(half).sub(&z(1, 1).scale(half)).unwrap()),
        ("!x1", 1, id(1).scale(half).add(&z(1, 1).scale(half)).unwrap()),
        ("x1 ^ x2", 2, id(2).scale(half).sub(&parity(2, 2).scale(half)).unwrap()),
        (
            "x1 & x2",
            2,
            id(2).scale(0.25).sub(&z(2, 1).add(&z(2, 2)).unwrap().sub(&parity(2, 2)).unwrap().scale(0.25)).unwrap(),
        ),
        (
            "x1 | x2",
            2,
            id(2).scale(0.75).sub(&z(2, 1).add(&z(2, 2)).unwrap().add(&parity(2, 2)).unwrap().scale(0.25)).unwrap(),
        ),
        (
            "!(x1 & x2)",
            2,
            id(2).scale(0.75).add(&z(2, 1).add(&z(2, 2)).unwrap().sub(&parity(2, 2)).unwrap().scale(0.25)).unwrap(),
        ),
        (
            "x1 => x2",
            2,
            id(2).scale(0.75).add(&z(2, 1).sub(&z(2, 2)).unwrap().add(&parity(2, 2)).unwrap().scale(0.25)).unwrap(),
        ),
    ];
    let mut count = 0;
    for (text, n, want) in &rows {
        worst = worst.max(golden(text, &compiled(text, *n)?, want, 1e-12)?);
        count += 1;
    }
    // k-ary rows
    for k in 2..=6 {
        let vars: Vec<String> = (1..=k).map(|j| format!("x{j}")).collect();
        let xor_want = id(k).scale(half).sub(&parity(k, k).scale(half)).unwrap();
        let mut and_prod = id(k);
        let mut or_prod = id(k);
        for j in 1..=k {
            and_prod = and_prod.mul(&id(k).sub(&z(k, j)).unwrap()).unwrap();
            or_prod = or_prod.mul(&id(k).add(&z(k, j)).unwrap()).unwrap();
        }
        let scale = 1.0 / (1u64 << k) as f64;
        let and_want = and_prod.scale(scale);
        let or_want = id(k).sub(&or_prod.scale(scale)).unwrap();
        worst = worst.max(golden("xor_k", &compiled(&vars.join(" ^ "), k)?, &xor_want, 1e-12)?);
        worst = worst.max(golden("and_k", &compiled(&vars.join(" & "), k)?, &and_want, 1e-12)?);
        worst = worst.max(golden("or_k", &compiled(&vars.join(" | "), k)?, &or_want, 1e-12)?);
    }
    count += 3;
    Ok(format!("{count} clauses (k-ary rows for k=2..6), max diff {worst:e}"))
}

fn ac2() -> Outcome {
    let fns = corpus::three_bit_functions();
    let get = |name: &str| fns.iter().find(|f| f.name == name).unwrap().clone();
    let z3 = |j| z(3, j);
    let zz = |a: usize, b: usize| zpoly(3, &[(&[a, b], 1.0)]);
    let zzz = zpoly(3, &[(&[1, 2, 3], 1.0)]);
    let sum = |hs: &[DiagonalHamiltonian]| hs.iter().fold(DiagonalHamiltonian::zero(3).unwrap(), |a, h| a.add(h).unwrap());

    let maj = id(3).scale(0.5).sub(&sum(&[z3(1), z3(2), z3(3), zzz.scale(-1.0)]).scale(0.25)).unwrap();
    let nae = id(3).scale(0.75).sub(&sum(&[zz(1, 2), zz(1, 3), zz(2, 3)]).scale(0.25)).unwrap();
    let mod3 = id(3).scale(0.25).add(&sum(&[zz(1, 2), zz(2, 3), zz(1, 3)]).scale(0.25)).unwrap();
    let one_in_three = sum(&[
        id(3).scale(3.0),
        z3(1),
        z3(2),
        z3(3),
        zz(1, 2).scale(-1.0),
        zz(2, 3).scale(-1.0),
        zz(1, 3).scale(-1.0),
        zzz.scale(-3.0),
    ])
    .scale(0.125);

    let mut worst: f64 = 0.0;
    let mut got = Vec::new();
    for (name, want) in [("maj", &maj), ("nae", &nae), ("mod3", &mod3), ("1in3", &one_in_three)] {
        let f = get(name);
        let h = compile(&f.expr, 3).map_err(e)?;
        worst = worst.max(golden(name, &h, want, 1e-12)?);
        got.push(h);
    }
    let complement = id(3).sub(&got[1]).unwrap();
    worst = worst.max(golden("mod3 = I - nae", &got[2], &complement, 1e-12)?);
    Ok(format!("4 functions plus complement identity, max diff {worst:e}"))
}

fn random_exprs(seed: u64, count: usize, max_n: usize) -> Vec<(usize, BoolExpr)> {
    let mut r = corpus::rng(seed);
    (0..count)
        .map(|_| {
            let n = r.random_range(1..=max_n);
            (n, random_expr(&mut r, n, 4))
        })
        .collect()
}

fn ac3() -> Outcome {
    let mut worst: f64 = 0.0;
    for (n, f) in random_exprs(11, 200, 10) {
        let h = compile(&f, n).map_err(e)?;
        let empty = h.identity_coeff();
        let f0 = if f.eval(0) { 1.0 } else { 0.0 };
        let parseval = (h.sum_of_squares() - empty).abs();
        let at_zero = (h.coeff_sum() - f0).abs();
        let range = (-empty).max(empty - 1.0).max(0.0);
        let half = h
            .terms()
            .filter(|(k, _)| !k.is_identity())
            .map(|(_, w)| (w.abs() - 0.5).max(0.0))
            .fold(0.0, f64::max);
        let r = parseval.max(at_zero).max(range).max(half);
        ensure(r <= TOL, || format!("{f} on {n} vars: residual {r:e}"))?;
        worst = worst.max(r);
    }
    Ok(format!("200 expressions, max residual {worst:e}"))
}

fn ac4() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut naive_checked = 0;
    for (n, f) in random_exprs(11, 200, 10) {
        let h = compile(&f, n).map_err(e)?;
        let bits = f.truth_table(n).map_err(e)?;
        let via_table = fourier_from_table(&TruthTable::from_bools(&bits).map_err(e)?).map_err(e)?;
        let d = h.max_coeff_diff(&via_table);
        ensure(d <= TOL, || format!("{f}: compile and transform differ by {d:e}"))?;
        worst = worst.max(d);
        if n <= 8 {
            for (s, c) in naive_fourier(&bits, n).into_iter().enumerate() {
                let d = (h.coeff(ZTermKey::new(s as u64)) - c).abs();
                ensure(d <= TOL, || format!("{f}: coefficient {s} differs from definition by {d:e}"))?;
                worst = worst.max(d);
            }
            naive_checked += 1;
        }
    }
    Ok(format!("200 expressions ({naive_checked} also against the defining sum), max diff {worst:e}"))
}

fn ac5() -> Outcome {
    let mut r = corpus::rng(5);
    let mut total = 0u64;
    for _ in 0..200 {
        let n = r.random_range(1..=10);
        let m = r.random_range(1..=3 * n);
        let clauses = corpus::random_cnf(&mut r, n, m, 3);
        let h = compile(&cnf_expr(&clauses), n).map_err(e)?;
        let counted = count_models(&h).map_err(e)?;
        let brute = (0..1u64 << n).filter(|x| clauses.iter().all(|c| clause_sat(c, *x))).count() as u64;
        ensure(counted == brute, || format!("{clauses:?}: counted {counted}, brute force {brute}"))?;
        total += brute;
    }
    Ok(format!("200 CNFs, {total} models in total, all exact"))
}

fn ac6() -> Outcome {
    let mut r = corpus::rng(6);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let n = r.random_range(1..=10);
        let q = corpus::random_qubo(&mut r, n);
        let closed = compile_qubo(&q).map_err(e)?;
        let rules = compile_qubo_by_rules(&q).map_err(e)?;
        let d = closed.max_coeff_diff(&rules);
        ensure(d <= TOL, || format!("closed form differs from rules by {d:e}"))?;
        let pointwise = (0..1u64 << n)
            .map(|x| (brute_value(&closed, x) - q.eval(x)).abs())
            .fold(0.0, f64::max);
        ensure(pointwise <= TOL, || format!("eigenvalues differ from objective by {pointwise:e}"))?;
        worst = worst.max(d).max(pointwise);

        let qc = emit_qubo_evolution(&q, 1.0).map_err(e)?;
        let counts = qc.circuit.counts();
        ensure(qc.rz_singles <= n && qc.rzz_blocks <= n * (n - 1) / 2, || {
            format!("n={n}: {} RZ, {} blocks", qc.rz_singles, qc.rzz_blocks)
        })?;
        ensure(
            counts.rz == qc.rz_singles + qc.rzz_blocks && counts.cnot == 2 * qc.rzz_blocks,
            || format!("reported counts disagree with circuit {counts:?}"),
        )?;
    }
    Ok(format!("50 instances, max diff {worst:e}; gate counts within bounds"))
}

fn ac7() -> Outcome {
    let sim = OracleSim::default();
    let mut r = corpus::rng(7);
    let mut worst: f64 = 0.0;
    let mut worst_exact: f64 = 0.0;
    for _ in 0..50 {
        let n = r.random_range(1..=8);
        let size = r.random_range(1..=40);
        let h = corpus::random_hamiltonian(&mut r, n, size);
        let expected_cnots: usize = h.terms().map(|(k, _)| 2 * (k.degree().max(1) - 1)).sum();
        for gamma in [0.3, 1.0, PI] {
            let c = emit_evolution(&h, gamma);
            ensure(c.cnot_count() == expected_cnots, || {
                format!("CNOT count {} != {expected_cnots}", c.cnot_count())
            })?;
            let u = sim.simulate_circuit(&c).map_err(e)?;
            let want = dense_exp(&h, gamma);
            let aligned = u.max_diff_up_to_phase(&want);
            ensure(aligned <= TOL, || format!("n={n} gamma={gamma}: residual {aligned:e}"))?;
            worst = worst.max(aligned);
            worst_exact = worst_exact.max(u.max_diff(&want));
        }
    }
    ensure(worst_exact <= TOL, || format!("tracked global phase off by {worst_exact:e}"))?;
    Ok(format!("150 circuits, max residual {worst:e} (without alignment {worst_exact:e})"))
}

fn ac8() -> Outcome {
    let sim = OracleSim::default();
    let mut worst: f64 = 0.0;
    let c = corpus();
    for f in &c.functions {
        let h = compile(&f.expr, f.n).map_err(e)?;
        let u = sim.expm_hermitian(&sim.dense_of_zham(&h).map_err(e)?, PI).map_err(e)?;
        let signs = DenseOperator::diagonal(
            (0..1u64 << f.n)
                .map(|x| Complex64::new(if f.expr.eval(x) { -1.0 } else { 1.0 }, 0.0))
                .collect(),
        )
        .unwrap();
        let d = u.max_diff_up_to_phase(&signs);
        ensure(d <= TOL, || format!("{}: residual {d:e}", f.name))?;
        worst = worst.max(d);
    }
    Ok(format!("{} functions, max residual {worst:e}", c.functions.len()))
}

fn ac9() -> Outcome {
    let sim = OracleSim::default();
    let mut r = corpus::rng(9);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let k = r.random_range(1..=3);
        let m = r.random_range(1..=3);
        let f = random_expr(&mut r, k, 3);
        let size = r.random_range(1..=1usize << m);
        let h = corpus::random_hamiltonian(&mut r, m, size);
        let hf = compile(&f, k).map_err(e)?;
        let joint = sim.dense_of_zham(&hf.tensor(&h).map_err(e)?).map_err(e)?;
        for t in [0.5, PI] {
            let lhs = sim.dense_controlled(&f, k, &dense_exp(&h, t)).map_err(e)?;
            let rhs = sim.expm_hermitian(&joint, t).map_err(e)?;
            let d = lhs.max_diff(&rhs);
            ensure(d <= TOL, || format!("{f} with {h}: residual {d:e}"))?;
            let circ = sim.simulate_circuit(&emit_controlled_evolution(&f, k, &h, t).map_err(e)?).map_err(e)?;
            let dc = circ.max_diff(&lhs);
            ensure(dc <= TOL, || format!("{f} with {h}: circuit residual {dc:e}"))?;
            worst = worst.max(d).max(dc);
        }
    }
    Ok(format!("20 instances at t in {{0.5, pi}}, max residual {worst:e}"))
}

fn bit_query_reference(f: &BoolExpr, n: usize) -> DenseOperator {
    let dim = 1usize << (n + 1);
    let mut m = DenseOperator::zeros(n + 1);
    for col in 0..dim {
        let x = col & ((1 << n) - 1);
        let a = col >> n;
        let row = x | ((a ^ f.eval(x as u64) as usize) << n);
        m.set(row, col, Complex64::new(1.0, 0.0));
    }
    m
}

fn ac10() -> Outcome {
    let sim = OracleSim::default();
    let mut worst: f64 = 0.0;
    let c = corpus();
    let mut tested = 0;
    for f in c.functions.iter().filter(|f| f.n <= 6) {
        let g = sim.simulate_circuit(&emit_bit_query(&f.expr, f.n).map_err(e)?).map_err(e)?;
        let d = g.max_diff(&bit_query_reference(&f.expr, f.n));
        ensure(d <= TOL, || format!("{}: action residual {d:e}", f.name))?;
        let sq = g.matmul(&g).map_err(e)?.max_diff(&DenseOperator::identity(f.n + 1));
        ensure(sq <= TOL, || format!("{}: G^2 residual {sq:e}", f.name))?;
        let empty = compile(&f.expr, f.n).map_err(e)?.identity_coeff();
        let tr = g.trace() / (1u64 << (f.n + 1)) as f64;
        let dt = (tr - Complex64::new(1.0 - empty, 0.0)).norm();
        ensure(dt <= TOL, || format!("{}: trace residual {dt:e}", f.name))?;
        worst = worst.max(d).max(sq).max(dt);
        tested += 1;
    }
    let one = Complex64::new(1.0, 0.0);
    let cnot = DenseOperator::permutation(2, |c| if c & 1 == 1 { c ^ 2 } else { c });
    let toffoli = DenseOperator::permutation(3, |c| if c & 3 == 3 { c ^ 4 } else { c });
    let g1 = sim.simulate_circuit(&emit_bit_query(&parse_expr("x1", 1).map_err(e)?, 1).map_err(e)?).map_err(e)?;
    let g2 = sim.simulate_circuit(&emit_bit_query(&parse_expr("x1 & x2", 2).map_err(e)?, 2).map_err(e)?).map_err(e)?;
    let (d1, d2) = (g1.max_diff(&cnot), g2.max_diff(&toffoli));
    ensure(d1 <= 1e-12, || format!("x1 is not CNOT (residual {d1:e})"))?;
    ensure(d2 <= 1e-12, || format!("AND2 is not Toffoli (residual {d2:e})"))?;
    ensure(cnot.get(3, 1) == one && toffoli.get(7, 3) == one, || "reference layout".into())?;
    Ok(format!("{tested} functions, max residual {worst:e}; CNOT {d1:e}, Toffoli {d2:e}"))
}

fn ac11() -> Outcome {
    let sim = OracleSim::default();
    let c = corpus();
    let mut worst: f64 = 0.0;
    let mut tested = 0;
    for f in c.functions.iter().filter(|f| f.n <= 5) {
        let report = sim.verify_kickback_suite(&f.expr, f.n).map_err(e)?;
        if let Some(bad) = report.checks.iter().find(|c| !c.pass) {
            return Err(format!("{}: {} residual {:e}", f.name, bad.name, bad.residual));
        }
        worst = worst.max(report.max_residual());
        tested += 1;
    }
    Ok(format!("{tested} functions x 4 checks (2 angles), max residual {worst:e}"))
}

fn ac12() -> Outcome {
    let mut total_ground = 0;
    for (n, f) in random_exprs(12, 20, 5) {
        let hg = ground_state_logic(&f, n).map_err(e)?;
        let spec = diagonal_spectrum(&hg).map_err(e)?;
        let mut zeros = Vec::new();
        for x in 0..1u64 << (n + 1) {
            let v = brute_value(&hg, x);
            let on_graph = ((x >> n) & 1 == 1) == f.eval(x & ((1 << n) - 1));
            if on_graph {
                ensure(v.abs() <= TOL, || format!("{f}: |{x}> has eigenvalue {v}"))?;
                zeros.push(x);
            } else {
                ensure((v - 1.0).abs() <= TOL, || format!("{f}: off-graph |{x}> has eigenvalue {v}"))?;
            }
        }
        ensure(zeros.len() == 1 << n, || format!("{f}: {} ground states", zeros.len()))?;
        ensure(spec.argmin(TOL) == zeros, || format!("{f}: spectrum ground states differ"))?;
        total_ground += zeros.len();
    }
    Ok(format!("20 functions, {total_ground} ground states, exactly the input-output pairs"))
}

fn ac13() -> Outcome {
    let mut r = corpus::rng(13);
    let mut min_gap = f64::INFINITY;
    for _ in 0..20 {
        let n = r.random_range(2..=8);
        let spec = corpus::random_penalty_spec(&mut r, n);
        let hp = augment_penalties(&spec).map_err(e)?;
        let (mut feasible_max, mut infeasible_min) = (f64::NEG_INFINITY, f64::INFINITY);
        for x in 0..1u64 << n {
            let v = brute_value(&hp, x);
            if spec.penalties.iter().any(|(_, g)| g.eval(x)) {
                infeasible_min = infeasible_min.min(v);
            } else {
                feasible_max = feasible_max.max(v);
            }
        }
        ensure(infeasible_min > feasible_max, || {
            format!("infeasible min {infeasible_min} <= feasible max {feasible_max}")
        })?;
        min_gap = min_gap.min(infeasible_min - feasible_max);
    }
    Ok(format!("20 instances, smallest separation {min_gap}"))
}

fn ac14() -> Outcome {
    let sim = OracleSim::default();
    let mut worst: f64 = 0.0;
    for n in 1..=6 {
        let a: Vec<DenseOperator> = (1..=n)
            .map(|j| sim.dense_of_pauli(&jordan_wigner(n, j, Ladder::Lowering).unwrap()).unwrap())
            .collect();
        let ad: Vec<DenseOperator> = (1..=n)
            .map(|j| sim.dense_of_pauli(&jordan_wigner(n, j, Ladder::Raising).unwrap()).unwrap())
            .collect();
        let anti = |x: &DenseOperator, y: &DenseOperator| x.matmul(y).unwrap().add(&y.matmul(x).unwrap()).unwrap();
        let id = DenseOperator::identity(n);
        let zeros = DenseOperator::zeros(n);
        for j in 0..n {
            // adjoint relation between the two operators
            worst = worst.max(ad[j].max_diff(&a[j].adjoint()));
            for k in 0..n {
                worst = worst.max(anti(&a[j], &a[k]).max_diff(&zeros));
                worst = worst.max(anti(&ad[j], &ad[k]).max_diff(&zeros));
                let want = if j == k { &id } else { &zeros };
                worst = worst.max(anti(&a[j], &ad[k]).max_diff(want));
            }
        }
        ensure(worst <= 1e-12, || format!("n={n}: CAR residual {worst:e}"))?;

        for j in 1..=n {
            let number = spin_raising(n, j).unwrap().mul(&spin_lowering(n, j).unwrap()).unwrap();
            let zj = PauliOperator::single(n, j, Pauli::Z, Complex64::new(1.0, 0.0)).unwrap();
            let want = PauliOperator::identity(n).unwrap().sub(&zj).unwrap().scale(Complex64::new(0.5, 0.0));
            let d = number.max_coeff_diff(&want);
            ensure(d == 0.0, || format!("n={n} j={j}: b^dag b differs by {d:e}"))?;
        }
    }
    Ok(format!("n=1..6, max CAR residual {worst:e}; number operators exact"))
}

fn ac15() -> Outcome {
    let approx = zpoly(2, &[(&[], 1.0 / 3.0), (&[1], -1.0 / 6.0), (&[2], -1.0 / 6.0)]);
    let and = parse_expr("x1 & x2", 2).map_err(e)?;
    let r_and = check_approx(&approx, &and).map_err(e)?;
    ensure(r_and.ok && (r_and.max_error - 1.0 / 3.0).abs() <= 1e-15, || format!("AND: {r_and}"))?;
    let or = parse_expr("x1 | x2", 2).map_err(e)?;
    let r_or = check_approx(&approx, &or).map_err(e)?;
    let golden = "max_error=0.666666666667 worst_x=10 bound=0.333333333333 result=FAIL";
    ensure(!r_or.ok && (r_or.max_error - 2.0 / 3.0).abs() <= 1e-15, || format!("OR: {r_or}"))?;
    ensure(r_or.to_string() == golden, || format!("OR report text: {r_or}"))?;
    Ok(format!("AND: {r_and} | printed OR: {r_or}"))
}

fn ac16() -> Outcome {
    let mut r = corpus::rng(16);
    let mut summary = Vec::new();
    for _ in 0..10 {
        let n = r.random_range(2..=10);
        let m = r.random_range(n..=3 * n);
        let clauses = corpus::random_max2sat(&mut r, n, m);
        let obj = PseudoBooleanObjective::new(
            n,
            clauses
                .iter()
                .map(|c| (1.0, BoolExpr::or(c.iter().map(|l| BoolExpr::literal(*l)).collect())))
                .collect(),
        )
        .map_err(e)?;
        let h = compile_pseudo(&obj, n).map_err(e)?.scale(-1.0);
        ensure(h.degree() <= 2, || format!("degree {}", h.degree()))?;
        let ground = diagonal_spectrum(&h).map_err(e)?.min();
        let best = (0..1u64 << n)
            .map(|x| clauses.iter().filter(|c| clause_sat(c, x)).count())
            .max()
            .unwrap();
        ensure(ground == -(best as f64), || format!("ground energy {ground}, optimum {best}"))?;
        summary.push(format!("{best}/{m}"));
    }
    Ok(format!("10 instances, optima {}", summary.join(" ")))
}

fn main() -> ExitCode {
    let criteria: Vec<(&str, &str, Option<Duration>, fn() -> Outcome)> = vec![
        ("AC-1", "basic clause Hamiltonians", Some(Duration::from_secs(1)), ac1),
        ("AC-2", "three-bit function Hamiltonians", Some(Duration::from_secs(1)), ac2),
        ("AC-3", "Fourier identities", Some(Duration::from_secs(30)), ac3),
        ("AC-4", "compiler and transform agree", None, ac4),
        ("AC-5", "model counting", None, ac5),
        ("AC-6", "QUBO closed form and gate counts", None, ac6),
        ("AC-7", "evolution circuits", Some(Duration::from_secs(60)), ac7),
        ("AC-8", "phase query", None, ac8),
        ("AC-9", "controlled evolution", None, ac9),
        ("AC-10", "bit query", None, ac10),
        ("AC-11", "kickback equivalences", None, ac11),
        ("AC-12", "ground-state logic", None, ac12),
        ("AC-13", "penalty separation", None, ac13),
        ("AC-14", "Jordan-Wigner anticommutation", None, ac14),
        ("AC-15", "max-norm approximation check", None, ac15),
        ("AC-16", "MAX-2-SAT ground energy", None, ac16),
    ];
    let mut failed = 0;
    for (id, title, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(_), Some(l)) if elapsed > l => Err(format!("took {elapsed:?}, limit {l:?}")),
            (o, _) => o,
        };
        match outcome {
            Ok(detail) => println!("[PASS] {id} {title}: {detail} ({} ms)", elapsed.as_millis()),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {id} {title}: {why} ({} ms)", elapsed.as_millis());
            }
        }
    }
    println!("{} of 16 criteria passed", 16 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
