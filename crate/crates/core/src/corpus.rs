//! Named Boolean functions and seeded random instances.

use num_complex::Complex64;
use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::compiler::{compile_pseudo, PenaltySpec, QuboInstance};
use crate::expr::{parse_expr, BoolExpr, PseudoBooleanObjective};
use crate::pauli::{PauliOperator, PauliString};
use crate::zham::{DiagonalHamiltonian, ZTermKey};

pub const DEFAULT_SEED: u64 = 0x5eed_b001;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, PartialEq)]
pub struct NamedFunction {
    pub name: String,
    pub n: usize,
    pub expr: BoolExpr,
}

fn named(name: &str, n: usize, text: &str) -> NamedFunction {
    NamedFunction {
        name: name.to_string(),
        n,
        expr: parse_expr(text, n).expect("bundled expression parses"),
    }
}

/// Basic clauses; the k-ary ones use `k` variables.
pub fn basic_clauses(k: usize) -> Vec<NamedFunction> {
    let vars: Vec<String> = (1..=k).map(|j| format!("x{j}")).collect();
    vec![
        named("x", 1, "x1"),
        named("not x", 1, "!x1"),
        named("xor2", 2, "x1 ^ x2"),
        named(&format!("xor{k}"), k, &vars.join(" ^ ")),
        named("and2", 2, "x1 & x2"),
        named(&format!("and{k}"), k, &vars.join(" & ")),
        named("or2", 2, "x1 | x2"),
        named(&format!("or{k}"), k, &vars.join(" | ")),
        named("nand2", 2, "!(x1 & x2)"),
        named("implies", 2, "x1 => x2"),
    ]
}

/// Majority, not-all-equal, sum divisible by three, and exactly-one.
pub fn three_bit_functions() -> Vec<NamedFunction> {
    vec![
        named("maj", 3, "(x1 & x2) | (x1 & x3) | (x2 & x3)"),
        named("nae", 3, "(x1 | x2 | x3) & !(x1 & x2 & x3)"),
        named("mod3", 3, "(!x1 & !x2 & !x3) | (x1 & x2 & x3)"),
        named("1in3", 3, "(x1 & !x2 & !x3) | (!x1 & x2 & !x3) | (!x1 & !x2 & x3)"),
    ]
}

pub fn bundled_functions() -> Vec<NamedFunction> {
    let mut v = basic_clauses(3);
    v.extend(three_bit_functions());
    v
}

/// Random formula over `x1..xn` with nesting at most `depth`.
pub fn random_expr<R: Rng>(rng: &mut R, n: usize, depth: usize) -> BoolExpr {
    if depth == 0 || rng.random_bool(0.25) {
        return if rng.random_bool(0.03) {
            BoolExpr::Const(rng.random_bool(0.5))
        } else {
            BoolExpr::Var(rng.random_range(1..=n))
        };
    }
    let kids = |rng: &mut R| {
        let k = rng.random_range(2..=3);
        (0..k).map(|_| random_expr(rng, n, depth - 1)).collect::<Vec<_>>()
    };
    match rng.random_range(0..5) {
        0 => BoolExpr::not(random_expr(rng, n, depth - 1)),
        1 => BoolExpr::and(kids(rng)),
        2 => BoolExpr::or(kids(rng)),
        3 => BoolExpr::xor(kids(rng)),
        _ => BoolExpr::implies(random_expr(rng, n, depth - 1), random_expr(rng, n, depth - 1)),
    }
}

/// `m` clauses of width `1..=max_width` over distinct variables.
pub fn random_cnf<R: Rng>(rng: &mut R, n: usize, m: usize, max_width: usize) -> Vec<Vec<i64>> {
    (0..m)
        .map(|_| {
            let w = rng.random_range(1..=max_width.min(n));
            random_clause(rng, n, w)
        })
        .collect()
}

fn random_clause<R: Rng>(rng: &mut R, n: usize, width: usize) -> Vec<i64> {
    sample(rng, n, width)
        .into_iter()
        .map(|v| {
            let lit = v as i64 + 1;
            if rng.random_bool(0.5) {
                -lit
            } else {
                lit
            }
        })
        .collect()
}

/// `m` two-literal clauses on distinct variables.
pub fn random_max2sat<R: Rng>(rng: &mut R, n: usize, m: usize) -> Vec<Vec<i64>> {
    (0..m).map(|_| random_clause(rng, n, 2)).collect()
}

pub fn cnf_expr(clauses: &[Vec<i64>]) -> BoolExpr {
    BoolExpr::and(
        clauses
            .iter()
            .map(|c| BoolExpr::or(c.iter().map(|l| BoolExpr::literal(*l)).collect()))
            .collect(),
    )
}

fn weight<R: Rng>(rng: &mut R, scale: f64) -> f64 {
    // quarter-integers keep coefficients exactly representable
    (rng.random_range(-4 * scale as i64..=4 * scale as i64) as f64) / 4.0
}

pub fn random_qubo<R: Rng>(rng: &mut R, n: usize) -> QuboInstance {
    let linear: Vec<f64> = (0..n).map(|_| weight(rng, 2.0)).collect();
    let mut couplings = Vec::new();
    for j in 1..=n {
        for k in j + 1..=n {
            if rng.random_bool(0.6) {
                couplings.push((j, k, weight(rng, 2.0)));
            }
        }
    }
    QuboInstance::from_couplings(n, weight(rng, 1.0), linear, &couplings).expect("valid QUBO")
}

/// Up to `size` distinct terms with nonzero real weights.
pub fn random_hamiltonian<R: Rng>(rng: &mut R, n: usize, size: usize) -> DiagonalHamiltonian {
    let total = 1usize << n;
    let masks = sample(rng, total, size.min(total));
    DiagonalHamiltonian::from_terms(
        n,
        masks.into_iter().map(|m| {
            let w = rng.random_range(0.1..2.0) * if rng.random_bool(0.5) { -1.0 } else { 1.0 };
            (ZTermKey::new(m as u64), w)
        }),
    )
    .expect("valid Hamiltonian")
}

pub fn random_pauli_operator<R: Rng>(rng: &mut R, n: usize, size: usize) -> PauliOperator {
    let mut op = PauliOperator::zero(n).expect("valid width");
    let span = 1u64 << n;
    for _ in 0..size {
        let s = PauliString::from_masks(n, rng.random_range(0..span), rng.random_range(0..span), 0)
            .expect("masks in range");
        let c = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        op = op
            .add(&PauliOperator::from_string(&s, c).expect("same width"))
            .expect("same width");
    }
    op
}

/// Objective plus one or two violation predicates whose feasible set (no
/// predicate true) is nonempty and proper.
pub fn random_penalty_spec<R: Rng>(rng: &mut R, n: usize) -> PenaltySpec {
    loop {
        let clauses: Vec<(f64, BoolExpr)> = (0..rng.random_range(1..=3))
            .map(|_| (weight(rng, 2.0), random_expr(rng, n, 2)))
            .collect();
        let violations: Vec<BoolExpr> = (0..rng.random_range(1..=2))
            .map(|_| random_expr(rng, n, 2))
            .collect();
        let feasible = (0..1u64 << n)
            .filter(|x| violations.iter().all(|g| !g.eval(*x)))
            .count();
        if feasible == 0 || feasible == 1 << n {
            continue;
        }
        let obj = PseudoBooleanObjective::new(n, clauses).expect("vars in range");
        let objective = compile_pseudo(&obj, n).expect("small objective compiles");
        return PenaltySpec::with_auto_weights(objective, violations);
    }
}

/// Bundled functions plus random formulas and QUBOs.
#[derive(Debug, Clone)]
pub struct Corpus {
    pub functions: Vec<NamedFunction>,
    pub qubos: Vec<QuboInstance>,
}

impl Corpus {
    pub fn standard(seed: u64, n_random_exprs: usize, n_qubos: usize) -> Self {
        let mut r = rng(seed);
        let mut functions = bundled_functions();
        for i in 0..n_random_exprs {
            let n = r.random_range(1..=5);
            functions.push(NamedFunction {
                name: format!("random{i}"),
                n,
                expr: random_expr(&mut r, n, 3),
            });
        }
        let qubos = (0..n_qubos)
            .map(|_| {
                let n = r.random_range(1..=5);
                random_qubo(&mut r, n)
            })
            .collect();
        Self { functions, qubos }
    }
}
