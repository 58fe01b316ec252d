use std::fs;
use std::io::{self, Read, Write};
use std::process::ExitCode;

use boolham::corpus::{Corpus, DEFAULT_SEED};
use boolham::fourier::{table_from_fourier, TruthTable};
use boolham::numfmt::format_sig;
use boolham::verify::{verify_corpus, verify_function, verify_qubo, VerifyReport};
use boolham::zham::{PRUNE_EPS, TEXT_DIGITS};
use boolham::{
    augment_penalties, compile, compile_pseudo, compile_qubo, count_models, emit_evolution, emit_qubo_evolution,
    fourier_from_table, ground_state_logic, jordan_wigner, parse_dimacs, BoolExpr, DiagonalHamiltonian,
    Error, Ladder, OracleSim, PenaltySpec, QuboInstance,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Parser, Debug)]
#[command(name = "boolham", version, about = "Compile Boolean functions to Pauli-Z Hamiltonians and circuits")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Largest register for dense verification (at most 14)
    #[arg(long, global = true, default_value_t = boolham::dense::DEFAULT_DENSE_CAP)]
    dense_cap: usize,

    /// Drop output coefficients with magnitude at or below this value
    #[arg(long, global = true, default_value_t = PRUNE_EPS)]
    prune_eps: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Circuit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Conjunction of all clauses
    Sat,
    /// Weighted sum of satisfied clauses
    Maxsat,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct Source {
    /// Inline expression, e.g. "x1 | !x2"
    #[arg(short = 'e', long = "expr")]
    expr: Option<String>,
    /// DIMACS CNF or WCNF file ('-' for standard input)
    #[arg(long)]
    dimacs: Option<String>,
    /// QUBO JSON file ('-' for standard input)
    #[arg(long)]
    qubo: Option<String>,
}

#[derive(Args, Debug)]
struct InputArgs {
    #[command(flatten)]
    source: Source,
    /// Number of variables (defaults to the largest index used)
    #[arg(short = 'n', long = "vars")]
    n: Option<usize>,
    /// Reading of a DIMACS file
    #[arg(long, value_enum)]
    mode: Option<Mode>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compile an expression, DIMACS file or QUBO to a Hamiltonian
    Compile {
        #[command(flatten)]
        input: InputArgs,
        /// Evolution angle when writing a circuit
        #[arg(long, allow_hyphen_values = true)]
        gamma: Option<f64>,
    },
    /// Convert a truth table to Fourier coefficients, or a Hamiltonian back to a table
    Fourier {
        /// Table as a bit string, character k holding f at index k
        #[arg(long, conflicts_with_all = ["table_json", "hamiltonian"])]
        table: Option<String>,
        /// File holding a JSON array of table values
        #[arg(long, conflicts_with = "hamiltonian")]
        table_json: Option<String>,
        /// Hamiltonian JSON file to evaluate on every basis state
        #[arg(long)]
        hamiltonian: Option<String>,
    },
    /// Emit the circuit for exp(-i gamma H)
    Circuit {
        /// Inline expression
        #[arg(short = 'e', long = "expr", conflicts_with = "hamiltonian")]
        expr: Option<String>,
        /// Number of variables for an inline expression
        #[arg(short = 'n', long = "vars")]
        n: Option<usize>,
        /// Hamiltonian JSON file
        #[arg(long)]
        hamiltonian: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        gamma: f64,
        /// Rewrite controlled rotations into CNOT and RZ
        #[arg(long)]
        lower: bool,
    },
    /// Compile a QUBO and emit its evolution circuit
    Qubo {
        /// QUBO JSON file
        path: String,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        t: f64,
    },
    /// Count satisfying assignments from the constant coefficient
    Count {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Hamiltonian whose ground states are the input-output pairs of f
    Gslogic {
        #[arg(short = 'e', long = "expr")]
        expr: String,
        #[arg(short = 'n', long = "vars")]
        n: Option<usize>,
    },
    /// Objective plus weighted constraint penalties from a JSON spec
    Penalize {
        /// Penalty spec JSON file
        path: String,
    },
    /// Jordan-Wigner annihilation and creation operators
    Jw {
        #[arg(short = 'n', long = "modes")]
        n: usize,
    },
    /// Run the invariant suite on an input, or on the bundled corpus
    Verify {
        #[arg(short = 'e', long = "expr", conflicts_with_all = ["dimacs", "qubo"])]
        expr: Option<String>,
        #[arg(long, conflicts_with = "qubo")]
        dimacs: Option<String>,
        #[arg(long)]
        qubo: Option<String>,
        #[arg(short = 'n', long = "vars")]
        n: Option<usize>,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        /// Random expressions added to the bundled corpus
        #[arg(long, default_value_t = 50)]
        random_exprs: usize,
        /// Random QUBOs added to the bundled corpus
        #[arg(long, default_value_t = 20)]
        random_qubos: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

enum Failure {
    Parse(String),
    Cap(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_cap_exceeded() {
            Failure::Cap(e.to_string())
        } else {
            Failure::Parse(e.to_string())
        }
    }
}

macro_rules! impl_from_lib {
    ($($t:ty),*) => {
        $(impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Error::from(e).into()
            }
        })*
    };
}

impl_from_lib!(
    boolham::ExprError,
    boolham::DimacsError,
    boolham::HamiltonianError,
    boolham::CompileError,
    boolham::FourierError,
    boolham::CircuitError,
    boolham::DenseError
);

type Run = Result<String, Failure>;

fn read_input(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Parse(format!("standard input: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{path}: {e}")))
    }
}

fn finite(name: &str, v: f64) -> Result<f64, Failure> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Failure::Parse(format!("{name} must be finite")))
    }
}

fn parse_expr_arg(text: &str, n: Option<usize>) -> Result<(BoolExpr, usize), Failure> {
    let e = BoolExpr::parse(text, usize::MAX)?;
    let n = n.unwrap_or_else(|| e.max_var());
    e.check_vars(n)?;
    Ok((e, n))
}

fn dimacs_mode(mode: Option<Mode>) -> Result<Mode, Failure> {
    mode.ok_or_else(|| Failure::Parse("DIMACS input requires --mode sat or --mode maxsat".into()))
}

fn load_hamiltonian(input: &InputArgs) -> Result<DiagonalHamiltonian, Failure> {
    let src = &input.source;
    if let Some(text) = &src.expr {
        let (e, n) = parse_expr_arg(text, input.n)?;
        return Ok(compile(&e, n)?);
    }
    if let Some(path) = &src.dimacs {
        let mode = dimacs_mode(input.mode)?;
        let inst = parse_dimacs(&read_input(path)?)?;
        let n = input.n.unwrap_or(inst.n_vars());
        return Ok(match mode {
            Mode::Sat => compile(&inst.conjunction, n)?,
            Mode::Maxsat => compile_pseudo(&inst.objective, n)?,
        });
    }
    let path = src.qubo.as_deref().expect("one source is required");
    Ok(compile_qubo(&QuboInstance::from_json(&read_input(path)?)?)?)
}

fn load_hamiltonian_json(path: &str) -> Result<DiagonalHamiltonian, Failure> {
    Ok(DiagonalHamiltonian::from_json(&read_input(path)?)?)
}

fn render_hamiltonian(h: &DiagonalHamiltonian, format: Format, gamma: Option<f64>) -> Run {
    match format {
        Format::Text => Ok(h.to_text()),
        Format::Json => Ok(h.to_json()),
        Format::Circuit => {
            let gamma = gamma.ok_or_else(|| Failure::Parse("--format circuit requires --gamma".into()))?;
            Ok(emit_evolution(h, finite("gamma", gamma)?).to_text().trim_end().to_string())
        }
    }
}

fn table_text(t: &TruthTable) -> String {
    t.values()
        .iter()
        .map(|v| format_sig(*v, TEXT_DIGITS))
        .collect::<Vec<_>>()
        .join(" ")
}

fn report_result(report: VerifyReport) -> Run {
    let text = report.to_string();
    if report.passed() {
        Ok(text)
    } else {
        Err(Failure::Verification(text))
    }
}

fn run(cli: Cli) -> Run {
    let sim = OracleSim::new(cli.dense_cap)?;
    let eps = cli.prune_eps;
    if !(eps >= 0.0 && eps.is_finite()) {
        return Err(Failure::Parse("--prune-eps must be a finite nonnegative number".into()));
    }
    let format = cli.format;
    let text_or_json = |h: DiagonalHamiltonian, gamma: Option<f64>| {
        render_hamiltonian(&h.pruned(eps), format.unwrap_or(Format::Text), gamma)
    };

    match cli.command {
        Command::Compile { input, gamma } => text_or_json(load_hamiltonian(&input)?, gamma),
        Command::Fourier { table, table_json, hamiltonian } => {
            if let Some(path) = hamiltonian {
                let t = table_from_fourier(&load_hamiltonian_json(&path)?)?;
                return match format.unwrap_or(Format::Text) {
                    Format::Json => Ok(json!(t.values()).to_string()),
                    _ => Ok(table_text(&t)),
                };
            }
            let t = match (table, table_json) {
                (Some(bits), _) => TruthTable::from_bit_string(&bits)?,
                (None, Some(path)) => TruthTable::from_json(&read_input(&path)?)?,
                (None, None) => {
                    return Err(Failure::Parse("one of --table, --table-json or --hamiltonian is required".into()))
                }
            };
            text_or_json(fourier_from_table(&t)?, None)
        }
        Command::Circuit { expr, n, hamiltonian, gamma, lower } => {
            let gamma = finite("gamma", gamma)?;
            let h = match (expr, hamiltonian) {
                (Some(text), _) => {
                    let (e, n) = parse_expr_arg(&text, n)?;
                    compile(&e, n)?
                }
                (None, Some(path)) => load_hamiltonian_json(&path)?,
                (None, None) => return Err(Failure::Parse("one of --expr or --hamiltonian is required".into())),
            };
            let c = emit_evolution(&h.pruned(eps), gamma);
            let c = if lower { c.lowered() } else { c };
            Ok(c.to_text().trim_end().to_string())
        }
        Command::Qubo { path, t } => {
            let t = finite("t", t)?;
            let q = QuboInstance::from_json(&read_input(&path)?)?;
            let h = compile_qubo(&q)?.pruned(eps);
            let qc = emit_qubo_evolution(&q, t)?;
            match format.unwrap_or(Format::Text) {
                Format::Json => Ok(json!({
                    "hamiltonian": serde_json::from_str::<serde_json::Value>(&h.to_json()).expect("valid json"),
                    "circuit": qc.circuit.to_text(),
                    "rz": qc.rz_singles,
                    "rzz": qc.rzz_blocks,
                })
                .to_string()),
                Format::Circuit => Ok(qc.circuit.to_text().trim_end().to_string()),
                Format::Text => Ok(format!(
                    "hamiltonian {}\nrz {} rzz {} (bounds {} and {})\n{}",
                    h,
                    qc.rz_singles,
                    qc.rzz_blocks,
                    q.n_vars(),
                    q.n_vars() * q.n_vars().saturating_sub(1) / 2,
                    qc.circuit.to_text().trim_end()
                )),
            }
        }
        Command::Count { input } => {
            if input.source.qubo.is_some() {
                return Err(Failure::Parse("count takes an expression or a DIMACS file".into()));
            }
            if input.source.dimacs.is_some() && input.mode == Some(Mode::Maxsat) {
                return Err(Failure::Parse("count uses the conjunction; pass --mode sat".into()));
            }
            let input = InputArgs { mode: Some(Mode::Sat), ..input };
            let count = count_models(&load_hamiltonian(&input)?)?;
            match format {
                Some(Format::Json) => Ok(json!({ "models": count }).to_string()),
                _ => Ok(count.to_string()),
            }
        }
        Command::Gslogic { expr, n } => {
            let (e, n) = parse_expr_arg(&expr, n)?;
            text_or_json(ground_state_logic(&e, n)?, None)
        }
        Command::Penalize { path } => {
            let spec = PenaltySpec::from_json(&read_input(&path)?)?;
            text_or_json(augment_penalties(&spec)?, None)
        }
        Command::Jw { n } => {
            let mut lines = Vec::new();
            let mut docs = Vec::new();
            for j in 1..=n {
                let a = jordan_wigner(n, j, Ladder::Lowering)?;
                let ad = jordan_wigner(n, j, Ladder::Raising)?;
                lines.push(format!("a{j} = {a}"));
                lines.push(format!("a{j}^dag = {ad}"));
                docs.push(json!({
                    "mode": j,
                    "annihilation": serde_json::from_str::<serde_json::Value>(&a.to_json()).expect("valid json"),
                    "creation": serde_json::from_str::<serde_json::Value>(&ad.to_json()).expect("valid json"),
                }));
            }
            match format {
                Some(Format::Json) => Ok(serde_json::Value::Array(docs).to_string()),
                _ => Ok(lines.join("\n")),
            }
        }
        Command::Verify { expr, dimacs, qubo, n, mode, random_exprs, random_qubos, seed } => {
            let report = if let Some(text) = expr {
                let (e, n) = parse_expr_arg(&text, n)?;
                sim.check(n)?;
                verify_function(&sim, "input", &e, n)?
            } else if let Some(path) = dimacs {
                let inst = parse_dimacs(&read_input(&path)?)?;
                let n = n.unwrap_or(inst.n_vars());
                sim.check(n)?;
                match dimacs_mode(mode)? {
                    Mode::Sat => verify_function(&sim, "input", &inst.conjunction, n)?,
                    Mode::Maxsat => {
                        return Err(Failure::Parse(
                            "verify checks Boolean functions; use --mode sat for DIMACS input".into(),
                        ))
                    }
                }
            } else if let Some(path) = qubo {
                let q = QuboInstance::from_json(&read_input(&path)?)?;
                sim.check(q.n_vars())?;
                verify_qubo(&sim, "input", &q)?
            } else {
                verify_corpus(&sim, &Corpus::standard(seed, random_exprs, random_qubos))?
            };
            report_result(report)
        }
    }
}

fn emit(text: &str) {
    let mut out = io::stdout().lock();
    let _ = writeln!(out, "{text}").and_then(|_| out.flush());
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(out) => {
            emit(&out);
            ExitCode::SUCCESS
        }
        Err(Failure::Parse(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Cap(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Verification(report)) => {
            emit(&report.to_string());
            eprintln!("error: verification failed");
            ExitCode::from(3)
        }
    }
}
