//! Circuit files, run reports and the command implementations behind the
//! `qubitkit` binary.
//!
//! # Circuit grammar
//!
//! Line oriented, whitespace separated, `#` comments to end of line. The
//! first significant line must be the header `qubits <n>`. After it, each
//! line is one statement:
//!
//! ```text
//! qubits 2            # header, required first
//! h 0                 # <mnemonic> <qubit indices...> [<params...>]
//! cnot 0 1
//! rz 1 1.5707963267948966
//! cu 0 1 0.785398     # controlled relative-phase gate P(phi)
//! oracle 0110 0 1 2   # XOR oracle from a truth table (indices optional,
//!                     # defaulting to wires 0..k)
//! measure 0 1         # mark qubits for readout; no mid-circuit collapse
//! ```
//!
//! Gate mnemonics: `x y z h s t` (no parameter), `p rx ry rz` (one real),
//! `rl` (one integer l ≥ 1), `cnot cz swap` (two indices), `cu` (two
//! indices, one real), `cswap ccnot` (three indices). Controlled gates list
//! the control first. Reals are plain decimal floating point — there is no
//! expression syntax, so write `1.5707963267948966`, not `pi/2`.
//!
//! `measure` directives mark qubits for the sampling step; the simulator
//! always runs the whole gate list first and samples the final state, so
//! directive placement in the file does not matter.
//!
//! # Report formats
//!
//! JSON reports are emitted with a fixed key order
//! (`probabilities`, `histogram?`, `amplitudes?`, `result?`, `meta`) and
//! floats printed with 17 significant digits so parsing them back is exact.
//! `probabilities` is the exact distribution over the measured qubits (all
//! qubits when no `measure` directive appears); `amplitudes` (behind
//! `--amplitudes`) are `[re, im]` pairs over the full register. The CSV
//! form is one row per basis label: `label,bits,probability[,count]`.
//! Identical seeds give byte-identical reports; wall-clock time goes to
//! stderr only.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::algorithms::{self, BooleanOracle, OracleVerdict};
use crate::circuit::Circuit;
use crate::error::{Error, ParseError, ParseErrorKind, Result};
use crate::gates::{self, GateDef};
use crate::hamsim::{self, PauliSumHamiltonian};
use crate::linalg::{Complex, Pauli};
use crate::measure::{self, ShotConfig};
use crate::qec;
use crate::rng::SplitMix64;
use crate::state::{self, BlochAngles, StateVector};

/// A parsed circuit file: the qubit-count header plus its statements.
#[derive(Debug, Clone, PartialEq)]
pub struct CircuitFile {
    pub num_qubits: usize,
    pub statements: Vec<Statement>,
}

/// One statement with its source position (1-based line and column).
#[derive(Debug, Clone, PartialEq)]
pub struct Statement {
    pub line: usize,
    pub col: usize,
    pub kind: StatementKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StatementKind {
    /// A catalog gate bound to wires.
    Gate {
        mnemonic: String,
        targets: Vec<usize>,
        params: Vec<f64>,
    },
    /// XOR oracle from a truth table.
    Oracle { table: Vec<u8>, targets: Vec<usize> },
    /// Readout marker.
    Measure { targets: Vec<usize> },
}

impl CircuitFile {
    /// Position-independent equality: same header, same statement kinds.
    pub fn semantically_equal(&self, other: &CircuitFile) -> bool {
        self.num_qubits == other.num_qubits
            && self.statements.len() == other.statements.len()
            && self
                .statements
                .iter()
                .zip(&other.statements)
                .all(|(a, b)| a.kind == b.kind)
    }

    /// The executable circuit plus the measured-qubit list (file order).
    pub fn build(&self) -> Result<(Circuit, Vec<usize>)> {
        let mut circuit = Circuit::new(self.num_qubits);
        let mut measured: Vec<usize> = Vec::new();
        for statement in &self.statements {
            match &statement.kind {
                StatementKind::Gate {
                    mnemonic,
                    targets,
                    params,
                } => {
                    circuit.append(build_gate(mnemonic, params)?, targets.clone())?;
                }
                StatementKind::Oracle { table, targets } => {
                    let oracle = BooleanOracle::new(table.clone())?;
                    circuit.append(algorithms::oracle_unitary(&oracle), targets.clone())?;
                }
                StatementKind::Measure { targets } => {
                    for &t in targets {
                        if measured.contains(&t) {
                            return Err(Error::DuplicateTarget(t));
                        }
                        measured.push(t);
                    }
                }
            }
        }
        Ok((circuit, measured))
    }
}

/// Number of qubit-index arguments and parameters for each mnemonic.
fn gate_spec(mnemonic: &str) -> Option<(usize, usize)> {
    match mnemonic {
        "x" | "y" | "z" | "h" | "s" | "t" => Some((1, 0)),
        "p" | "rx" | "ry" | "rz" | "rl" => Some((1, 1)),
        "cnot" | "cz" | "swap" => Some((2, 0)),
        "cu" => Some((2, 1)),
        "cswap" | "ccnot" => Some((3, 0)),
        _ => None,
    }
}

/// Instantiate a catalog gate from its mnemonic and parsed parameters.
fn build_gate(mnemonic: &str, params: &[f64]) -> Result<GateDef> {
    match mnemonic {
        "x" => Ok(gates::pauli(Pauli::X)),
        "y" => Ok(gates::pauli(Pauli::Y)),
        "z" => Ok(gates::pauli(Pauli::Z)),
        "h" => Ok(gates::hadamard()),
        "s" => Ok(gates::s()),
        "t" => Ok(gates::t()),
        "p" => Ok(gates::phase(params[0])),
        "rl" => gates::r_l(params[0] as u32),
        "rx" => gates::rotation(Pauli::X, params[0]),
        "ry" => gates::rotation(Pauli::Y, params[0]),
        "rz" => gates::rotation(Pauli::Z, params[0]),
        "cu" => gates::controlled(&gates::phase(params[0]), 1),
        other => gates::named_gate(other),
    }
}

fn parse_error(line: usize, col: usize, kind: ParseErrorKind) -> Error {
    Error::Parse(ParseError { line, col, kind })
}

// Tokens of one line with their 1-based character columns, comments gone.
fn tokenize(raw: &str) -> Vec<(usize, String)> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    let mut start_col = 0usize;
    for (i, ch) in raw.chars().enumerate() {
        if ch == '#' {
            break;
        }
        if ch.is_whitespace() {
            if !current.is_empty() {
                tokens.push((start_col, std::mem::take(&mut current)));
            }
        } else {
            if current.is_empty() {
                start_col = i + 1;
            }
            current.push(ch);
        }
    }
    if !current.is_empty() {
        tokens.push((start_col, current));
    }
    tokens
}

fn parse_index(
    token: &(usize, String),
    line: usize,
    num_qubits: usize,
    seen: &[usize],
) -> Result<usize> {
    let (col, text) = token;
    let index: usize = text
        .parse()
        .map_err(|_| parse_error(line, *col, ParseErrorKind::MalformedNumber(text.clone())))?;
    if index >= num_qubits {
        return Err(parse_error(
            line,
            *col,
            ParseErrorKind::IndexOutOfRange { index, num_qubits },
        ));
    }
    if seen.contains(&index) {
        return Err(parse_error(
            line,
            *col,
            ParseErrorKind::DuplicateIndex(index),
        ));
    }
    Ok(index)
}

/// Parse circuit-file text. Every failure carries a line and column.
pub fn parse_circuit(text: &str) -> Result<CircuitFile> {
    let mut num_qubits: Option<usize> = None;
    let mut statements = Vec::new();

    for (line_idx, raw) in text.lines().enumerate() {
        let line = line_idx + 1;
        let tokens = tokenize(raw);
        let Some((first_col, mnemonic)) = tokens.first().cloned() else {
            continue;
        };

        let Some(n) = num_qubits else {
            if mnemonic != "qubits" {
                return Err(parse_error(line, first_col, ParseErrorKind::MissingHeader));
            }
            if tokens.len() != 2 {
                return Err(parse_error(
                    line,
                    first_col,
                    ParseErrorKind::Invalid("header must be exactly `qubits <n>`".into()),
                ));
            }
            let (col, text) = &tokens[1];
            let n: usize = text.parse().map_err(|_| {
                parse_error(line, *col, ParseErrorKind::MalformedNumber(text.clone()))
            })?;
            if n == 0 || n > 24 {
                return Err(parse_error(
                    line,
                    *col,
                    ParseErrorKind::Invalid(format!("qubit count {n} outside 1..=24")),
                ));
            }
            num_qubits = Some(n);
            continue;
        };

        let args = &tokens[1..];
        match mnemonic.as_str() {
            "qubits" => {
                return Err(parse_error(
                    line,
                    first_col,
                    ParseErrorKind::Invalid("duplicate `qubits` header".into()),
                ));
            }
            "measure" => {
                if args.is_empty() {
                    return Err(parse_error(
                        line,
                        first_col,
                        ParseErrorKind::Invalid("measure needs at least one index".into()),
                    ));
                }
                let mut targets = Vec::new();
                for token in args {
                    let index = parse_index(token, line, n, &targets)?;
                    targets.push(index);
                }
                statements.push(Statement {
                    line,
                    col: first_col,
                    kind: StatementKind::Measure { targets },
                });
            }
            "oracle" => {
                let Some((table_col, table_text)) = args.first() else {
                    return Err(parse_error(
                        line,
                        first_col,
                        ParseErrorKind::Invalid("oracle needs a truth table".into()),
                    ));
                };
                let table: Vec<u8> = table_text
                    .chars()
                    .map(|ch| match ch {
                        '0' => Ok(0u8),
                        '1' => Ok(1u8),
                        _ => Err(parse_error(
                            line,
                            *table_col,
                            ParseErrorKind::MalformedTable(table_text.clone()),
                        )),
                    })
                    .collect::<Result<_>>()?;
                if table.len() < 2 || !table.len().is_power_of_two() {
                    return Err(parse_error(
                        line,
                        *table_col,
                        ParseErrorKind::MalformedTable(table_text.clone()),
                    ));
                }
                let arity = table.len().trailing_zeros() as usize + 1;
                let mut targets = Vec::new();
                if args.len() == 1 {
                    // default wires 0..=k
                    if arity > n {
                        return Err(parse_error(
                            line,
                            *table_col,
                            ParseErrorKind::IndexOutOfRange {
                                index: arity - 1,
                                num_qubits: n,
                            },
                        ));
                    }
                    targets.extend(0..arity);
                } else {
                    if args.len() - 1 != arity {
                        return Err(parse_error(
                            line,
                            first_col,
                            ParseErrorKind::ArityMismatch {
                                mnemonic: "oracle".into(),
                                expected: arity,
                                got: args.len() - 1,
                            },
                        ));
                    }
                    for token in &args[1..] {
                        let index = parse_index(token, line, n, &targets)?;
                        targets.push(index);
                    }
                }
                statements.push(Statement {
                    line,
                    col: first_col,
                    kind: StatementKind::Oracle { table, targets },
                });
            }
            _ => {
                let Some((index_count, param_count)) = gate_spec(&mnemonic) else {
                    return Err(parse_error(
                        line,
                        first_col,
                        ParseErrorKind::UnknownMnemonic(mnemonic.clone()),
                    ));
                };
                if args.len() < index_count {
                    return Err(parse_error(
                        line,
                        first_col,
                        ParseErrorKind::ArityMismatch {
                            mnemonic: mnemonic.clone(),
                            expected: index_count,
                            got: args.len(),
                        },
                    ));
                }
                if args.len() != index_count + param_count {
                    return Err(parse_error(
                        line,
                        first_col,
                        ParseErrorKind::ParamCountMismatch {
                            mnemonic: mnemonic.clone(),
                            expected: param_count,
                            got: args.len() - index_count,
                        },
                    ));
                }
                let mut targets = Vec::new();
                for token in &args[..index_count] {
                    let index = parse_index(token, line, n, &targets)?;
                    targets.push(index);
                }
                let mut params = Vec::new();
                for (col, text) in &args[index_count..] {
                    let value: f64 = text.parse().map_err(|_| {
                        parse_error(line, *col, ParseErrorKind::MalformedNumber(text.clone()))
                    })?;
                    if !value.is_finite() {
                        return Err(parse_error(
                            line,
                            *col,
                            ParseErrorKind::MalformedNumber(text.clone()),
                        ));
                    }
                    params.push(value);
                }
                if mnemonic == "rl" {
                    let l = params[0];
                    if l.fract() != 0.0 || l < 1.0 || l > 62.0 {
                        let (col, text) = &args[index_count];
                        return Err(parse_error(
                            line,
                            *col,
                            ParseErrorKind::Invalid(format!(
                                "rl parameter must be an integer in 1..=62, got `{text}`"
                            )),
                        ));
                    }
                }
                statements.push(Statement {
                    line,
                    col: first_col,
                    kind: StatementKind::Gate {
                        mnemonic,
                        targets,
                        params,
                    },
                });
            }
        }
    }

    let Some(num_qubits) = num_qubits else {
        return Err(parse_error(1, 1, ParseErrorKind::MissingHeader));
    };
    Ok(CircuitFile {
        num_qubits,
        statements,
    })
}

/// Canonical text for a parsed file; `parse_circuit(unparse(f))` is
/// semantically identical to `f`. Reals print in Rust's shortest exact
/// round-trip form.
pub fn unparse(file: &CircuitFile) -> String {
    let mut out = format!("qubits {}\n", file.num_qubits);
    for statement in &file.statements {
        match &statement.kind {
            StatementKind::Gate {
                mnemonic,
                targets,
                params,
            } => {
                out.push_str(mnemonic);
                for t in targets {
                    let _ = write!(out, " {t}");
                }
                for p in params {
                    let _ = write!(out, " {p}");
                }
            }
            StatementKind::Oracle { table, targets } => {
                out.push_str("oracle ");
                for &b in table {
                    out.push(if b == 1 { '1' } else { '0' });
                }
                for t in targets {
                    let _ = write!(out, " {t}");
                }
            }
            StatementKind::Measure { targets } => {
                out.push_str("measure");
                for t in targets {
                    let _ = write!(out, " {t}");
                }
            }
        }
        out.push('\n');
    }
    out
}

/// One value in a report's `result` object.
#[derive(Debug, Clone, PartialEq)]
pub enum ReportValue {
    Int(i64),
    Float(f64),
    Text(String),
}

/// Everything a command run produces, ready for serialization.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    /// Exact distribution over the measured qubits.
    pub probabilities: Vec<f64>,
    /// Bit width of the labels behind `probabilities`.
    pub bit_width: usize,
    /// Sampled counts, when shots were requested.
    pub histogram: Option<BTreeMap<String, u64>>,
    /// Full-register amplitudes, when requested.
    pub amplitudes: Option<Vec<Complex>>,
    /// Algorithm-specific key/value results, in fixed order.
    pub result: Vec<(String, ReportValue)>,
    pub seed: u64,
    pub shots: Option<u64>,
    /// Wall-clock duration; reported on stderr only, never in the payload.
    pub wall_ms: f64,
}

impl RunReport {
    fn new(probabilities: Vec<f64>, bit_width: usize, seed: u64) -> Self {
        RunReport {
            probabilities,
            bit_width,
            histogram: None,
            amplitudes: None,
            result: Vec::new(),
            seed,
            shots: None,
            wall_ms: 0.0,
        }
    }
}

/// 17-significant-digit float form used in reports; parses back exactly.
fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn escape_json(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out
}

/// Render the report as schema-stable JSON.
pub fn to_json(report: &RunReport) -> String {
    let mut out = String::from("{\n  \"probabilities\": [");
    for (i, p) in report.probabilities.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push_str(&format_float(*p));
    }
    out.push(']');

    if let Some(histogram) = &report.histogram {
        out.push_str(",\n  \"histogram\": {");
        for (i, (bits, count)) in histogram.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            let _ = write!(out, "\"{}\": {count}", escape_json(bits));
        }
        out.push('}');
    }

    if let Some(amplitudes) = &report.amplitudes {
        out.push_str(",\n  \"amplitudes\": [");
        for (i, z) in amplitudes.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            let _ = write!(out, "[{}, {}]", format_float(z.re), format_float(z.im));
        }
        out.push(']');
    }

    if !report.result.is_empty() {
        out.push_str(",\n  \"result\": {");
        for (i, (key, value)) in report.result.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            let _ = write!(out, "\"{}\": ", escape_json(key));
            match value {
                ReportValue::Int(v) => {
                    let _ = write!(out, "{v}");
                }
                ReportValue::Float(v) => out.push_str(&format_float(*v)),
                ReportValue::Text(v) => {
                    let _ = write!(out, "\"{}\"", escape_json(v));
                }
            }
        }
        out.push('}');
    }

    let _ = write!(out, ",\n  \"meta\": {{\"seed\": {}", report.seed);
    if let Some(shots) = report.shots {
        let _ = write!(out, ", \"shots\": {shots}");
    }
    out.push_str("}\n}\n");
    out
}

/// Render the report as CSV: `label,bits,probability[,count]`.
pub fn to_csv(report: &RunReport) -> String {
    let with_counts = report.histogram.is_some();
    let mut out = String::from(if with_counts {
        "label,bits,probability,count\n"
    } else {
        "label,bits,probability\n"
    });
    for (label, p) in report.probabilities.iter().enumerate() {
        let bits: String = (0..report.bit_width)
            .map(|i| {
                if (label >> (report.bit_width - 1 - i)) & 1 == 1 {
                    '1'
                } else {
                    '0'
                }
            })
            .collect();
        let _ = write!(out, "{label},{bits},{}", format_float(*p));
        if let Some(histogram) = &report.histogram {
            let count = histogram.get(&bits).copied().unwrap_or(0);
            let _ = write!(out, ",{count}");
        }
        out.push('\n');
    }
    out
}

/// Options of the `simulate` command.
#[derive(Debug, Clone, Copy)]
pub struct SimulateOptions {
    pub shots: Option<u64>,
    pub seed: u64,
    pub amplitudes: bool,
}

/// Parse, run and report a circuit file.
pub fn cmd_simulate(text: &str, options: SimulateOptions) -> Result<RunReport> {
    let file = parse_circuit(text)?;
    let (circuit, measured) = file.build()?;
    let final_state = circuit.apply(&StateVector::zero(file.num_qubits))?;
    let measured: Vec<usize> = if measured.is_empty() {
        (0..file.num_qubits).collect()
    } else {
        measured
    };
    let probabilities = measure::joint_distribution(&final_state, &measured)?;
    let mut report = RunReport::new(probabilities, measured.len(), options.seed);
    if let Some(shots) = options.shots {
        report.histogram = Some(measure::sample(
            &final_state,
            &measured,
            ShotConfig::new(shots, options.seed)?,
        )?);
        report.shots = Some(shots);
    }
    if options.amplitudes {
        report.amplitudes = Some(final_state.amplitudes().to_vec());
    }
    Ok(report)
}

fn verdict_text(verdict: OracleVerdict) -> &'static str {
    match verdict {
        OracleVerdict::Constant => "constant",
        OracleVerdict::Balanced => "balanced",
    }
}

fn oracle_from_bits(bits: &str) -> Result<BooleanOracle> {
    let table: Vec<u8> = bits
        .chars()
        .map(|ch| match ch {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(Error::InvalidArgument(format!(
                "oracle table must be over {{0,1}}, got `{bits}`"
            ))),
        })
        .collect::<Result<_>>()?;
    BooleanOracle::new(table)
}

/// `run deutsch` / `run dj`: decide an oracle and report the upper-register
/// distribution behind the verdict. The verdict always comes from exact
/// branch probabilities; `shots` only adds a demonstration histogram.
pub fn run_deutsch_jozsa(oracle_bits: &str, shots: Option<u64>, seed: u64) -> Result<RunReport> {
    let oracle = oracle_from_bits(oracle_bits)?;
    let verdict = if oracle.input_bits() == 1 {
        algorithms::deutsch(&oracle)?
    } else {
        algorithms::deutsch_jozsa(&oracle)?
    };
    let n = oracle.input_bits();
    let out = algorithms::deutsch_jozsa_circuit(&oracle).apply(&StateVector::zero(n + 1))?;
    let upper: Vec<usize> = (0..n).collect();
    let probabilities = measure::joint_distribution(&out, &upper)?;
    let p_zero = probabilities[0];
    let mut report = RunReport::new(probabilities, n, seed);
    if let Some(shots) = shots {
        report.histogram = Some(measure::sample(
            &out,
            &upper,
            ShotConfig::new(shots, seed)?,
        )?);
        report.shots = Some(shots);
    }
    report.result = vec![
        ("verdict".into(), ReportValue::Text(verdict_text(verdict).into())),
        ("p_all_zero".into(), ReportValue::Float(p_zero)),
        ("queries".into(), ReportValue::Int(1)),
    ];
    Ok(report)
}

/// `run superdense`: encode two classical bits, decode, compare.
pub fn run_superdense(bits: &str, seed: u64) -> Result<RunReport> {
    let bits: Vec<u8> = bits
        .chars()
        .map(|ch| match ch {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(Error::InvalidArgument(format!(
                "expected two bits like `10`, got `{bits}`"
            ))),
        })
        .collect::<Result<_>>()?;
    if bits.len() != 2 {
        return Err(Error::InvalidArgument(format!(
            "expected exactly two bits, got {}",
            bits.len()
        )));
    }
    let (r1, r2) = algorithms::superdense(bits[0], bits[1])?;
    let mut probabilities = vec![0.0; 4];
    probabilities[((r1 as usize) << 1) | r2 as usize] = 1.0;
    let mut report = RunReport::new(probabilities, 2, seed);
    report.result = vec![
        ("sent".into(), ReportValue::Text(format!("{}{}", bits[0], bits[1]))),
        ("received".into(), ReportValue::Text(format!("{r1}{r2}"))),
    ];
    Ok(report)
}

/// `run teleport`: send one Bloch-parametrized qubit, sampling the
/// sender's measurement branch from the seed.
pub fn run_teleport(theta: f64, phi: f64, seed: u64) -> Result<RunReport> {
    let q = state::from_bloch(BlochAngles::new(theta, phi)?);
    let mut rng = SplitMix64::new(seed);
    let outcome = algorithms::teleport(&q, &mut rng)?;
    let fidelity = state::fidelity_mod_phase(&outcome.received, &q)?;
    let probabilities = measure::probabilities(&outcome.received);
    let mut report = RunReport::new(probabilities, 1, seed);
    report.result = vec![
        (
            "classical_bits".into(),
            ReportValue::Text(format!("{}{}", outcome.bits.0, outcome.bits.1)),
        ),
        ("fidelity".into(), ReportValue::Float(fidelity)),
    ];
    Ok(report)
}

/// `run swap-test` on two Bloch-parametrized qubits.
pub fn run_swap_test(t1: (f64, f64), t2: (f64, f64), seed: u64) -> Result<RunReport> {
    let a = state::from_bloch(BlochAngles::new(t1.0, t1.1)?);
    let b = state::from_bloch(BlochAngles::new(t2.0, t2.1)?);
    let (p0, p1) = algorithms::swap_test(&a, &b)?;
    let overlap = state::inner_product(&a, &b)?.norm_sqr();
    let mut report = RunReport::new(vec![p0, p1], 1, seed);
    report.result = vec![
        ("p0".into(), ReportValue::Float(p0)),
        ("p1".into(), ReportValue::Float(p1)),
        ("overlap_squared".into(), ReportValue::Float(overlap)),
    ];
    Ok(report)
}

/// `run qpe`: estimate the eigenphase of a diagonal gate on |1⟩.
pub fn run_qpe(
    gate: &str,
    phi: Option<f64>,
    ancillas: usize,
    shots: u64,
    seed: u64,
) -> Result<RunReport> {
    let u = match gate {
        "z" => gates::pauli(Pauli::Z),
        "s" => gates::s(),
        "t" => gates::t(),
        "p" => gates::phase(phi.ok_or_else(|| {
            Error::InvalidArgument("gate `p` needs --phi".into())
        })?),
        other => {
            return Err(Error::InvalidArgument(format!(
                "qpe gate must be one of z, s, t, p; got `{other}`"
            )))
        }
    };
    let eigenstate = state::basis_state(1, 1)?;
    let theta = algorithms::phase_estimate(&u, &eigenstate, ancillas, shots, seed)?;
    let pre = algorithms::phase_estimation_state(&u, &eigenstate, ancillas)?;
    let ancilla_wires: Vec<usize> = (0..ancillas).collect();
    let probabilities = measure::joint_distribution(&pre, &ancilla_wires)?;
    let histogram = measure::sample(&pre, &ancilla_wires, ShotConfig::new(shots, seed)?)?;
    let mut report = RunReport::new(probabilities, ancillas, seed);
    report.histogram = Some(histogram);
    report.shots = Some(shots);
    report.result = vec![("theta_estimate".into(), ReportValue::Float(theta))];
    Ok(report)
}

/// `run shor15`: period finding for N = 15. `condition_branch` picks the
/// residue cycle through a particular x instead of sampling the
/// lower-register measurement.
pub fn run_shor15(a: u64, condition_branch: Option<u64>, seed: u64) -> Result<RunReport> {
    let residue = match condition_branch {
        Some(x) => {
            if x >= 16 {
                return Err(Error::InvalidArgument(format!(
                    "branch index must be an upper-register value 0..16, got {x}"
                )));
            }
            let mut value = 1u64;
            for _ in 0..x {
                value = value * a % 15;
            }
            Some(value as u8)
        }
        None => None,
    };
    let outcome = algorithms::shor15(a, residue, seed)?;
    let mut report = RunReport::new(outcome.distribution.clone(), 4, seed);
    report.result = vec![
        ("a".into(), ReportValue::Int(a as i64)),
        (
            "measured_residue".into(),
            ReportValue::Int(outcome.measured_residue as i64),
        ),
        ("period".into(), ReportValue::Int(outcome.period as i64)),
        ("factor_1".into(), ReportValue::Int(outcome.factors.0 as i64)),
        ("factor_2".into(), ReportValue::Int(outcome.factors.1 as i64)),
    ];
    Ok(report)
}

/// Which wire `run qec-bitflip` corrupts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlipChoice {
    None,
    Wire(usize),
    Random,
}

/// `run qec-bitflip`: push random qubits through
/// encode → flip → syndrome → correct → decode and report fidelities.
pub fn run_qec_bitflip(flip: FlipChoice, trials: u64, seed: u64) -> Result<RunReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument("need at least one trial".into()));
    }
    let mut rng = SplitMix64::new(seed);
    let mut min_fidelity = f64::INFINITY;
    let mut sum_fidelity = 0.0;
    for _ in 0..trials {
        let q = StateVector::random(1, &mut rng);
        let wire = match flip {
            FlipChoice::None => None,
            FlipChoice::Wire(w) => Some(w),
            FlipChoice::Random => {
                // three wires or no flip, uniformly
                match rng.next_u64() % 4 {
                    0 => None,
                    w => Some((w - 1) as usize),
                }
            }
        };
        let corrupted = qec::apply_flip(&qec::encode_bitflip(&q)?, wire)?;
        let (syndrome, data) = qec::syndrome_extract(&corrupted)?;
        let recovered = qec::decode(&qec::correct(&data, syndrome)?)?;
        let fidelity = state::fidelity_mod_phase(&recovered, &q)?;
        min_fidelity = min_fidelity.min(fidelity);
        sum_fidelity += fidelity;
    }
    let mut report = RunReport::new(vec![], 0, seed);
    report.result = vec![
        ("trials".into(), ReportValue::Int(trials as i64)),
        ("min_fidelity".into(), ReportValue::Float(min_fidelity)),
        (
            "mean_fidelity".into(),
            ReportValue::Float(sum_fidelity / trials as f64),
        ),
    ];
    Ok(report)
}

/// `run trotter`: first-order Trotter evolution of |0…0⟩ under a
/// Hamiltonian file, with the distance to the exact evolution.
pub fn run_trotter(hamiltonian_text: &str, t: f64, steps: u32, seed: u64) -> Result<RunReport> {
    let h = PauliSumHamiltonian::parse(hamiltonian_text)?;
    let initial = StateVector::zero(h.num_qubits());
    let approx = hamsim::trotter_evolve(&h, t, steps, &initial)?;
    let exact = hamsim::exact_evolution(&h, t, &initial)?;
    let distance = approx
        .amplitudes()
        .iter()
        .zip(exact.amplitudes())
        .map(|(a, e)| (a - e).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let mut report = RunReport::new(measure::probabilities(&approx), h.num_qubits(), seed);
    report.result = vec![
        ("qubits".into(), ReportValue::Int(h.num_qubits() as i64)),
        ("terms".into(), ReportValue::Int(h.terms().len() as i64)),
        ("steps".into(), ReportValue::Int(steps as i64)),
        ("t".into(), ReportValue::Float(t)),
        ("distance_to_exact".into(), ReportValue::Float(distance)),
    ];
    Ok(report)
}

/// Default seed: `QUBITKIT_SEED` when set and parseable, else 0; a `--seed`
/// flag wins over both.
pub fn resolve_seed(flag: Option<u64>) -> u64 {
    flag.or_else(|| {
        std::env::var("QUBITKIT_SEED")
            .ok()
            .and_then(|s| s.parse().ok())
    })
    .unwrap_or(0)
}
