//! The algorithm suite: oracle games, entanglement protocols, phase
//! estimation, the quantum Fourier transform and period finding for N = 15.
//!
//! Verdict-style algorithms (Deutsch, Deutsch-Jozsa) read exact branch
//! probabilities rather than sampling — their claims are deterministic and
//! the simulator can check them exactly. Sampling variants exist behind the
//! command-line runner for demonstration.

use std::f64::consts::PI;

use crate::circuit::{Circuit, CircuitOp};
use crate::error::{Error, Result};
use crate::gates::{self, GateDef};
use crate::linalg::{Complex, DenseMatrix, Pauli};
use crate::measure::{self, ShotConfig};
use crate::rng::SplitMix64;
use crate::state::{self, basis_state, StateVector};

/// A Boolean function f: {0,1}^n -> {0,1} held as its full truth table,
/// indexed by the input read as a big-endian integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BooleanOracle {
    n: usize,
    table: Vec<u8>,
}

impl BooleanOracle {
    pub fn new(table: Vec<u8>) -> Result<Self> {
        let len = table.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "truth table length must be a power of two >= 2, got {len}"
            )));
        }
        if table.iter().any(|&b| b > 1) {
            return Err(Error::InvalidArgument(
                "truth table entries must be 0 or 1".into(),
            ));
        }
        Ok(BooleanOracle {
            n: len.trailing_zeros() as usize,
            table,
        })
    }

    pub fn input_bits(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> &[u8] {
        &self.table
    }

    pub fn eval(&self, x: usize) -> u8 {
        self.table[x]
    }

    fn ones(&self) -> usize {
        self.table.iter().filter(|&&b| b == 1).count()
    }

    /// Whether the table satisfies the constant-or-balanced promise.
    pub fn classify(&self) -> Result<OracleVerdict> {
        let ones = self.ones();
        if ones == 0 || ones == self.table.len() {
            Ok(OracleVerdict::Constant)
        } else if 2 * ones == self.table.len() {
            Ok(OracleVerdict::Balanced)
        } else {
            Err(Error::PromiseViolation)
        }
    }
}

/// Outcome of the Deutsch / Deutsch-Jozsa decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleVerdict {
    Constant,
    Balanced,
}

/// The XOR oracle |x⟩|j⟩ → |x⟩|j ⊕ f(x)⟩ as an (n+1)-qubit gate.
///
/// Always a permutation matrix, and an involution since ⊕ is.
pub fn oracle_unitary(f: &BooleanOracle) -> GateDef {
    let dim = 2 * f.table.len();
    let mut m = DenseMatrix::zeros(dim, dim);
    for x in 0..f.table.len() {
        for j in 0..2usize {
            let row = 2 * x + (j ^ f.eval(x) as usize);
            m.set(row, 2 * x + j, Complex::new(1.0, 0.0));
        }
    }
    GateDef::new("oracle", m, vec![]).expect("XOR oracles are permutations")
}

/// The n-input Deutsch-Jozsa circuit on n+1 wires, before measurement:
/// prepare |0…0⟩|1⟩, Hadamard everything, query the oracle, Hadamard the
/// upper register.
pub fn deutsch_jozsa_circuit(f: &BooleanOracle) -> Circuit {
    let n = f.input_bits();
    let mut circuit = Circuit::new(n + 1);
    circuit
        .append(gates::pauli(Pauli::X), vec![n])
        .expect("wire in range");
    for wire in 0..=n {
        circuit
            .append(gates::hadamard(), vec![wire])
            .expect("wire in range");
    }
    circuit
        .append(oracle_unitary(f), (0..=n).collect())
        .expect("wires in range");
    for wire in 0..n {
        circuit
            .append(gates::hadamard(), vec![wire])
            .expect("wire in range");
    }
    circuit
}

/// One-query test of a single-bit function: Constant iff the top qubit of
/// the H / U_f / H circuit reads 0 with certainty.
pub fn deutsch(f: &BooleanOracle) -> Result<OracleVerdict> {
    if f.input_bits() != 1 {
        return Err(Error::InvalidArgument(format!(
            "Deutsch's algorithm takes a 1-bit function, got {} bits",
            f.input_bits()
        )));
    }
    decide_from_zero_branch(f)
}

/// The n-bit generalization. The function must honor the promise (the table
/// is scanned up front; a table that is neither constant nor balanced is a
/// distinct error).
pub fn deutsch_jozsa(f: &BooleanOracle) -> Result<OracleVerdict> {
    f.classify()?;
    decide_from_zero_branch(f)
}

fn decide_from_zero_branch(f: &BooleanOracle) -> Result<OracleVerdict> {
    let n = f.input_bits();
    let out = deutsch_jozsa_circuit(f).apply(&StateVector::zero(n + 1))?;
    let upper: Vec<usize> = (0..n).collect();
    let p_all_zero = measure::joint_distribution(&out, &upper)?[0];
    if (p_all_zero - 1.0).abs() <= 1e-9 {
        Ok(OracleVerdict::Constant)
    } else if p_all_zero.abs() <= 1e-9 {
        Ok(OracleVerdict::Balanced)
    } else {
        // unreachable under the validated promise
        Err(Error::PromiseViolation)
    }
}

/// Which Bell state to prepare: the circuit inputs |i⟩|j⟩.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BellLabel {
    pub i: u8,
    pub j: u8,
}

impl BellLabel {
    pub fn new(i: u8, j: u8) -> Result<Self> {
        if i > 1 || j > 1 {
            return Err(Error::InvalidArgument(format!(
                "Bell label bits must be 0 or 1, got ({i}, {j})"
            )));
        }
        Ok(BellLabel { i, j })
    }
}

/// Circuit preparing the Bell state from |00⟩: X gates to set |i⟩|j⟩, a
/// Hadamard on the top wire, then CNOT.
pub fn bell_circuit(label: BellLabel) -> Circuit {
    let mut circuit = Circuit::new(2);
    if label.i == 1 {
        circuit.append(gates::pauli(Pauli::X), vec![0]).unwrap();
    }
    if label.j == 1 {
        circuit.append(gates::pauli(Pauli::X), vec![1]).unwrap();
    }
    circuit.append(gates::hadamard(), vec![0]).unwrap();
    circuit.append(gates::cnot(), vec![0, 1]).unwrap();
    circuit
}

/// The Bell state (|0 j⟩ + (−1)^i |1 j̄⟩)/√2.
pub fn bell_state(label: BellLabel) -> StateVector {
    bell_circuit(label)
        .apply(&StateVector::zero(2))
        .expect("bell circuit is valid")
}

/// Superdense coding round trip: encode two classical bits on one half of a
/// shared Bell pair, decode with CNOT + H, and read both bits exactly.
pub fn superdense(b1: u8, b2: u8) -> Result<(u8, u8)> {
    if b1 > 1 || b2 > 1 {
        return Err(Error::InvalidArgument(format!(
            "classical bits must be 0 or 1, got ({b1}, {b2})"
        )));
    }
    let mut s = bell_state(BellLabel::new(0, 0)?);
    // sender: X^{b2} then Z^{b1} on the kept qubit
    if b2 == 1 {
        s = crate::circuit::apply_gate(&s, &CircuitOp::new(gates::pauli(Pauli::X), vec![0])?)?;
    }
    if b1 == 1 {
        s = crate::circuit::apply_gate(&s, &CircuitOp::new(gates::pauli(Pauli::Z), vec![0])?)?;
    }
    // receiver
    let mut decode = Circuit::new(2);
    decode.append(gates::cnot(), vec![0, 1])?;
    decode.append(gates::hadamard(), vec![0])?;
    let out = decode.apply(&s)?;

    // the decoded state is +-|b1 b2>, so the readout is certain
    let probabilities = measure::probabilities(&out);
    let (label, p) = probabilities
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .expect("nonempty");
    debug_assert!((p - 1.0).abs() < 1e-9);
    Ok(((label >> 1) as u8 & 1, (label & 1) as u8))
}

/// One run of the teleportation protocol.
#[derive(Debug, Clone, PartialEq)]
pub struct TeleportOutcome {
    /// Classical bits sent to the receiver (m₁ from the H wire, m₂ from the
    /// Bell wire).
    pub bits: (u8, u8),
    /// Probability of this measurement branch (¼ for every branch).
    pub probability: f64,
    /// The receiver's qubit after the conditional X/Z corrections.
    pub received: StateVector,
}

fn teleport_premeasure(q: &StateVector) -> Result<StateVector> {
    q.validate_normalized()?;
    if q.num_qubits() != 1 {
        return Err(Error::DimensionMismatch(format!(
            "teleportation sends a single qubit, got {}",
            q.num_qubits()
        )));
    }
    let joint = state::tensor(q, &bell_state(BellLabel::new(0, 0)?));
    let mut pre = Circuit::new(3);
    pre.append(gates::cnot(), vec![0, 1])?;
    pre.append(gates::hadamard(), vec![0])?;
    pre.apply(&joint)
}

fn teleport_finish(collapsed: &StateVector, m1: u8, m2: u8, probability: f64) -> Result<TeleportOutcome> {
    let mut s = collapsed.clone();
    if m2 == 1 {
        s = crate::circuit::apply_gate(&s, &CircuitOp::new(gates::pauli(Pauli::X), vec![2])?)?;
    }
    if m1 == 1 {
        s = crate::circuit::apply_gate(&s, &CircuitOp::new(gates::pauli(Pauli::Z), vec![2])?)?;
    }
    // wires 0 and 1 are now in the basis state |m1 m2>; slice out wire 2
    let base = ((m1 as usize) << 2) | ((m2 as usize) << 1);
    let received = StateVector::new(vec![s.amplitude(base), s.amplitude(base + 1)])?;
    Ok(TeleportOutcome {
        bits: (m1, m2),
        probability,
        received,
    })
}

/// Teleport one qubit, sampling the sender's measurements with `rng`.
pub fn teleport(q: &StateVector, rng: &mut SplitMix64) -> Result<TeleportOutcome> {
    let pre = teleport_premeasure(q)?;
    let outcome = measure::measure_subset(&pre, &[0, 1], rng)?;
    teleport_finish(
        &outcome.post_state,
        outcome.bits[0],
        outcome.bits[1],
        outcome.probability,
    )
}

/// All four measurement branches of the protocol, deterministically.
pub fn teleport_branches(q: &StateVector) -> Result<Vec<TeleportOutcome>> {
    let pre = teleport_premeasure(q)?;
    let mut outcomes = Vec::with_capacity(4);
    for m1 in 0..2u8 {
        for m2 in 0..2u8 {
            let (probability, collapsed) = measure::project_onto(&pre, &[0, 1], &[m1, m2])?;
            outcomes.push(teleport_finish(&collapsed, m1, m2, probability)?);
        }
    }
    Ok(outcomes)
}

/// Hadamard test for ⟨Q|U|Q⟩.
///
/// With `imaginary = false` the control is prepared in |+⟩ and
/// P₀ = ½(1 + Re⟨Q|U|Q⟩). With `imaginary = true` the control is prepared
/// in (|0⟩ − i|1⟩)/√2 and direct state-vector evaluation fixes the sign:
/// P₀ = ½(1 − Im⟨Q|U|Q⟩).
pub fn hadamard_test(u: &GateDef, q_target: &StateVector, imaginary: bool) -> Result<(f64, f64)> {
    if u.arity() != q_target.num_qubits() {
        return Err(Error::DimensionMismatch(format!(
            "gate acts on {} qubit(s) but the target has {}",
            u.arity(),
            q_target.num_qubits()
        )));
    }
    q_target.validate_normalized()?;
    let n = q_target.num_qubits();
    let joint = state::tensor(&basis_state(1, 0)?, q_target);
    let mut circuit = Circuit::new(n + 1);
    if imaginary {
        // prepare (|0> - i|1>)/sqrt(2) ahead of the test's first Hadamard
        circuit.append(gates::hadamard(), vec![0])?;
        circuit.append(gates::phase(-PI / 2.0), vec![0])?;
    }
    circuit.append(gates::hadamard(), vec![0])?;
    let mut targets = vec![0];
    targets.extend(1..=n);
    circuit.append(gates::controlled(u, 1)?, targets)?;
    circuit.append(gates::hadamard(), vec![0])?;
    let out = circuit.apply(&joint)?;
    let p0 = measure::marginal(&out, 0, 0)?;
    let p1 = measure::marginal(&out, 0, 1)?;
    Ok((p0, p1))
}

/// Quantum phase estimation with `m` ancilla qubits.
///
/// `eigenstate` must satisfy U|ψ⟩ = e^{iθ}|ψ⟩ within 1e-6; the ladder of
/// controlled U^(2^(m−1−k)) gates, an inverse QFT on the ancillas and
/// seeded sampling return 2π·(most frequent ancilla outcome)/2^m — exact
/// whenever θ/2π has an m-bit binary expansion.
pub fn phase_estimate(
    u: &GateDef,
    eigenstate: &StateVector,
    m: usize,
    shots: u64,
    seed: u64,
) -> Result<f64> {
    let out = phase_estimation_state(u, eigenstate, m)?;
    let ancillas: Vec<usize> = (0..m).collect();
    let histogram = measure::sample(&out, &ancillas, ShotConfig::new(shots, seed)?)?;
    let best = histogram
        .iter()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
        .map(|(bits, _)| bits.clone())
        .expect("at least one shot");
    let y = usize::from_str_radix(&best, 2).expect("keys are bit strings");
    Ok(2.0 * PI * y as f64 / (1usize << m) as f64)
}

/// The phase-estimation register just before the ancilla readout: ancillas
/// 0..m, then the eigenstate wires. Validates the eigenstate and builds the
/// Hadamard layer, the controlled-U^(2^(m−1−k)) ladder and the inverse QFT.
pub fn phase_estimation_state(
    u: &GateDef,
    eigenstate: &StateVector,
    m: usize,
) -> Result<StateVector> {
    if u.arity() != eigenstate.num_qubits() {
        return Err(Error::DimensionMismatch(format!(
            "gate acts on {} qubit(s) but the eigenstate has {}",
            u.arity(),
            eigenstate.num_qubits()
        )));
    }
    if m == 0 {
        return Err(Error::InvalidArgument("need at least one ancilla".into()));
    }
    eigenstate.validate_normalized()?;
    // eigenstate validation: ||U|psi> - lambda|psi>|| <= 1e-6
    let applied = StateVector::new(u.matrix().matvec(eigenstate.amplitudes())?)?;
    let lambda = state::inner_product(eigenstate, &applied)?;
    let residual: f64 = applied
        .amplitudes()
        .iter()
        .zip(eigenstate.amplitudes())
        .map(|(a, e)| (a - lambda * e).norm_sqr())
        .sum::<f64>()
        .sqrt();
    if residual > 1e-6 || (lambda.norm() - 1.0).abs() > 1e-6 {
        return Err(Error::NotAnEigenstate);
    }

    let t = u.arity();
    let joint = state::tensor(&StateVector::zero(m), eigenstate);
    let mut circuit = Circuit::new(m + t);
    for wire in 0..m {
        circuit.append(gates::hadamard(), vec![wire])?;
    }
    for k in 0..m {
        let power = 1u32 << (m - 1 - k);
        let mut targets = vec![k];
        targets.extend(m..m + t);
        circuit.append(gates::controlled(&u.pow(power), 1)?, targets)?;
    }
    for op in iqft(m).ops() {
        circuit.append(op.gate().clone(), op.targets().to_vec())?;
    }
    circuit.apply(&joint)
}

/// Swap test estimating |⟨t₁|t₂⟩|².
///
/// Runs the full H-control / controlled-register-swap / H-control circuit
/// by state-vector simulation and reads exact control marginals; returns
/// (P₀, P₁) = (½(1 + |⟨t₁|t₂⟩|²), ½(1 − |⟨t₁|t₂⟩|²)).
pub fn swap_test(t1: &StateVector, t2: &StateVector) -> Result<(f64, f64)> {
    if t1.num_qubits() != t2.num_qubits() {
        return Err(Error::DimensionMismatch(format!(
            "swap test needs equal sizes, got {} and {}",
            t1.num_qubits(),
            t2.num_qubits()
        )));
    }
    t1.validate_normalized()?;
    t2.validate_normalized()?;
    let k = t1.num_qubits();
    let joint = state::tensor(&basis_state(1, 0)?, &state::tensor(t1, t2));
    let mut circuit = Circuit::new(1 + 2 * k);
    circuit.append(gates::hadamard(), vec![0])?;
    for i in 0..k {
        circuit.append(gates::cswap(), vec![0, 1 + i, 1 + k + i])?;
    }
    circuit.append(gates::hadamard(), vec![0])?;
    let out = circuit.apply(&joint)?;
    Ok((measure::marginal(&out, 0, 0)?, measure::marginal(&out, 0, 1)?))
}

/// The QFT matrix: entry (y, x) = e^{2πi·xy/2^n} / √2^n.
pub fn qft_matrix(n: usize) -> DenseMatrix {
    let dim = 1usize << n;
    let scale = 1.0 / (dim as f64).sqrt();
    DenseMatrix::from_fn(dim, dim, |y, x| {
        Complex::from_polar(scale, 2.0 * PI * (x as f64) * (y as f64) / dim as f64)
    })
}

/// Circuit decomposition of the QFT: per-wire Hadamard plus controlled-R_l
/// ladder, then wire-reversing SWAPs.
pub fn qft(n: usize) -> Circuit {
    let mut circuit = Circuit::new(n);
    for target in 0..n {
        circuit.append(gates::hadamard(), vec![target]).unwrap();
        for l in 2..=(n - target) {
            let control = target + l - 1;
            circuit
                .append(
                    gates::controlled(&gates::r_l(l as u32).unwrap(), 1).unwrap(),
                    vec![control, target],
                )
                .unwrap();
        }
    }
    for i in 0..n / 2 {
        circuit.append(gates::swap(), vec![i, n - 1 - i]).unwrap();
    }
    circuit
}

/// Inverse QFT: the reversed, daggered [`qft`] circuit.
pub fn iqft(n: usize) -> Circuit {
    qft(n).inverse()
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn modpow(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut acc = 1u64;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % modulus;
        }
        base = base * base % modulus;
        exp >>= 1;
    }
    acc
}

/// Brute-force period of a modulo N: the smallest r ≥ 1 with a^r ≡ 1.
///
/// Reports a method failure when the period cannot feed the
/// difference-of-squares factor extraction (odd r, or a^(r/2) ≡ −1 mod N).
pub fn period_classical(a: u64, n: u64) -> Result<u64> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("modulus {n} must be >= 2")));
    }
    if gcd(a, n) != 1 {
        return Err(Error::NotCoprime { a, n });
    }
    let mut value = a % n;
    let mut r = 1u64;
    while value != 1 {
        value = value * (a % n) % n;
        r += 1;
    }
    if r % 2 != 0 {
        return Err(Error::MethodFailure {
            period: r,
            reason: "period is odd".into(),
        });
    }
    if modpow(a, r / 2, n) == n - 1 {
        return Err(Error::MethodFailure {
            period: r,
            reason: format!("{a}^(r/2) = -1 mod {n}"),
        });
    }
    Ok(r)
}

/// Everything the N = 15 period-finding run produces.
#[derive(Debug, Clone, PartialEq)]
pub struct Shor15Outcome {
    /// Residue a^x mod 15 observed on the lower register.
    pub measured_residue: u8,
    /// Exact post-iQFT distribution over the 16 upper-register outcomes.
    pub distribution: Vec<f64>,
    /// Recovered period of a modulo 15.
    pub period: u64,
    /// The two recovered factors, ascending.
    pub factors: (u64, u64),
}

/// Period finding for N = 15 with base `a`, by full simulation of the
/// 8-qubit circuit: H⁴ on the upper register, the modular oracle
/// |x⟩|0⟩ → |x⟩|a^x mod 15⟩, a lower-register measurement, and an inverse
/// QFT on the upper register.
///
/// `conditioned_residue` forces the lower-register outcome instead of
/// sampling it (any residue in the image of a^x mod 15); candidates
/// y from the exact upper distribution turn into periods r = 16/gcd(y, 16),
/// and the smallest even usable one yields factors gcd(a^(r/2) ± 1, 15).
pub fn shor15(a: u64, conditioned_residue: Option<u8>, seed: u64) -> Result<Shor15Outcome> {
    if a < 2 || a >= 15 {
        return Err(Error::InvalidArgument(format!(
            "base must satisfy 2 <= a < 15, got {a}"
        )));
    }
    if gcd(a, 15) != 1 {
        return Err(Error::NotCoprime { a, n: 15 });
    }

    // |x>|0> -> |x>|w XOR f(x)> as a permutation on 8 qubits.
    let table: Vec<usize> = (0..16).map(|x| modpow(a, x, 15) as usize).collect();
    let dim = 256usize;
    let mut m = DenseMatrix::zeros(dim, dim);
    for x in 0..16usize {
        for w in 0..16usize {
            let row = (x << 4) | (w ^ table[x]);
            m.set(row, (x << 4) | w, Complex::new(1.0, 0.0));
        }
    }
    let oracle = GateDef::new("modexp", m, vec![]).expect("modular oracle is a permutation");

    let mut circuit = Circuit::new(8);
    for wire in 0..4 {
        circuit.append(gates::hadamard(), vec![wire])?;
    }
    circuit.append(oracle, (0..8).collect())?;
    let pre_measure = circuit.apply(&StateVector::zero(8))?;

    let lower: Vec<usize> = (4..8).collect();
    let (residue, collapsed) = match conditioned_residue {
        Some(w) => {
            let bits: Vec<u8> = (0..4).map(|i| (w >> (3 - i)) & 1).collect();
            let (_, post) = measure::project_onto(&pre_measure, &lower, &bits).map_err(|_| {
                Error::InvalidArgument(format!(
                    "residue {w} is not in the image of {a}^x mod 15"
                ))
            })?;
            (w, post)
        }
        None => {
            let mut rng = SplitMix64::new(seed);
            let outcome = measure::measure_subset(&pre_measure, &lower, &mut rng)?;
            let w = outcome
                .bits
                .iter()
                .fold(0u8, |acc, &b| (acc << 1) | b);
            (w, outcome.post_state)
        }
    };

    let mut finish = Circuit::new(8);
    for op in iqft(4).ops() {
        finish.append(op.gate().clone(), op.targets().to_vec())?;
    }
    let final_state = finish.apply(&collapsed)?;
    let distribution = measure::joint_distribution(&final_state, &[0, 1, 2, 3])?;

    // classical post-processing over the outcome support
    let mut candidates: Vec<u64> = distribution
        .iter()
        .enumerate()
        .filter(|(_, &p)| p > 1e-12)
        .map(|(y, _)| 16 / gcd(y as u64, 16))
        .collect();
    candidates.sort_unstable();
    candidates.dedup();
    let mut failure = None;
    for r in candidates {
        if r % 2 != 0 {
            failure.get_or_insert(Error::MethodFailure {
                period: r,
                reason: "period is odd".into(),
            });
            continue;
        }
        if modpow(a, r / 2, 15) == 14 {
            failure.get_or_insert(Error::MethodFailure {
                period: r,
                reason: format!("{a}^(r/2) = -1 mod 15"),
            });
            continue;
        }
        if modpow(a, r, 15) != 1 {
            continue;
        }
        let half = modpow(a, r / 2, 15);
        let f1 = gcd(half + 15 - 1, 15);
        let f2 = gcd(half + 1, 15);
        return Ok(Shor15Outcome {
            measured_residue: residue,
            distribution,
            period: r,
            factors: (f1.min(f2), f1.max(f2)),
        });
    }
    Err(failure.unwrap_or(Error::MethodFailure {
        period: 0,
        reason: "no usable candidate period in the outcome support".into(),
    }))
}
