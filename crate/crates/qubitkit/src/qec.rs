//! Quantum error correction at the three-qubit bit-flip scale, plus the
//! classical repetition-code statistics it descends from and the
//! density-matrix channel picture of noise.
//!
//! The code pipeline is encode → (error) → syndrome extraction → correct →
//! decode. Ancillas start in |0⟩, so the no-error syndrome is (0, 0) and a
//! flip on wire k maps to the lookup (1,0) → wire 0, (1,1) → wire 1,
//! (0,1) → wire 2. The derivation in the source text substitutes ancilla
//! coefficients that amount to |1⟩ initialization, which bit-complements
//! its correction table relative to this one; the table here is re-derived
//! by simulating the parity-check circuit itself with |0⟩ ancillas, and the
//! tests pin it.

use crate::circuit::{Circuit, CircuitOp};
use crate::error::{Error, Result};
use crate::gates;
use crate::linalg::{self, Complex, DenseMatrix, Pauli, Tolerance};
use crate::state::{self, StateVector};

/// Density matrices above this many qubits are refused.
pub const DENSITY_QUBIT_GUARD: usize = 6;

/// Repetition-code outcome probabilities for one bit sent N times.
#[derive(Debug, Clone, PartialEq)]
pub struct RepetitionStats {
    /// Per-copy flip probability.
    pub p: f64,
    /// counts[k] = P(exactly k flips) = C(N,k) p^k (1-p)^(N-k).
    pub counts: Vec<f64>,
    /// Majority-rule failure probability Σ_{k > N/2} counts[k]; only
    /// defined for odd N, where majority voting is unambiguous.
    pub majority_failure: Option<f64>,
}

fn binomial(n: u32, k: u32) -> f64 {
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Binomial flip statistics of the N-fold repetition code.
pub fn repetition_stats(p: f64, n: u32) -> Result<RepetitionStats> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!(
            "flip probability must lie in [0, 1], got {p}"
        )));
    }
    if n < 1 {
        return Err(Error::InvalidArgument("need at least one copy".into()));
    }
    let q = 1.0 - p;
    let counts: Vec<f64> = (0..=n)
        .map(|k| binomial(n, k) * p.powi(k as i32) * q.powi((n - k) as i32))
        .collect();
    let majority_failure = (n % 2 == 1).then(|| {
        counts
            .iter()
            .enumerate()
            .filter(|(k, _)| 2 * k > n as usize)
            .map(|(_, &c)| c)
            .sum()
    });
    Ok(RepetitionStats {
        p,
        counts,
        majority_failure,
    })
}

/// The three N = 3 probability ratios P(0 flips)/P(k flips), verified
/// against their closed forms (q/p)/3, (q/p)²/3 and (q/p)³ at 1e-12.
pub fn ratio_checks(p: f64) -> Result<(f64, f64, f64)> {
    if !(0.0 < p && p < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "ratios need 0 < p < 1, got {p}"
        )));
    }
    let stats = repetition_stats(p, 3)?;
    let ratios = (
        stats.counts[0] / stats.counts[1],
        stats.counts[0] / stats.counts[2],
        stats.counts[0] / stats.counts[3],
    );
    let odds = (1.0 - p) / p;
    debug_assert!((ratios.0 - odds / 3.0).abs() <= 1e-12 * ratios.0.max(1.0));
    debug_assert!((ratios.1 - odds * odds / 3.0).abs() <= 1e-12 * ratios.1.max(1.0));
    debug_assert!((ratios.2 - odds.powi(3)).abs() <= 1e-12 * ratios.2.max(1.0));
    Ok(ratios)
}

/// Encode one qubit into the three-qubit code: CNOTs fan wire 0 onto the
/// fresh ancilla wires 1 and 2, producing α₀|000⟩ + α₁|111⟩.
pub fn encode_bitflip(q: &StateVector) -> Result<StateVector> {
    if q.num_qubits() != 1 {
        return Err(Error::DimensionMismatch(format!(
            "the code protects a single qubit, got {}",
            q.num_qubits()
        )));
    }
    q.validate_normalized()?;
    let extended = state::tensor(q, &StateVector::zero(2));
    let mut circuit = Circuit::new(3);
    circuit.append(gates::cnot(), vec![0, 1])?;
    circuit.append(gates::cnot(), vec![0, 2])?;
    circuit.apply(&extended)
}

/// X on wire k of the code block, or nothing for `None`.
pub fn apply_flip(state3: &StateVector, wire: Option<usize>) -> Result<StateVector> {
    if state3.num_qubits() != 3 {
        return Err(Error::DimensionMismatch(format!(
            "code blocks have 3 qubits, got {}",
            state3.num_qubits()
        )));
    }
    match wire {
        None => Ok(state3.clone()),
        Some(k) => {
            if k > 2 {
                return Err(Error::IndexOutOfRange {
                    index: k,
                    num_qubits: 3,
                });
            }
            crate::circuit::apply_gate(
                state3,
                &CircuitOp::new(gates::pauli(Pauli::X), vec![k])?,
            )
        }
    }
}

/// Ancilla parity readout identifying the flipped wire.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Syndrome {
    /// Parity of data wires 0 and 1.
    pub s1: u8,
    /// Parity of data wires 1 and 2.
    pub s2: u8,
}

impl Syndrome {
    /// The wire this syndrome indicts, or `None` for the clean pattern.
    pub fn flipped_wire(self) -> Option<usize> {
        match (self.s1, self.s2) {
            (0, 0) => None,
            (1, 0) => Some(0),
            (1, 1) => Some(1),
            (0, 1) => Some(2),
            _ => unreachable!("syndrome bits are 0/1"),
        }
    }
}

// The four mutually orthogonal subspaces F_0..F_3: basis-label pairs the
// code space maps onto under no flip / flip 0 / flip 1 / flip 2.
const FLIP_SUBSPACES: [[usize; 2]; 4] = [[0b000, 0b111], [0b100, 0b011], [0b010, 0b101], [0b001, 0b110]];

fn subspace_weights(state3: &StateVector) -> [f64; 4] {
    let mut weights = [0.0f64; 4];
    for (k, labels) in FLIP_SUBSPACES.iter().enumerate() {
        weights[k] = labels
            .iter()
            .map(|&x| state3.amplitude(x).norm_sqr())
            .sum();
    }
    weights
}

/// Parity-check measurement: two |0⟩ ancillas, four CNOTs
/// (data 0 → anc 0, data 1 → anc 0, data 1 → anc 1, data 2 → anc 1), then
/// an ancilla readout.
///
/// The input must lie in a single flip subspace F_k (a validated
/// precondition), which makes the syndrome deterministic and leaves the
/// data amplitudes untouched.
pub fn syndrome_extract(state3: &StateVector) -> Result<(Syndrome, StateVector)> {
    if state3.num_qubits() != 3 {
        return Err(Error::DimensionMismatch(format!(
            "code blocks have 3 qubits, got {}",
            state3.num_qubits()
        )));
    }
    state3.validate_normalized()?;
    let weights = subspace_weights(state3);
    if !weights.iter().any(|&w| (w - 1.0).abs() <= 1e-9) {
        return Err(Error::OutOfCodeSpace);
    }

    let extended = state::tensor(state3, &StateVector::zero(2));
    let mut parity = Circuit::new(5);
    parity.append(gates::cnot(), vec![0, 3])?;
    parity.append(gates::cnot(), vec![1, 3])?;
    parity.append(gates::cnot(), vec![1, 4])?;
    parity.append(gates::cnot(), vec![2, 4])?;
    let checked = parity.apply(&extended)?;

    // the ancilla outcome is certain, so read it off the joint distribution
    let dist = crate::measure::joint_distribution(&checked, &[3, 4])?;
    let (outcome, &p) = dist
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .expect("nonempty");
    debug_assert!((p - 1.0).abs() <= 1e-9, "syndrome must be deterministic");
    let s1 = (outcome >> 1) as u8;
    let s2 = (outcome & 1) as u8;

    // slice the data register back out of the 5-wire state
    let data: Vec<Complex> = (0..8).map(|d| checked.amplitude(d * 4 + outcome)).collect();
    Ok((Syndrome { s1, s2 }, StateVector::new(data)?))
}

/// Undo the flip named by the syndrome.
pub fn correct(state3: &StateVector, syndrome: Syndrome) -> Result<StateVector> {
    apply_flip(state3, syndrome.flipped_wire())
}

/// Invert the encoding (two CNOTs in reverse order) and strip the
/// ancillas, which must read |00⟩ — decoding an uncorrected block is an
/// error, not a silent wrong answer.
pub fn decode(state3: &StateVector) -> Result<StateVector> {
    if state3.num_qubits() != 3 {
        return Err(Error::DimensionMismatch(format!(
            "code blocks have 3 qubits, got {}",
            state3.num_qubits()
        )));
    }
    let mut circuit = Circuit::new(3);
    circuit.append(gates::cnot(), vec![0, 2])?;
    circuit.append(gates::cnot(), vec![0, 1])?;
    let out = circuit.apply(state3)?;
    let clear = crate::measure::joint_distribution(&out, &[1, 2])?[0];
    if (clear - 1.0).abs() > 1e-9 {
        return Err(Error::AncillasNotClear);
    }
    StateVector::new(vec![out.amplitude(0), out.amplitude(4)])
}

/// A 2^n × 2^n Hermitian, unit-trace, positive operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    num_qubits: usize,
    entries: DenseMatrix,
}

impl DensityMatrix {
    /// Validate and wrap: Hermitian within 1e-10, trace 1 within 1e-10,
    /// eigenvalues above −1e-9.
    pub fn new(entries: DenseMatrix) -> Result<Self> {
        let dim = entries.rows();
        if !entries.is_square() || !dim.is_power_of_two() || dim < 2 {
            return Err(Error::DimensionMismatch(format!(
                "density matrix must be 2^n x 2^n, got {}x{}",
                entries.rows(),
                entries.cols()
            )));
        }
        let num_qubits = dim.trailing_zeros() as usize;
        if num_qubits > DENSITY_QUBIT_GUARD {
            return Err(Error::TooLarge(num_qubits, DENSITY_QUBIT_GUARD));
        }
        if !entries.is_hermitian(Tolerance::new(1e-10)?) {
            return Err(Error::NotHermitian(1e-10));
        }
        let trace = entries.trace();
        if (trace - Complex::new(1.0, 0.0)).norm() > 1e-10 {
            return Err(Error::InvalidArgument(format!(
                "density matrix trace is {trace}, expected 1"
            )));
        }
        if linalg::hermitian_eigenvalues(&entries)
            .iter()
            .any(|&v| v < -1e-9)
        {
            return Err(Error::InvalidArgument(
                "density matrix has a negative eigenvalue".into(),
            ));
        }
        Ok(DensityMatrix {
            num_qubits,
            entries,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.entries
    }

    pub fn trace(&self) -> Complex {
        self.entries.trace()
    }
}

/// ρ = |ψ⟩⟨ψ| of a pure state.
pub fn to_density(state: &StateVector) -> Result<DensityMatrix> {
    state.validate_normalized()?;
    let amplitudes = state.amplitudes();
    let entries = DenseMatrix::from_fn(state.dim(), state.dim(), |r, c| {
        amplitudes[r] * amplitudes[c].conj()
    });
    DensityMatrix::new(entries)
}

/// A weighted family of error operators {(E_A, p_A)} with
/// Σ p_A E_A† E_A = I (trace preservation, checked at 1e-9).
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    operators: Vec<(DenseMatrix, f64)>,
}

impl KrausChannel {
    pub fn new(operators: Vec<(DenseMatrix, f64)>) -> Result<Self> {
        let Some(first) = operators.first() else {
            return Err(Error::InvalidArgument(
                "a channel needs at least one operator".into(),
            ));
        };
        let dim = first.0.rows();
        let mut completeness = DenseMatrix::zeros(dim, dim);
        for (e, weight) in &operators {
            if !e.is_square() || e.rows() != dim {
                return Err(Error::DimensionMismatch(
                    "channel operators must share one square dimension".into(),
                ));
            }
            if !weight.is_finite() || *weight < 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "channel weight must be a finite non-negative real, got {weight}"
                )));
            }
            completeness = completeness.add(
                &linalg::dagger(e)
                    .matmul(e)?
                    .scale(Complex::new(*weight, 0.0)),
            )?;
        }
        if completeness.max_diff(&DenseMatrix::identity(dim))? > 1e-9 {
            return Err(Error::NotTracePreserving(1e-9));
        }
        Ok(KrausChannel { operators })
    }

    pub fn operators(&self) -> &[(DenseMatrix, f64)] {
        &self.operators
    }

    /// Bit-flip channel {(I, 1−p), (X, p)} on one qubit.
    pub fn bit_flip(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidArgument(format!(
                "flip probability must lie in [0, 1], got {p}"
            )));
        }
        Self::new(vec![
            (DenseMatrix::identity(2), 1.0 - p),
            (Pauli::X.matrix(), p),
        ])
    }

    /// The uniform single-qubit Pauli channel, weight ¼ on each of
    /// {I, X, Y, Z}; its fixed point is the maximally mixed state.
    pub fn uniform_pauli() -> Self {
        Self::new(Pauli::ALL.iter().map(|p| (p.matrix(), 0.25)).collect())
            .expect("Pauli operators are unitary")
    }
}

/// Evolve ρ → Σ p_A E_A ρ E_A†. Trace and Hermiticity survive within 1e-9.
pub fn apply_channel(rho: &DensityMatrix, channel: &KrausChannel) -> Result<DensityMatrix> {
    let dim = rho.matrix().rows();
    if channel.operators[0].0.rows() != dim {
        return Err(Error::DimensionMismatch(format!(
            "channel dimension {} does not match state dimension {dim}",
            channel.operators[0].0.rows()
        )));
    }
    let mut out = DenseMatrix::zeros(dim, dim);
    for (e, weight) in &channel.operators {
        let term = e.matmul(rho.matrix())?.matmul(&linalg::dagger(e))?;
        out = out.add(&term.scale(Complex::new(*weight, 0.0)))?;
    }
    DensityMatrix::new(out)
}
