//! Hamiltonian simulation: Pauli-sum Hamiltonians, exact dense evolution,
//! Pauli-string exponential circuits and first-order Trotterization.
//!
//! A Hamiltonian here is a real-weighted list of Pauli strings (Hermiticity
//! forces real coefficients). Exact evolution diagonalizes the dense sum —
//! the reference everything else is measured against. Trotterized evolution
//! never touches a dense matrix: each term's exp(-i c P t/N) becomes a
//! small circuit (basis changes onto Z, a CNOT parity fan-in, one R_z),
//! repeated N times in the Hamiltonian's listed term order per the
//! first-order product formula, with total error falling off as 1/N.

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gates;
use crate::linalg::{self, DenseMatrix, Pauli};
use crate::rng::SplitMix64;
use crate::state::StateVector;

/// Dense forms above this many qubits are refused.
pub const DENSE_QUBIT_GUARD: usize = 10;

/// A word over {I, X, Y, Z}, one letter per qubit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PauliString {
    letters: Vec<Pauli>,
}

impl PauliString {
    pub fn new(letters: Vec<Pauli>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::InvalidArgument(
                "a Pauli string needs at least one letter".into(),
            ));
        }
        Ok(PauliString { letters })
    }

    /// Parse a word like "ZZI" or "xy".
    pub fn parse(word: &str) -> Result<Self> {
        Self::new(
            word.chars()
                .map(Pauli::from_symbol)
                .collect::<Result<Vec<_>>>()?,
        )
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    /// Wires carrying a non-identity letter.
    pub fn support(&self) -> Vec<usize> {
        self.letters
            .iter()
            .enumerate()
            .filter(|(_, &p)| p != Pauli::I)
            .map(|(i, _)| i)
            .collect()
    }
}

impl std::fmt::Display for PauliString {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for p in &self.letters {
            write!(f, "{}", p.symbol())?;
        }
        Ok(())
    }
}

/// H = Σ cᵢ σ_{w_i}: real coefficients on Pauli strings of equal length.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSumHamiltonian {
    num_qubits: usize,
    terms: Vec<(f64, PauliString)>,
}

impl PauliSumHamiltonian {
    pub fn new(terms: Vec<(f64, PauliString)>) -> Result<Self> {
        let Some(first) = terms.first() else {
            return Err(Error::InvalidArgument(
                "a Hamiltonian needs at least one term".into(),
            ));
        };
        let num_qubits = first.1.len();
        for (coefficient, string) in &terms {
            if !coefficient.is_finite() {
                return Err(Error::NonFinite("Hamiltonian coefficient"));
            }
            if string.len() != num_qubits {
                return Err(Error::DimensionMismatch(format!(
                    "term `{string}` has {} letters, expected {num_qubits}",
                    string.len()
                )));
            }
        }
        Ok(PauliSumHamiltonian { num_qubits, terms })
    }

    /// Parse the text format: one `coefficient LETTERS` pair per line,
    /// `#` comments and blank lines ignored. Example: `0.5 ZZI`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut terms = Vec::new();
        for (line_no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let (Some(coefficient), Some(word), None) =
                (parts.next(), parts.next(), parts.next())
            else {
                return Err(Error::InvalidArgument(format!(
                    "line {}: expected `coefficient LETTERS`, got `{raw}`",
                    line_no + 1
                )));
            };
            let coefficient: f64 = coefficient.parse().map_err(|_| {
                Error::InvalidArgument(format!(
                    "line {}: malformed coefficient `{coefficient}`",
                    line_no + 1
                ))
            })?;
            terms.push((coefficient, PauliString::parse(word)?));
        }
        Self::new(terms)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn terms(&self) -> &[(f64, PauliString)] {
        &self.terms
    }

    /// Dense 2^n x 2^n matrix of the sum (n ≤ 10).
    pub fn matrix(&self) -> Result<DenseMatrix> {
        let mut sum = DenseMatrix::zeros(1 << self.num_qubits, 1 << self.num_qubits);
        for (coefficient, string) in &self.terms {
            sum = sum.add(
                &pauli_string_matrix(string)?.scale(linalg::Complex::new(*coefficient, 0.0)),
            )?;
        }
        Ok(sum)
    }
}

/// Kronecker product of the letters (n ≤ 10). Unitary and Hermitian.
pub fn pauli_string_matrix(p: &PauliString) -> Result<DenseMatrix> {
    if p.len() > DENSE_QUBIT_GUARD {
        return Err(Error::TooLarge(p.len(), DENSE_QUBIT_GUARD));
    }
    Ok(linalg::pauli_word_matrix(p.letters()))
}

/// Exact evolution e^{-iHt}|ψ⟩ through the dense Hermitian exponential.
pub fn exact_evolution(
    h: &PauliSumHamiltonian,
    t: f64,
    state: &StateVector,
) -> Result<StateVector> {
    if state.num_qubits() != h.num_qubits() {
        return Err(Error::DimensionMismatch(format!(
            "Hamiltonian on {} qubits, state on {}",
            h.num_qubits(),
            state.num_qubits()
        )));
    }
    let u = linalg::herm_exp(&h.matrix()?, t)?;
    StateVector::new(u.matvec(state.amplitudes())?)
}

/// Circuit implementing e^{-i σ_w t} exactly for a single Pauli string.
///
/// Non-identity wires are rotated into the Z basis (H for X; R_x(π/2) for
/// Y, whose conjugation R_x(π/2) Y R_x(-π/2) = Z fixes the convention the
/// text never spells out), their parities are fanned into the last
/// non-identity wire with CNOTs, one R_z(2t) applies the phase, and the
/// ladder and basis changes are undone. All-identity strings are rejected —
/// their evolution is a bare global phase with no circuit content.
pub fn string_exp_circuit(p: &PauliString, t: f64) -> Result<Circuit> {
    let support = p.support();
    let Some(&last) = support.last() else {
        return Err(Error::InvalidArgument(
            "cannot build a circuit for the all-identity string".into(),
        ));
    };
    let mut circuit = Circuit::new(p.len());

    let add_basis_change = |circuit: &mut Circuit, undo: bool| -> Result<()> {
        for &wire in &support {
            match p.letters()[wire] {
                Pauli::X => {
                    circuit.append(gates::hadamard(), vec![wire])?;
                }
                Pauli::Y => {
                    let angle = if undo {
                        -std::f64::consts::FRAC_PI_2
                    } else {
                        std::f64::consts::FRAC_PI_2
                    };
                    circuit.append(gates::rotation(Pauli::X, angle)?, vec![wire])?;
                }
                _ => {}
            }
        }
        Ok(())
    };

    add_basis_change(&mut circuit, false)?;
    for &wire in support.iter().filter(|&&w| w != last) {
        circuit.append(gates::cnot(), vec![wire, last])?;
    }
    circuit.append(gates::rotation(Pauli::Z, 2.0 * t)?, vec![last])?;
    for &wire in support.iter().rev().filter(|&&w| w != last) {
        circuit.append(gates::cnot(), vec![wire, last])?;
    }
    add_basis_change(&mut circuit, true)?;
    Ok(circuit)
}

/// One Trotter slice: every term's exponential circuit, in listed order.
fn step_circuit(h: &PauliSumHamiltonian, slice_t: f64) -> Result<Circuit> {
    let mut circuit = Circuit::new(h.num_qubits());
    for (coefficient, string) in h.terms() {
        if string.support().is_empty() {
            // identity term: a global phase, irrelevant to the state's ray
            continue;
        }
        for op in string_exp_circuit(string, coefficient * slice_t)?.ops() {
            circuit.push(op.clone());
        }
    }
    Ok(circuit)
}

/// First-order Trotter evolution: N repetitions of the per-term
/// exponentials, in the Hamiltonian's listed term order.
pub fn trotter_evolve(
    h: &PauliSumHamiltonian,
    t: f64,
    steps: u32,
    state: &StateVector,
) -> Result<StateVector> {
    if steps == 0 {
        return Err(Error::InvalidArgument("need at least one Trotter step".into()));
    }
    if state.num_qubits() != h.num_qubits() {
        return Err(Error::DimensionMismatch(format!(
            "Hamiltonian on {} qubits, state on {}",
            h.num_qubits(),
            state.num_qubits()
        )));
    }
    let slice = step_circuit(h, t / steps as f64)?;
    let mut out = state.clone();
    for _ in 0..steps {
        out = slice.apply(&out)?;
    }
    Ok(out)
}

/// Number of random probe states behind [`trotter_error`].
const ERROR_PROBES: usize = 200;

/// Empirical Trotter error: the worst 2-norm distance between Trotterized
/// and exact evolution over 200 seeded random unit states.
pub fn trotter_error(h: &PauliSumHamiltonian, t: f64, steps: u32) -> Result<f64> {
    if steps == 0 {
        return Err(Error::InvalidArgument("need at least one Trotter step".into()));
    }
    let exact = linalg::herm_exp(&h.matrix()?, t)?;
    let slice = step_circuit(h, t / steps as f64)?;
    let mut rng = SplitMix64::new(0x7201);
    let mut worst = 0.0f64;
    for _ in 0..ERROR_PROBES {
        let probe = StateVector::random(h.num_qubits(), &mut rng);
        let mut approx = probe.clone();
        for _ in 0..steps {
            approx = slice.apply(&approx)?;
        }
        let reference = exact.matvec(probe.amplitudes())?;
        let distance = approx
            .amplitudes()
            .iter()
            .zip(&reference)
            .map(|(a, e)| (a - e).norm_sqr())
            .sum::<f64>()
            .sqrt();
        worst = worst.max(distance);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{Complex, Tolerance};
    use crate::state::basis_state;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn string_matrices() {
        let z = PauliString::parse("Z").unwrap();
        assert!(pauli_string_matrix(&z)
            .unwrap()
            .approx_eq(&Pauli::Z.matrix(), Tolerance::new(1e-15).unwrap()));

        let zz = PauliString::parse("ZZ").unwrap();
        let expected = linalg::kron(&Pauli::Z.matrix(), &Pauli::Z.matrix());
        assert!(pauli_string_matrix(&zz)
            .unwrap()
            .approx_eq(&expected, Tolerance::new(1e-15).unwrap()));

        // each word squares to the identity
        let xy = pauli_string_matrix(&PauliString::parse("XY").unwrap()).unwrap();
        assert!(xy
            .matmul(&xy)
            .unwrap()
            .approx_eq(&DenseMatrix::identity(4), Tolerance::new(1e-15).unwrap()));

        let too_big = PauliString::new(vec![Pauli::Z; 11]).unwrap();
        assert!(pauli_string_matrix(&too_big).is_err());
    }

    #[test]
    fn exact_evolution_diagonal_case() {
        // H = Z on |+>: amplitudes pick up e^{-it} and e^{+it}
        let h = PauliSumHamiltonian::new(vec![(1.0, PauliString::parse("Z").unwrap())]).unwrap();
        let plus =
            StateVector::new(vec![c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)]).unwrap();
        let t = 0.83;
        let out = exact_evolution(&h, t, &plus).unwrap();
        assert!((out.amplitude(0) - Complex::from_polar(FRAC_1_SQRT_2, -t)).norm() < 1e-12);
        assert!((out.amplitude(1) - Complex::from_polar(FRAC_1_SQRT_2, t)).norm() < 1e-12);

        // t = 0 leaves the state alone
        let same = exact_evolution(&h, 0.0, &plus).unwrap();
        for i in 0..2 {
            assert!((same.amplitude(i) - plus.amplitude(i)).norm() < 1e-12);
        }
    }

    #[test]
    fn exact_evolution_matches_taylor_form_for_doubled_strings() {
        // H = sigma_A (x) sigma_A evolves as cos(t) I - i sin(t) sigma(x)sigma
        let t = 1.91;
        for letter in ["XX", "YY", "ZZ"] {
            let string = PauliString::parse(letter).unwrap();
            let h = PauliSumHamiltonian::new(vec![(1.0, string.clone())]).unwrap();
            let u = linalg::herm_exp(&h.matrix().unwrap(), t).unwrap();
            let expected = DenseMatrix::identity(4)
                .scale(c(t.cos(), 0.0))
                .add(&pauli_string_matrix(&string).unwrap().scale(c(0.0, -t.sin())))
                .unwrap();
            assert!(u.max_diff(&expected).unwrap() < 1e-12, "{letter}");
        }
    }

    #[test]
    fn string_circuits_for_single_letters() {
        // Z: a bare R_z(2t)
        let circ = string_exp_circuit(&PauliString::parse("Z").unwrap(), 0.4).unwrap();
        assert_eq!(circ.ops().len(), 1);
        assert_eq!(circ.ops()[0].gate().name(), "rz");

        // X: H R_z(2t) H
        let circ = string_exp_circuit(&PauliString::parse("X").unwrap(), 0.4).unwrap();
        let names: Vec<&str> = circ.ops().iter().map(|op| op.gate().name()).collect();
        assert_eq!(names, vec!["h", "rz", "h"]);

        // ZZ: CNOT(0->1) R_z(2t) CNOT(0->1)
        let circ = string_exp_circuit(&PauliString::parse("ZZ").unwrap(), 0.4).unwrap();
        let names: Vec<&str> = circ.ops().iter().map(|op| op.gate().name()).collect();
        assert_eq!(names, vec!["cnot", "rz", "cnot"]);
        assert_eq!(circ.ops()[0].targets(), &[0, 1]);
        assert_eq!(circ.ops()[1].targets(), &[1]);

        assert!(string_exp_circuit(&PauliString::parse("II").unwrap(), 0.4).is_err());
    }

    #[test]
    fn string_circuits_equal_exponentials_for_all_short_words() {
        // every 2- and 3-letter word over {X, Y, Z}, at two times
        let letters = [Pauli::X, Pauli::Y, Pauli::Z];
        let mut words: Vec<Vec<Pauli>> = Vec::new();
        for &a in &letters {
            for &b in &letters {
                words.push(vec![a, b]);
                for &d in &letters {
                    words.push(vec![a, b, d]);
                }
            }
        }
        for word in words {
            let string = PauliString::new(word).unwrap();
            for t in [0.3, 1.0] {
                let circuit = string_exp_circuit(&string, t).unwrap();
                let expected =
                    linalg::herm_exp(&pauli_string_matrix(&string).unwrap(), t).unwrap();
                let diff = linalg::phase_aligned_max_diff(&circuit.unitary().unwrap(), &expected)
                    .unwrap();
                assert!(diff < 1e-10, "{string} at t = {t}: {diff}");
            }
        }
    }

    #[test]
    fn string_circuits_handle_identity_gaps() {
        // identity letters between live wires must be skipped by the ladder
        let string = PauliString::parse("ZIZ").unwrap();
        let t = 0.57;
        let circuit = string_exp_circuit(&string, t).unwrap();
        let expected = linalg::herm_exp(&pauli_string_matrix(&string).unwrap(), t).unwrap();
        assert!(
            linalg::phase_aligned_max_diff(&circuit.unitary().unwrap(), &expected).unwrap() < 1e-10
        );
    }

    #[test]
    fn trotter_is_exact_for_single_and_commuting_terms() {
        // single term: exact at any step count
        let h = PauliSumHamiltonian::new(vec![(0.7, PauliString::parse("XY").unwrap())]).unwrap();
        let mut rng = SplitMix64::new(8);
        let probe = StateVector::random(2, &mut rng);
        for steps in [1u32, 3, 17] {
            let approx = trotter_evolve(&h, 1.3, steps, &probe).unwrap();
            let exact = exact_evolution(&h, 1.3, &probe).unwrap();
            for i in 0..4 {
                assert!((approx.amplitude(i) - exact.amplitude(i)).norm() < 1e-10);
            }
        }

        // commuting terms Z1, Z2: the single-step product is already exact
        let h = PauliSumHamiltonian::new(vec![
            (0.9, PauliString::parse("ZI").unwrap()),
            (-0.4, PauliString::parse("IZ").unwrap()),
        ])
        .unwrap();
        assert!(trotter_error(&h, 1.0, 1).unwrap() < 1e-10);
    }

    #[test]
    fn trotter_error_halves_when_steps_double() {
        let h = PauliSumHamiltonian::new(vec![
            (1.0, PauliString::parse("X").unwrap()),
            (1.0, PauliString::parse("Z").unwrap()),
        ])
        .unwrap();
        let e64 = trotter_error(&h, 1.0, 64).unwrap();
        let e128 = trotter_error(&h, 1.0, 128).unwrap();
        let ratio = e64 / e128;
        assert!((1.8..=2.2).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn trotter_error_is_monotone_in_steps() {
        let h = PauliSumHamiltonian::new(vec![
            (1.0, PauliString::parse("X").unwrap()),
            (1.0, PauliString::parse("Z").unwrap()),
        ])
        .unwrap();
        let mut previous = f64::INFINITY;
        for steps in [2u32, 4, 8, 16, 32, 64, 128, 256] {
            let error = trotter_error(&h, 1.0, steps).unwrap();
            assert!(
                error <= previous * 1.05,
                "error grew from {previous} to {error} at N = {steps}"
            );
            previous = error;
        }
    }

    #[test]
    fn trotter_preserves_norm() {
        let h = PauliSumHamiltonian::new(vec![
            (0.8, PauliString::parse("XZ").unwrap()),
            (0.3, PauliString::parse("ZY").unwrap()),
            (-0.5, PauliString::parse("YX").unwrap()),
        ])
        .unwrap();
        let mut rng = SplitMix64::new(90);
        for steps in [1u32, 7, 40] {
            let probe = StateVector::random(2, &mut rng);
            let out = trotter_evolve(&h, 2.2, steps, &probe).unwrap();
            assert!((out.norm() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn decompose_recovers_hamiltonian_coefficients() {
        let h = PauliSumHamiltonian::new(vec![
            (0.5, PauliString::parse("ZZ").unwrap()),
            (-1.25, PauliString::parse("XI").unwrap()),
            (0.75, PauliString::parse("YY").unwrap()),
        ])
        .unwrap();
        let coefficients = linalg::pauli_decompose(&h.matrix().unwrap()).unwrap();
        assert!((coefficients["ZZ"] - c(0.5, 0.0)).norm() < 1e-12);
        assert!((coefficients["XI"] - c(-1.25, 0.0)).norm() < 1e-12);
        assert!((coefficients["YY"] - c(0.75, 0.0)).norm() < 1e-12);
        assert!(coefficients["II"].norm() < 1e-12);
    }

    #[test]
    fn hamiltonian_text_format() {
        let text = "# transverse field pair\n1.0 XI\n0.5 ZZ\n\n-0.25 IY # comment\n";
        let h = PauliSumHamiltonian::parse(text).unwrap();
        assert_eq!(h.num_qubits(), 2);
        assert_eq!(h.terms().len(), 3);
        assert_eq!(h.terms()[1].0, 0.5);
        assert_eq!(h.terms()[1].1.to_string(), "ZZ");

        assert!(PauliSumHamiltonian::parse("1.0 XX\n2.0 XXX").is_err());
        assert!(PauliSumHamiltonian::parse("abc XX").is_err());
        assert!(PauliSumHamiltonian::parse("1.0 Q").is_err());
        assert!(PauliSumHamiltonian::parse("").is_err());
    }

    #[test]
    fn trotter_input_validation() {
        let h = PauliSumHamiltonian::new(vec![(1.0, PauliString::parse("Z").unwrap())]).unwrap();
        assert!(trotter_evolve(&h, 1.0, 0, &basis_state(1, 0).unwrap()).is_err());
        assert!(trotter_evolve(&h, 1.0, 1, &basis_state(2, 0).unwrap()).is_err());
    }
}
