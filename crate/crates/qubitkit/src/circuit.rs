//! Circuit IR and the gate-application engine.
//!
//! [`apply_gate`] is the performance core of the crate: applying a k-qubit
//! gate to chosen wires of a 2^n state costs O(2^n · 4^k) with no 2^n×2^n
//! allocation. It walks every configuration of the non-target bits, gathers
//! the 2^k amplitudes addressed by the target bits, multiplies them by the
//! small gate matrix and scatters the result back in place. Each
//! configuration touches a disjoint amplitude subset, so any execution
//! order gives bit-identical results.
//!
//! [`embed_unitary`] is the slow dense oracle for the same operation, built
//! from Kronecker products and an index permutation; the test suite holds
//! the kernel to it at 1e-12 over hundreds of random cases.

use crate::error::{Error, Result};
use crate::gates::GateDef;
use crate::linalg::{self, Complex, DenseMatrix};
use crate::state::StateVector;

/// Dense embeddings above this qubit count are refused (2^24-entry matrices).
pub const DENSE_QUBIT_GUARD: usize = 12;

/// One gate bound to concrete wires. For controlled gates the control index
/// comes first, matching the gate matrix's most-significant wire.
#[derive(Debug, Clone, PartialEq)]
pub struct CircuitOp {
    gate: GateDef,
    targets: Vec<usize>,
}

impl CircuitOp {
    /// Bind a gate to target wires; the count must match the gate arity and
    /// the indices must be distinct.
    pub fn new(gate: GateDef, targets: Vec<usize>) -> Result<Self> {
        if targets.len() != gate.arity() {
            return Err(Error::DimensionMismatch(format!(
                "gate `{}` acts on {} qubit(s), got {} target(s)",
                gate.name(),
                gate.arity(),
                targets.len()
            )));
        }
        for (i, &t) in targets.iter().enumerate() {
            if targets[..i].contains(&t) {
                return Err(Error::DuplicateTarget(t));
            }
        }
        Ok(CircuitOp { gate, targets })
    }

    pub fn gate(&self) -> &GateDef {
        &self.gate
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    fn validate_for(&self, num_qubits: usize) -> Result<()> {
        for &t in &self.targets {
            if t >= num_qubits {
                return Err(Error::IndexOutOfRange {
                    index: t,
                    num_qubits,
                });
            }
        }
        Ok(())
    }

    /// The same operation with the inverse gate.
    pub fn dagger(&self) -> CircuitOp {
        CircuitOp {
            gate: self.gate.dagger(),
            targets: self.targets.clone(),
        }
    }
}

/// An ordered list of operations on a fixed-width register. Ops listed left
/// to right execute first to last, like a diagram read left to right.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    ops: Vec<CircuitOp>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Circuit {
            num_qubits,
            ops: Vec::new(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn ops(&self) -> &[CircuitOp] {
        &self.ops
    }

    pub fn push(&mut self, op: CircuitOp) {
        self.ops.push(op);
    }

    /// Append a gate on the given wires.
    pub fn append(&mut self, gate: GateDef, targets: Vec<usize>) -> Result<&mut Self> {
        let op = CircuitOp::new(gate, targets)?;
        op.validate_for(self.num_qubits)?;
        self.ops.push(op);
        Ok(self)
    }

    /// Left-fold of [`apply_gate`] over the ops.
    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        if state.num_qubits() != self.num_qubits {
            return Err(Error::DimensionMismatch(format!(
                "circuit on {} qubits applied to a {}-qubit state",
                self.num_qubits,
                state.num_qubits()
            )));
        }
        let mut out = state.clone();
        for op in &self.ops {
            apply_gate_in_place(&mut out, op)?;
        }
        Ok(out)
    }

    /// Ordered matrix product of the embedded ops (n ≤ 12 guard).
    pub fn unitary(&self) -> Result<DenseMatrix> {
        if self.num_qubits > DENSE_QUBIT_GUARD {
            return Err(Error::TooLarge(self.num_qubits, DENSE_QUBIT_GUARD));
        }
        let dim = 1usize << self.num_qubits;
        let mut m = DenseMatrix::identity(dim);
        for op in &self.ops {
            m = embed_unitary(op, self.num_qubits)?.matmul(&m)?;
        }
        Ok(m)
    }

    /// Reverse the op order and invert each gate, so that
    /// `apply(apply(s, c), inverse(c)) = s`.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            num_qubits: self.num_qubits,
            ops: self.ops.iter().rev().map(CircuitOp::dagger).collect(),
        }
    }
}

/// Apply one gate to the state, returning the new state.
pub fn apply_gate(state: &StateVector, op: &CircuitOp) -> Result<StateVector> {
    let mut out = state.clone();
    apply_gate_in_place(&mut out, op)?;
    Ok(out)
}

/// In-place bit-indexed kernel behind [`apply_gate`].
pub fn apply_gate_in_place(state: &mut StateVector, op: &CircuitOp) -> Result<()> {
    let n = state.num_qubits();
    op.validate_for(n)?;
    let k = op.targets.len();

    // Bit position (from the LSB) of each target under the big-endian
    // convention; sub-index bit (k-1-i) of the gate matrix belongs to
    // targets[i].
    let shifts: Vec<u32> = op.targets.iter().map(|&t| (n - 1 - t) as u32).collect();

    // Positions sorted descending, for inserting zero bits when expanding a
    // configuration counter into a full index.
    let mut sorted_shifts = shifts.clone();
    sorted_shifts.sort_unstable_by(|a, b| b.cmp(a));

    let gate = op.gate.matrix();
    let sub_dim = 1usize << k;
    let mut gathered = vec![Complex::new(0.0, 0.0); sub_dim];
    let mut indices = vec![0usize; sub_dim];
    let amplitudes = state.amplitudes_mut();

    for config in 0..(amplitudes.len() >> k) {
        // Spread the configuration bits around holes at the target positions.
        let mut base = config;
        for &shift in sorted_shifts.iter().rev() {
            let low = base & ((1usize << shift) - 1);
            base = ((base >> shift) << (shift + 1)) | low;
        }

        for (sub, slot) in indices.iter_mut().enumerate() {
            let mut index = base;
            for (i, &shift) in shifts.iter().enumerate() {
                index |= ((sub >> (k - 1 - i)) & 1) << shift;
            }
            *slot = index;
        }

        for (sub, g) in gathered.iter_mut().enumerate() {
            *g = amplitudes[indices[sub]];
        }
        for (row, &slot) in indices.iter().enumerate() {
            let mut acc = Complex::new(0.0, 0.0);
            for (col, &g) in gathered.iter().enumerate() {
                acc += gate.get(row, col) * g;
            }
            amplitudes[slot] = acc;
        }
    }
    Ok(())
}

/// Dense 2^n×2^n unitary equal to the gate on its targets and the identity
/// elsewhere. The reference oracle for [`apply_gate`]; refuses n > 12.
pub fn embed_unitary(op: &CircuitOp, n: usize) -> Result<DenseMatrix> {
    if n > DENSE_QUBIT_GUARD {
        return Err(Error::TooLarge(n, DENSE_QUBIT_GUARD));
    }
    op.validate_for(n)?;
    let k = op.targets.len();

    // kron(gate, I) acts on a virtual wire order with the targets first (in
    // listed order) and the remaining wires after them in increasing order.
    let spectator_dim = 1usize << (n - k);
    let big = linalg::kron(op.gate.matrix(), &DenseMatrix::identity(spectator_dim));

    // virtual position of each original wire
    let mut position = vec![usize::MAX; n];
    for (i, &t) in op.targets.iter().enumerate() {
        position[t] = i;
    }
    let mut next = k;
    for w in 0..n {
        if position[w] == usize::MAX {
            position[w] = next;
            next += 1;
        }
    }
    let virt = |index: usize| -> usize {
        let mut v = 0usize;
        for (w, &pos) in position.iter().enumerate() {
            let bit = (index >> (n - 1 - w)) & 1;
            v |= bit << (n - 1 - pos);
        }
        v
    };

    let dim = 1usize << n;
    Ok(DenseMatrix::from_fn(dim, dim, |r, c| {
        big.get(virt(r), virt(c))
    }))
}

/// Apply a whole circuit (alias for [`Circuit::apply`]).
pub fn apply_circuit(state: &StateVector, circuit: &Circuit) -> Result<StateVector> {
    circuit.apply(state)
}

/// Dense unitary of a whole circuit (alias for [`Circuit::unitary`]).
pub fn circuit_unitary(circuit: &Circuit) -> Result<DenseMatrix> {
    circuit.unitary()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates;
    use crate::linalg::{Pauli, Tolerance};
    use crate::rng::SplitMix64;
    use crate::state::{basis_state, fidelity_mod_phase, StateVector};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn dense_apply(op: &CircuitOp, state: &StateVector) -> StateVector {
        let u = embed_unitary(op, state.num_qubits()).unwrap();
        StateVector::new(u.matvec(state.amplitudes()).unwrap()).unwrap()
    }

    #[test]
    fn embed_unitary_base_cases() {
        // (X, target 0, n = 1) is X itself.
        let op = CircuitOp::new(gates::pauli(Pauli::X), vec![0]).unwrap();
        assert!(embed_unitary(&op, 1)
            .unwrap()
            .approx_eq(&Pauli::X.matrix(), Tolerance::new(1e-15).unwrap()));

        // (X on qubit 1 of 2) = I (x) X.
        let op = CircuitOp::new(gates::pauli(Pauli::X), vec![1]).unwrap();
        let expected = linalg::kron(&DenseMatrix::identity(2), &Pauli::X.matrix());
        assert!(embed_unitary(&op, 2)
            .unwrap()
            .approx_eq(&expected, Tolerance::new(1e-15).unwrap()));

        // (CNOT on (0,1), n = 2) is the catalog CNOT matrix.
        let op = CircuitOp::new(gates::cnot(), vec![0, 1]).unwrap();
        assert!(embed_unitary(&op, 2)
            .unwrap()
            .approx_eq(gates::cnot().matrix(), Tolerance::new(1e-15).unwrap()));

        assert!(embed_unitary(&op, 13).is_err());
    }

    #[test]
    fn embed_unitary_handles_wire_reversal() {
        // CNOT with control 1, target 0 flips the top wire: on |01> -> |11>.
        let op = CircuitOp::new(gates::cnot(), vec![1, 0]).unwrap();
        let u = embed_unitary(&op, 2).unwrap();
        let out = u.matvec(basis_state(2, 1).unwrap().amplitudes()).unwrap();
        assert!((out[3] - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn hadamard_on_top_wire_of_two() {
        let op = CircuitOp::new(gates::hadamard(), vec![0]).unwrap();
        let out = apply_gate(&basis_state(2, 0).unwrap(), &op).unwrap();
        assert!((out.amplitude(0) - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-12);
        assert!((out.amplitude(2) - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-12);
        // matches the dense reference
        let reference = dense_apply(&op, &basis_state(2, 0).unwrap());
        for i in 0..4 {
            assert!((out.amplitude(i) - reference.amplitude(i)).norm() < 1e-12);
        }
    }

    #[test]
    fn identity_leaves_state_alone() {
        let mut rng = SplitMix64::new(77);
        let s = StateVector::random(3, &mut rng);
        for wire in 0..3 {
            let op = CircuitOp::new(gates::identity(), vec![wire]).unwrap();
            let out = apply_gate(&s, &op).unwrap();
            assert_eq!(out, s);
        }
    }

    #[test]
    fn bell_state_from_plus_and_cnot() {
        // CNOT(0 -> 1) on (|00> + |10>)/sqrt(2) gives the Bell state.
        let plus_zero = StateVector::new(vec![
            c(FRAC_1_SQRT_2, 0.0),
            c(0.0, 0.0),
            c(FRAC_1_SQRT_2, 0.0),
            c(0.0, 0.0),
        ])
        .unwrap();
        let op = CircuitOp::new(gates::cnot(), vec![0, 1]).unwrap();
        let out = apply_gate(&plus_zero, &op).unwrap();
        assert!((out.amplitude(0) - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-12);
        assert!((out.amplitude(3) - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn kernel_matches_dense_oracle_on_random_cases() {
        let mut rng = SplitMix64::new(20240);
        for case in 0..500 {
            let n = 1 + (rng.next_u64() as usize % 8); // n in 1..=8
            let k = 1 + (rng.next_u64() as usize % n.min(3));
            // pick k distinct wires
            let mut targets: Vec<usize> = Vec::new();
            while targets.len() < k {
                let t = rng.next_u64() as usize % n;
                if !targets.contains(&t) {
                    targets.push(t);
                }
            }
            let gate = GateDef::new(
                "rand",
                DenseMatrix::random_unitary(1 << k, &mut rng),
                vec![],
            )
            .unwrap();
            let op = CircuitOp::new(gate, targets).unwrap();
            let input = StateVector::random(n, &mut rng);
            let fast = apply_gate(&input, &op).unwrap();
            let slow = dense_apply(&op, &input);
            for i in 0..input.dim() {
                assert!(
                    (fast.amplitude(i) - slow.amplitude(i)).norm() < 1e-12,
                    "case {case}: n={n} k={k}"
                );
            }
        }
    }

    #[test]
    fn rejects_bad_targets() {
        assert!(matches!(
            CircuitOp::new(gates::cnot(), vec![1, 1]),
            Err(Error::DuplicateTarget(1))
        ));
        assert!(CircuitOp::new(gates::cnot(), vec![0]).is_err());
        let op = CircuitOp::new(gates::cnot(), vec![0, 5]).unwrap();
        assert!(matches!(
            apply_gate(&StateVector::zero(2), &op),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn three_cnots_make_a_swap() {
        // alternating directions: CNOT(0->1), CNOT(1->0), CNOT(0->1)
        let mut circuit = Circuit::new(2);
        circuit.append(gates::cnot(), vec![0, 1]).unwrap();
        circuit.append(gates::cnot(), vec![1, 0]).unwrap();
        circuit.append(gates::cnot(), vec![0, 1]).unwrap();
        let u = circuit.unitary().unwrap();
        assert!(u.approx_eq(gates::swap().matrix(), Tolerance::new(1e-12).unwrap()));
    }

    #[test]
    fn empty_circuit_is_identity() {
        let circuit = Circuit::new(3);
        assert!(circuit
            .unitary()
            .unwrap()
            .approx_eq(&DenseMatrix::identity(8), Tolerance::new(1e-15).unwrap()));
    }

    #[test]
    fn hadamard_conjugated_cz_is_cnot() {
        // (I (x) H) CZ (I (x) H) = CNOT
        let mut circuit = Circuit::new(2);
        circuit.append(gates::hadamard(), vec![1]).unwrap();
        circuit.append(gates::cz(), vec![0, 1]).unwrap();
        circuit.append(gates::hadamard(), vec![1]).unwrap();
        let u = circuit.unitary().unwrap();
        assert!(u.approx_eq(gates::cnot().matrix(), Tolerance::new(1e-12).unwrap()));
    }

    #[test]
    fn inverse_undoes_circuit() {
        let mut rng = SplitMix64::new(404);
        let mut circuit = Circuit::new(3);
        circuit.append(gates::hadamard(), vec![0]).unwrap();
        circuit.append(gates::t(), vec![1]).unwrap();
        circuit.append(gates::cnot(), vec![0, 2]).unwrap();
        circuit
            .append(gates::rotation(Pauli::Y, 0.77).unwrap(), vec![2])
            .unwrap();
        circuit.append(gates::cswap(), vec![1, 0, 2]).unwrap();

        let s = StateVector::random(3, &mut rng);
        let round_trip = circuit.inverse().apply(&circuit.apply(&s).unwrap()).unwrap();
        assert!(fidelity_mod_phase(&round_trip, &s).unwrap() > 1.0 - 1e-9);
        for i in 0..8 {
            assert!((round_trip.amplitude(i) - s.amplitude(i)).norm() < 1e-9);
        }
    }

    #[test]
    fn circuits_preserve_norm() {
        let mut rng = SplitMix64::new(512);
        for _ in 0..20 {
            let mut circuit = Circuit::new(4);
            for _ in 0..10 {
                let wire = rng.next_u64() as usize % 4;
                let other = (wire + 1 + rng.next_u64() as usize % 3) % 4;
                match rng.next_u64() % 3 {
                    0 => circuit.append(gates::hadamard(), vec![wire]).unwrap(),
                    1 => circuit.append(gates::cnot(), vec![wire, other]).unwrap(),
                    _ => circuit
                        .append(gates::phase(rng.next_f64() * 6.28), vec![wire])
                        .unwrap(),
                };
            }
            let s = StateVector::random(4, &mut rng);
            let out = circuit.apply(&s).unwrap();
            assert!((out.norm() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn cswap_decomposition_matches_catalog_gate() {
        // CNOT(2 -> 1), Toffoli(0,1 -> 2), CNOT(2 -> 1)
        let mut circuit = Circuit::new(3);
        circuit.append(gates::cnot(), vec![2, 1]).unwrap();
        circuit.append(gates::toffoli(), vec![0, 1, 2]).unwrap();
        circuit.append(gates::cnot(), vec![2, 1]).unwrap();
        let u = circuit.unitary().unwrap();
        assert!(u.approx_eq(gates::cswap().matrix(), Tolerance::new(1e-12).unwrap()));
    }

    #[test]
    fn fanout_and_cascade_agree_on_cleared_targets() {
        // A control fanned out to every target and a CNOT cascade are
        // different unitaries in general, but coincide on inputs whose
        // targets start in |0>, including superposed controls.
        for n_targets in [3usize, 4] {
            let n = n_targets + 1;
            let mut fanout = Circuit::new(n);
            for t in 1..n {
                fanout.append(gates::cnot(), vec![0, t]).unwrap();
            }
            let mut cascade = Circuit::new(n);
            cascade.append(gates::cnot(), vec![0, 1]).unwrap();
            for t in 2..n {
                cascade.append(gates::cnot(), vec![t - 1, t]).unwrap();
            }
            for control in [
                basis_state(1, 0).unwrap(),
                basis_state(1, 1).unwrap(),
                StateVector::new(vec![c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)]).unwrap(),
            ] {
                let input = crate::state::tensor(&control, &StateVector::zero(n_targets));
                let a = fanout.apply(&input).unwrap();
                let b = cascade.apply(&input).unwrap();
                for i in 0..input.dim() {
                    assert!((a.amplitude(i) - b.amplitude(i)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn cnot_ladder_conjugation_equals_zzz_exponential() {
        // CNOT(0 -> 2), CNOT(1 -> 2), R_z(theta) on 2, then the mirrored
        // ladder implements exp(-i Z(x)Z(x)Z theta/2).
        let theta = 0.913;
        let mut circuit = Circuit::new(3);
        circuit.append(gates::cnot(), vec![0, 2]).unwrap();
        circuit.append(gates::cnot(), vec![1, 2]).unwrap();
        circuit
            .append(gates::rotation(Pauli::Z, theta).unwrap(), vec![2])
            .unwrap();
        circuit.append(gates::cnot(), vec![1, 2]).unwrap();
        circuit.append(gates::cnot(), vec![0, 2]).unwrap();

        let zzz = linalg::pauli_word_matrix(&[Pauli::Z, Pauli::Z, Pauli::Z]);
        let expected = linalg::herm_exp(&zzz, theta / 2.0).unwrap();
        assert!(circuit
            .unitary()
            .unwrap()
            .approx_eq(&expected, Tolerance::new(1e-10).unwrap()));
    }
}
