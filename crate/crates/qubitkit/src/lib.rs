//! An exact state-vector simulator for small quantum circuits.
//!
//! qubitkit keeps the full 2^n-amplitude state vector of an n-qubit register
//! and applies gates with a bit-indexed kernel, so every probability it
//! reports is exact up to floating-point rounding. The crate covers:
//!
//! - dense complex matrix primitives ([`linalg`]): Kronecker products,
//!   adjoints, Hermitian exponentials and Pauli decompositions;
//! - state vectors with Bloch-sphere parametrization and entanglement
//!   checks ([`state`]);
//! - the standard gate catalog plus a generic controlled-gate constructor
//!   ([`gates`]);
//! - a circuit IR and the gate-application engine ([`circuit`]);
//! - projective measurement with deterministic, seedable sampling
//!   ([`measure`]);
//! - textbook algorithms: Deutsch and Deutsch-Jozsa, Bell states,
//!   superdense coding, teleportation, Hadamard/swap tests, phase
//!   estimation, the QFT and a fixed N=15 period-finding instance
//!   ([`algorithms`]);
//! - Pauli-sum Hamiltonians with exact and first-order Trotterized
//!   evolution ([`hamsim`]);
//! - the three-qubit bit-flip code and density-matrix noise channels
//!   ([`qec`]);
//! - a line-oriented circuit file format and report emitters ([`cli`]).
//!
//! # Conventions
//!
//! Qubit 0 is the top wire of a circuit diagram and the **most significant
//! bit** of a basis index: the basis state |i₁…iₙ⟩ sits at index
//! Σ 2^(n-k)·iₖ. Circuit operations listed left to right execute first to
//! last. All randomness flows through the [`rng::SplitMix64`] generator, so
//! fixed seeds reproduce histograms bit-for-bit on every platform.
//!
//! # Example
//!
//! ```
//! use qubitkit::circuit::{Circuit, CircuitOp};
//! use qubitkit::gates;
//! use qubitkit::measure;
//! use qubitkit::state::StateVector;
//!
//! // Prepare the Bell state (|00> + |11>)/sqrt(2).
//! let mut circuit = Circuit::new(2);
//! circuit.push(CircuitOp::new(gates::hadamard(), vec![0]).unwrap());
//! circuit.push(CircuitOp::new(gates::cnot(), vec![0, 1]).unwrap());
//!
//! let out = circuit.apply(&StateVector::zero(2)).unwrap();
//! let probs = measure::probabilities(&out);
//! assert!((probs[0] - 0.5).abs() < 1e-12);
//! assert!((probs[3] - 0.5).abs() < 1e-12);
//! ```

pub mod algorithms;
pub mod circuit;
pub mod cli;
pub mod error;
pub mod gates;
pub mod hamsim;
pub mod linalg;
pub mod measure;
pub mod qec;
pub mod rng;
pub mod state;

pub use error::{Error, Result};
pub use linalg::{Complex, DenseMatrix, Tolerance};
pub use state::StateVector;
