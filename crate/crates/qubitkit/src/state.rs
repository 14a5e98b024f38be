//! State vectors over the computational basis.
//!
//! A register of n qubits is a vector of 2^n complex amplitudes. Basis
//! indices are big-endian: qubit 0 is the top wire of a diagram and the most
//! significant bit of an index, so |i₁…iₙ⟩ lives at Σ 2^(n-k)·iₖ and worked
//! examples written in ket notation transcribe directly into array slots.
//!
//! Normalization is validated, never silently enforced: channel math and
//! projections legitimately pass through unnormalized intermediates, so
//! constructors only reject non-finite amplitudes and a separate
//! [`StateVector::validate_normalized`] asserts the unit-norm invariant.

use crate::error::{Error, Result};
use crate::linalg::{Complex, Tolerance};
use crate::rng::SplitMix64;

/// Tolerance on Σ|α|² = 1 used by validation.
pub const NORM_EPS: f64 = 1e-9;

/// A 2^n-amplitude quantum state.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex>,
}

impl StateVector {
    /// Wrap raw amplitudes. The length must be 2^n for n >= 1 and every
    /// component finite; the norm is not checked here.
    pub fn new(amplitudes: Vec<Complex>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(len));
        }
        if amplitudes
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite("state amplitude"));
        }
        Ok(StateVector {
            num_qubits: len.trailing_zeros() as usize,
            amplitudes,
        })
    }

    /// |0…0⟩ on n qubits.
    pub fn zero(num_qubits: usize) -> Self {
        basis_state(num_qubits, 0).expect("label 0 is always in range")
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex] {
        &self.amplitudes
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex] {
        &mut self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex {
        self.amplitudes[index]
    }

    /// Euclidean norm of the amplitude vector.
    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Check Σ|α|² = 1 within [`NORM_EPS`].
    pub fn validate_normalized(&self) -> Result<()> {
        let sum: f64 = self.amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (sum - 1.0).abs() > NORM_EPS {
            return Err(Error::InvalidArgument(format!(
                "state is not normalized: sum of squared moduli is {sum}"
            )));
        }
        Ok(())
    }

    /// Bit of `index` belonging to `qubit` under the big-endian convention.
    pub fn bit_of(&self, index: usize, qubit: usize) -> usize {
        (index >> (self.num_qubits - 1 - qubit)) & 1
    }

    /// Uniformly random normalized state (Gaussian amplitudes, normalized).
    pub fn random(num_qubits: usize, rng: &mut SplitMix64) -> Self {
        let dim = 1usize << num_qubits;
        let mut amplitudes: Vec<Complex> = (0..dim)
            .map(|_| Complex::new(rng.next_gaussian(), rng.next_gaussian()))
            .collect();
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in &mut amplitudes {
            *z /= norm;
        }
        StateVector {
            num_qubits,
            amplitudes,
        }
    }
}

/// Basis label carried both as a bit string and as its decimal index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisLabel {
    /// Bits with index 0 the most significant (top wire).
    pub bits: Vec<u8>,
    /// Decimal value Σ 2^(n-k)·bₖ.
    pub decimal: usize,
}

impl BasisLabel {
    pub fn from_bits(bits: Vec<u8>) -> Result<Self> {
        let decimal = binary_to_decimal(&bits)?;
        Ok(BasisLabel { bits, decimal })
    }

    pub fn from_decimal(decimal: usize, n: usize) -> Result<Self> {
        let bits = decimal_to_binary(decimal, n)?;
        Ok(BasisLabel { bits, decimal })
    }
}

/// Decimal value of a big-endian bit string.
pub fn binary_to_decimal(bits: &[u8]) -> Result<usize> {
    if bits.is_empty() || bits.len() > usize::BITS as usize - 1 {
        return Err(Error::InvalidArgument(format!(
            "bit string length {} unsupported",
            bits.len()
        )));
    }
    let mut value = 0usize;
    for &b in bits {
        if b > 1 {
            return Err(Error::InvalidArgument(format!("bit value {b} not in {{0,1}}")));
        }
        value = (value << 1) | b as usize;
    }
    Ok(value)
}

/// Big-endian bit string of length n for a value in [0, 2^n).
pub fn decimal_to_binary(x: usize, n: usize) -> Result<Vec<u8>> {
    if n == 0 || n > usize::BITS as usize - 1 {
        return Err(Error::InvalidArgument(format!("bit width {n} unsupported")));
    }
    if x >= (1usize << n) {
        return Err(Error::InvalidArgument(format!(
            "{x} does not fit in {n} bits"
        )));
    }
    Ok((0..n).map(|k| ((x >> (n - 1 - k)) & 1) as u8).collect())
}

/// Computational basis state |label⟩ on n qubits.
pub fn basis_state(n: usize, label: usize) -> Result<StateVector> {
    if n == 0 {
        return Err(Error::InvalidArgument("need at least one qubit".into()));
    }
    let dim = 1usize
        .checked_shl(n as u32)
        .ok_or_else(|| Error::TooLarge(n, usize::BITS as usize - 1))?;
    if label >= dim {
        return Err(Error::IndexOutOfRange {
            index: label,
            num_qubits: n,
        });
    }
    let mut amplitudes = vec![Complex::new(0.0, 0.0); dim];
    amplitudes[label] = Complex::new(1.0, 0.0);
    Ok(StateVector {
        num_qubits: n,
        amplitudes,
    })
}

/// Polar and azimuthal angles of a single-qubit state on the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochAngles {
    /// Polar angle in [0, π].
    pub theta: f64,
    /// Azimuth in [0, 2π).
    pub phi: f64,
}

impl BlochAngles {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !phi.is_finite() {
            return Err(Error::NonFinite("Bloch angle"));
        }
        if !(0.0..=std::f64::consts::PI).contains(&theta) {
            return Err(Error::InvalidArgument(format!(
                "theta {theta} outside [0, pi]"
            )));
        }
        if !(0.0..2.0 * std::f64::consts::PI).contains(&phi) {
            return Err(Error::InvalidArgument(format!(
                "phi {phi} outside [0, 2pi)"
            )));
        }
        Ok(BlochAngles { theta, phi })
    }
}

/// cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩.
pub fn from_bloch(angles: BlochAngles) -> StateVector {
    let half = angles.theta / 2.0;
    StateVector {
        num_qubits: 1,
        amplitudes: vec![
            Complex::new(half.cos(), 0.0),
            Complex::from_polar(half.sin(), angles.phi),
        ],
    }
}

/// Invert the Bloch parametrization of a normalized single-qubit state.
///
/// The global phase is stripped so that the |0⟩ amplitude is real and
/// non-negative. At the poles (θ = 0 or π) the azimuth is physically
/// meaningless and comes back as 0 by convention.
pub fn to_bloch(state: &StateVector) -> Result<BlochAngles> {
    if state.num_qubits() != 1 {
        return Err(Error::DimensionMismatch(format!(
            "Bloch angles are defined for single qubits, got n = {}",
            state.num_qubits()
        )));
    }
    state.validate_normalized()?;
    let a0 = state.amplitude(0);
    let a1 = state.amplitude(1);
    // Strip the global phase so the |0> amplitude is real non-negative.
    let (r0, a1) = if a0.norm() >= 1e-15 {
        let phase = a0 / a0.norm();
        (a0.norm(), a1 * phase.conj())
    } else {
        (0.0, Complex::new(a1.norm(), 0.0))
    };
    let theta = 2.0 * r0.clamp(0.0, 1.0).acos();
    let at_pole = r0 < 1e-12 || a1.norm() < 1e-12;
    let phi = if at_pole {
        0.0
    } else {
        let mut phi = a1.arg();
        if phi < 0.0 {
            phi += 2.0 * std::f64::consts::PI;
        }
        // arg can round onto 2*pi itself.
        if phi >= 2.0 * std::f64::consts::PI {
            phi = 0.0;
        }
        phi
    };
    BlochAngles::new(theta.clamp(0.0, std::f64::consts::PI), phi)
}

/// Tensor product; `a` takes the more significant (top-wire) positions.
pub fn tensor(a: &StateVector, b: &StateVector) -> StateVector {
    let mut amplitudes = Vec::with_capacity(a.dim() * b.dim());
    for x in a.amplitudes() {
        for y in b.amplitudes() {
            amplitudes.push(x * y);
        }
    }
    StateVector {
        num_qubits: a.num_qubits() + b.num_qubits(),
        amplitudes,
    }
}

/// ⟨a|b⟩, conjugate-linear in the first argument.
pub fn inner_product(a: &StateVector, b: &StateVector) -> Result<Complex> {
    if a.num_qubits() != b.num_qubits() {
        return Err(Error::DimensionMismatch(format!(
            "inner product between {} and {} qubits",
            a.num_qubits(),
            b.num_qubits()
        )));
    }
    Ok(a.amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| x.conj() * y)
        .sum())
}

/// |⟨a|b⟩| — equals 1 exactly when the states agree up to a global phase.
pub fn fidelity_mod_phase(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(inner_product(a, b)?.norm())
}

/// Whether a 2-qubit state factors into two single-qubit states.
///
/// The 2x2 amplitude matrix (α₀₀ α₀₁; α₁₀ α₁₁) has rank one exactly when
/// the state is a product, so the determinant test |α₀₀α₁₁ − α₀₁α₁₀| ≤ eps
/// decides it.
pub fn is_product_bipartition(state: &StateVector, tol: Tolerance) -> Result<bool> {
    if state.num_qubits() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "bipartition test is defined for 2 qubits, got {}",
            state.num_qubits()
        )));
    }
    let a = state.amplitudes();
    let det = a[0] * a[3] - a[1] * a[2];
    Ok(det.norm() <= tol.eps)
}

/// Whether qubit `k` of an n-qubit state is unentangled from the rest.
///
/// Generalizes [`is_product_bipartition`]: the 2 x 2^(n-1) amplitude matrix
/// of the split must have rank one, i.e. all its 2x2 minors vanish.
pub fn is_product_split(state: &StateVector, qubit: usize, tol: Tolerance) -> Result<bool> {
    let n = state.num_qubits();
    if qubit >= n {
        return Err(Error::IndexOutOfRange {
            index: qubit,
            num_qubits: n,
        });
    }
    let rest = state.dim() / 2;
    // row r (this qubit's bit), column j (remaining bits in order).
    let entry = |r: usize, j: usize| -> Complex {
        let shift = n - 1 - qubit;
        let high = (j >> shift) << (shift + 1);
        let low = j & ((1 << shift) - 1);
        state.amplitude(high | (r << shift) | low)
    };
    for j1 in 0..rest {
        for j2 in (j1 + 1)..rest {
            let minor = entry(0, j1) * entry(1, j2) - entry(0, j2) * entry(1, j1);
            if minor.norm() > tol.eps {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
