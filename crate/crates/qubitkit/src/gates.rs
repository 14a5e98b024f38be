//! The gate catalog.
//!
//! Every gate is a [`GateDef`]: a named unitary matrix on k qubits, with any
//! real parameters kept alongside (unreduced — no mod-2π canonicalization,
//! equality is matrix-level). Controlled gates always place the control on
//! the new most-significant wire; putting a gate on arbitrary wires of a
//! register is the circuit engine's job, not a matrix permutation here.
//!
//! Mnemonics double as the circuit-file gate names:
//! `x y z h s t p rl rx ry rz cnot cz cu swap cswap ccnot`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use crate::error::{Error, Result};
use crate::linalg::{self, Complex, DenseMatrix, Pauli, Tolerance};

/// Unitarity bound every catalog gate satisfies.
pub const GATE_UNITARITY_EPS: f64 = 1e-12;

/// A named k-qubit unitary.
#[derive(Debug, Clone, PartialEq)]
pub struct GateDef {
    name: String,
    arity: usize,
    matrix: DenseMatrix,
    params: Vec<f64>,
}

impl GateDef {
    /// Wrap a matrix as a gate, checking shape and unitarity (1e-12).
    pub fn new(name: impl Into<String>, matrix: DenseMatrix, params: Vec<f64>) -> Result<Self> {
        let dim = matrix.rows();
        if !matrix.is_square() || !dim.is_power_of_two() || dim < 2 {
            return Err(Error::DimensionMismatch(format!(
                "gate matrix must be 2^k x 2^k with k >= 1, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        if !linalg::is_unitary(&matrix, Tolerance::new(GATE_UNITARITY_EPS)?)? {
            return Err(Error::NotUnitary(GATE_UNITARITY_EPS));
        }
        Ok(GateDef {
            name: name.into(),
            arity: dim.trailing_zeros() as usize,
            matrix,
            params,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Number of qubits the gate acts on.
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.matrix
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    /// The inverse gate (conjugate transpose of the matrix).
    pub fn dagger(&self) -> GateDef {
        GateDef {
            name: format!("{}†", self.name),
            arity: self.arity,
            matrix: linalg::dagger(&self.matrix),
            params: self.params.clone(),
        }
    }

    /// Matrix power by repeated multiplication (exponent >= 0).
    pub fn pow(&self, exponent: u32) -> GateDef {
        let mut m = DenseMatrix::identity(self.matrix.rows());
        for _ in 0..exponent {
            m = m.matmul(&self.matrix).unwrap();
        }
        GateDef {
            name: format!("{}^{exponent}", self.name),
            arity: self.arity,
            matrix: m,
            params: self.params.clone(),
        }
    }
}

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

/// The 2x2 identity as a gate.
pub fn identity() -> GateDef {
    GateDef::new("id", DenseMatrix::identity(2), vec![]).unwrap()
}

/// Pauli gate along the given axis.
pub fn pauli(axis: Pauli) -> GateDef {
    let name = match axis {
        Pauli::I => "id",
        Pauli::X => "x",
        Pauli::Y => "y",
        Pauli::Z => "z",
    };
    GateDef::new(name, axis.matrix(), vec![]).unwrap()
}

/// Hadamard gate, 1/√2 [[1, 1], [1, −1]].
pub fn hadamard() -> GateDef {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let m = DenseMatrix::new(2, 2, vec![c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)]).unwrap();
    GateDef::new("h", m, vec![]).unwrap()
}

/// Relative phase gate P(φ) = diag(1, e^{iφ}).
pub fn phase(phi: f64) -> GateDef {
    let m = DenseMatrix::new(
        2,
        2,
        vec![
            c(1.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            Complex::from_polar(1.0, phi),
        ],
    )
    .unwrap();
    GateDef::new("p", m, vec![phi]).unwrap()
}

/// S = P(π/2).
pub fn s() -> GateDef {
    GateDef::new("s", phase(FRAC_PI_2).matrix().clone(), vec![]).unwrap()
}

/// T = P(π/4).
pub fn t() -> GateDef {
    GateDef::new("t", phase(FRAC_PI_4).matrix().clone(), vec![]).unwrap()
}

/// R_l = diag(1, e^{2πi/2^l}), acting as R_l|j⟩ = e^{(2πi/2^l)j}|j⟩.
pub fn r_l(l: u32) -> Result<GateDef> {
    if l < 1 {
        return Err(Error::InvalidArgument(
            "R_l requires l >= 1 (l = 1 is Z, l = 2 is S, ...)".into(),
        ));
    }
    let phi = 2.0 * PI / (1u64 << l) as f64;
    let m = DenseMatrix::new(
        2,
        2,
        vec![
            c(1.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            Complex::from_polar(1.0, phi),
        ],
    )
    .unwrap();
    GateDef::new("rl", m, vec![l as f64])
}

/// Rotation about a Pauli axis: R_a(θ) = cos(θ/2) I − i sin(θ/2) σ_a.
pub fn rotation(axis: Pauli, angle: f64) -> Result<GateDef> {
    if axis == Pauli::I {
        return Err(Error::InvalidArgument(
            "rotation axis must be X, Y or Z".into(),
        ));
    }
    let (half_cos, half_sin) = ((angle / 2.0).cos(), (angle / 2.0).sin());
    let m = DenseMatrix::identity(2)
        .scale(c(half_cos, 0.0))
        .add(&axis.matrix().scale(c(0.0, -half_sin)))?;
    let name = match axis {
        Pauli::X => "rx",
        Pauli::Y => "ry",
        Pauli::Z => "rz",
        Pauli::I => unreachable!(),
    };
    GateDef::new(name, m, vec![angle])
}

/// Rotation about an arbitrary unit axis on the Bloch sphere:
/// R_n̂(θ) = cos(θ/2) I − i sin(θ/2) (n̂·σ).
pub fn rotation_n(nx: f64, ny: f64, nz: f64, angle: f64) -> Result<GateDef> {
    let norm = (nx * nx + ny * ny + nz * nz).sqrt();
    if !norm.is_finite() || (norm - 1.0).abs() > 1e-9 {
        return Err(Error::NonUnitAxis(norm));
    }
    let n_dot_sigma = Pauli::X
        .matrix()
        .scale(c(nx, 0.0))
        .add(&Pauli::Y.matrix().scale(c(ny, 0.0)))?
        .add(&Pauli::Z.matrix().scale(c(nz, 0.0)))?;
    let (half_cos, half_sin) = ((angle / 2.0).cos(), (angle / 2.0).sin());
    let m = DenseMatrix::identity(2)
        .scale(c(half_cos, 0.0))
        .add(&n_dot_sigma.scale(c(0.0, -half_sin)))?;
    GateDef::new("rn", m, vec![nx, ny, nz, angle])
}

/// Promote `u` to a controlled gate with the control on the new top wire.
///
/// `active = 1` applies `u` when the control is |1⟩ (block-diag(I, U));
/// `active = 0` is the controlled-V convention (block-diag(U, I)).
pub fn controlled(u: &GateDef, active: u8) -> Result<GateDef> {
    if active > 1 {
        return Err(Error::InvalidArgument(format!(
            "control activation must be 0 or 1, got {active}"
        )));
    }
    let d = u.matrix().rows();
    let m = DenseMatrix::from_fn(2 * d, 2 * d, |r, col| {
        let (rb, cb) = (r / d, col / d);
        if rb != cb {
            c(0.0, 0.0)
        } else if rb == active as usize {
            u.matrix().get(r % d, col % d)
        } else if r == col {
            c(1.0, 0.0)
        } else {
            c(0.0, 0.0)
        }
    });
    let name = if active == 1 {
        format!("c{}", u.name())
    } else {
        format!("c0{}", u.name())
    };
    GateDef::new(name, m, u.params().to_vec())
}

/// CNOT (controlled-X); |i⟩|j⟩ → |i⟩|j⊕i⟩.
pub fn cnot() -> GateDef {
    let mut g = controlled(&pauli(Pauli::X), 1).unwrap();
    g.name = "cnot".into();
    g
}

/// Controlled-Z.
pub fn cz() -> GateDef {
    let mut g = controlled(&pauli(Pauli::Z), 1).unwrap();
    g.name = "cz".into();
    g
}

/// SWAP; |u⟩|b⟩ → |b⟩|u⟩.
pub fn swap() -> GateDef {
    let mut m = DenseMatrix::zeros(4, 4);
    m.set(0, 0, c(1.0, 0.0));
    m.set(1, 2, c(1.0, 0.0));
    m.set(2, 1, c(1.0, 0.0));
    m.set(3, 3, c(1.0, 0.0));
    GateDef::new("swap", m, vec![]).unwrap()
}

/// Controlled-SWAP (Fredkin).
pub fn cswap() -> GateDef {
    let mut g = controlled(&swap(), 1).unwrap();
    g.name = "cswap".into();
    g
}

/// Toffoli (CCNOT); |i⟩|j⟩|k⟩ → |i⟩|j⟩|k ⊕ ij⟩.
pub fn toffoli() -> GateDef {
    let mut g = controlled(&cnot(), 1).unwrap();
    g.name = "ccnot".into();
    g
}

/// Look up a fixed multi-qubit gate by its catalog name.
pub fn named_gate(name: &str) -> Result<GateDef> {
    match name {
        "cnot" => Ok(cnot()),
        "cz" => Ok(cz()),
        "swap" => Ok(swap()),
        "cswap" => Ok(cswap()),
        "ccnot" | "toffoli" => Ok(toffoli()),
        other => Err(Error::InvalidArgument(format!("unknown gate `{other}`"))),
    }
}

/// Every fixed (parameter-free) gate in the catalog, for sweep tests.
pub fn catalog() -> Vec<GateDef> {
    vec![
        identity(),
        pauli(Pauli::X),
        pauli(Pauli::Y),
        pauli(Pauli::Z),
        hadamard(),
        s(),
        t(),
        cnot(),
        cz(),
        swap(),
        cswap(),
        toffoli(),
    ]
}
