//! Dense complex matrices and the reference linear algebra.
//!
//! Everything here is small and exact-minded: row-major storage, no sparse
//! paths, explicit tolerances. The rest of the crate treats these routines
//! as the ground truth its fast kernels are checked against.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::rng::SplitMix64;

/// Complex scalar used everywhere in the crate.
pub type Complex = num_complex::Complex64;

/// Absolute tolerance for approximate matrix/vector comparisons.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub eps: f64,
}

impl Tolerance {
    /// A tolerance must be strictly positive and finite.
    pub fn new(eps: f64) -> Result<Self> {
        if !(eps > 0.0) || !eps.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "tolerance must be a positive finite real, got {eps}"
            )));
        }
        Ok(Tolerance { eps })
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { eps: 1e-10 }
    }
}

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex>,
}

impl DenseMatrix {
    /// Build a matrix from row-major entries.
    ///
    /// Rejects empty shapes, length mismatches and non-finite entries; this
    /// is the choke point that keeps NaN/Inf out of the whole crate.
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidArgument(
                "matrix dimensions must be at least 1x1".into(),
            ));
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("matrix entry"));
        }
        Ok(DenseMatrix { rows, cols, entries })
    }

    /// Build from a closure over (row, col).
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        DenseMatrix { rows, cols, entries }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            entries: vec![Complex::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| {
            if r == c {
                Complex::new(1.0, 0.0)
            } else {
                Complex::new(0.0, 0.0)
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Complex {
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Complex) {
        self.entries[r * self.cols + c] = v;
    }

    /// Row-major view of the entries.
    pub fn entries(&self) -> &[Complex] {
        &self.entries
    }

    /// Matrix product `self * other`.
    pub fn matmul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == Complex::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..other.cols {
                    let v = out.get(r, c) + a * other.get(k, c);
                    out.set(r, c, v);
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product.
    pub fn matvec(&self, v: &[Complex]) -> Result<Vec<Complex>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch(format!(
                "cannot apply {}x{} to a vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let mut out = vec![Complex::new(0.0, 0.0); self.rows];
        for r in 0..self.rows {
            let mut acc = Complex::new(0.0, 0.0);
            for c in 0..self.cols {
                acc += self.get(r, c) * v[c];
            }
            out[r] = acc;
        }
        Ok(out)
    }

    pub fn scale(&self, s: Complex) -> DenseMatrix {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        self.add(&other.scale(Complex::new(-1.0, 0.0)))
    }

    /// Largest entrywise modulus, the norm behind all matrix comparisons.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Max-entry distance to another matrix of the same shape.
    pub fn max_diff(&self, other: &DenseMatrix) -> Result<f64> {
        Ok(self.sub(other)?.max_abs())
    }

    /// Entrywise approximate equality under `tol`.
    pub fn approx_eq(&self, other: &DenseMatrix, tol: Tolerance) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.max_diff(other).unwrap() <= tol.eps
    }

    pub fn trace(&self) -> Complex {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    /// Whether `self` equals its own adjoint within `tol`.
    pub fn is_hermitian(&self, tol: Tolerance) -> bool {
        self.is_square() && self.approx_eq(&dagger(self), tol)
    }

    /// Random unitary drawn from the Haar-like Gram-Schmidt construction:
    /// a Ginibre matrix with orthonormalized columns. Testing aid.
    pub fn random_unitary(n: usize, rng: &mut SplitMix64) -> DenseMatrix {
        loop {
            let g = DenseMatrix::from_fn(n, n, |_, _| {
                Complex::new(rng.next_gaussian(), rng.next_gaussian())
            });
            if let Some(u) = gram_schmidt_columns(&g) {
                return u;
            }
        }
    }
}

impl fmt::Display for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            for c in 0..self.cols {
                let z = self.get(r, c);
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Orthonormalize the columns of `m`; `None` if a column collapses.
fn gram_schmidt_columns(m: &DenseMatrix) -> Option<DenseMatrix> {
    let n = m.rows();
    let mut cols: Vec<Vec<Complex>> = (0..n).map(|c| (0..n).map(|r| m.get(r, c)).collect()).collect();
    for j in 0..n {
        for k in 0..j {
            let proj: Complex = (0..n).map(|i| cols[k][i].conj() * cols[j][i]).sum();
            for i in 0..n {
                let correction = proj * cols[k][i];
                cols[j][i] -= correction;
            }
        }
        let norm: f64 = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            return None;
        }
        for z in &mut cols[j] {
            *z /= norm;
        }
    }
    Some(DenseMatrix::from_fn(n, n, |r, c| cols[c][r]))
}

/// Max-entry distance between `a` and `e^{iφ} b` for the best global phase
/// φ, fixed by the largest-modulus entry of `a`. Compares unitaries that
/// are only defined up to a global phase.
pub fn phase_aligned_max_diff(a: &DenseMatrix, b: &DenseMatrix) -> Result<f64> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::DimensionMismatch(format!(
            "cannot compare {}x{} with {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let mut pivot = (0usize, 0usize);
    let mut best = 0.0f64;
    for r in 0..a.rows() {
        for c in 0..a.cols() {
            let m = a.get(r, c).norm();
            if m > best {
                best = m;
                pivot = (r, c);
            }
        }
    }
    if best == 0.0 {
        return a.max_diff(b);
    }
    let ratio = b.get(pivot.0, pivot.1) / a.get(pivot.0, pivot.1);
    if ratio.norm() == 0.0 {
        return a.max_diff(b);
    }
    let phase = ratio / ratio.norm();
    a.scale(phase).max_diff(b)
}

/// Kronecker product. Block (i, j) of the result is `a[i][j] * b`.
pub fn kron(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    DenseMatrix::from_fn(a.rows() * b.rows(), a.cols() * b.cols(), |r, c| {
        a.get(r / b.rows(), c / b.cols()) * b.get(r % b.rows(), c % b.cols())
    })
}

/// Conjugate transpose.
pub fn dagger(a: &DenseMatrix) -> DenseMatrix {
    DenseMatrix::from_fn(a.cols(), a.rows(), |r, c| a.get(c, r).conj())
}

/// True iff `a · a† = I` within `tol` in the max-entry norm.
pub fn is_unitary(a: &DenseMatrix, tol: Tolerance) -> Result<bool> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let product = a.matmul(&dagger(a))?;
    Ok(product.max_diff(&DenseMatrix::identity(a.rows()))? <= tol.eps)
}

/// Hermiticity tolerance used by [`herm_exp`].
const HERMITICITY_EPS: f64 = 1e-9;

/// Unitary `exp(-i h t)` of a Hermitian matrix, via eigendecomposition.
///
/// Diagonalizing keeps the result unitary up to rounding, which a truncated
/// series would not. Rejects inputs that are not Hermitian within 1e-9.
pub fn herm_exp(h: &DenseMatrix, t: f64) -> Result<DenseMatrix> {
    if !h.is_square() {
        return Err(Error::NotSquare {
            rows: h.rows(),
            cols: h.cols(),
        });
    }
    if !h.is_hermitian(Tolerance::new(HERMITICITY_EPS)?) {
        return Err(Error::NotHermitian(HERMITICITY_EPS));
    }
    if !t.is_finite() {
        return Err(Error::NonFinite("evolution time"));
    }
    let n = h.rows();
    let (eigenvalues, eigenvectors) = hermitian_eigen(h);
    // exp(-i h t) = V diag(exp(-i lambda_k t)) V^dagger
    let mut out = DenseMatrix::zeros(n, n);
    for k in 0..n {
        let phase = Complex::from_polar(1.0, -eigenvalues[k] * t);
        for r in 0..n {
            for c in 0..n {
                let v = out.get(r, c) + phase * eigenvectors.get(r, k) * eigenvectors.get(c, k).conj();
                out.set(r, c, v);
            }
        }
    }
    Ok(out)
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(h: &DenseMatrix) -> Vec<f64> {
    let mut vals = hermitian_eigen(h).0;
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    vals
}

/// Hermitian eigendecomposition, delegated to nalgebra.
fn hermitian_eigen(h: &DenseMatrix) -> (Vec<f64>, DenseMatrix) {
    let n = h.rows();
    let na = nalgebra::DMatrix::from_fn(n, n, |r, c| h.get(r, c));
    let decomposition = na.symmetric_eigen();
    let values: Vec<f64> = decomposition.eigenvalues.iter().copied().collect();
    let vectors = DenseMatrix::from_fn(n, n, |r, c| decomposition.eigenvectors[(r, c)]);
    (values, vectors)
}

/// Single-qubit Pauli letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    /// The 2x2 matrix of this letter.
    pub fn matrix(self) -> DenseMatrix {
        let (o, l) = (Complex::new(0.0, 0.0), Complex::new(1.0, 0.0));
        let i = Complex::new(0.0, 1.0);
        let entries = match self {
            Pauli::I => vec![l, o, o, l],
            Pauli::X => vec![o, l, l, o],
            Pauli::Y => vec![o, -i, i, o],
            Pauli::Z => vec![l, o, o, -l],
        };
        DenseMatrix::new(2, 2, entries).unwrap()
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_symbol(ch: char) -> Result<Self> {
        match ch.to_ascii_uppercase() {
            'I' => Ok(Pauli::I),
            'X' => Ok(Pauli::X),
            'Y' => Ok(Pauli::Y),
            'Z' => Ok(Pauli::Z),
            other => Err(Error::InvalidArgument(format!(
                "unknown Pauli letter `{other}`"
            ))),
        }
    }

    // Sparse action on a basis bit: (output bit, amplitude factor).
    fn column_action(self, bit: usize) -> (usize, Complex) {
        match self {
            Pauli::I => (bit, Complex::new(1.0, 0.0)),
            Pauli::X => (1 - bit, Complex::new(1.0, 0.0)),
            // Y|0> = i|1>, Y|1> = -i|0>
            Pauli::Y => (1 - bit, Complex::new(0.0, if bit == 0 { 1.0 } else { -1.0 })),
            Pauli::Z => (bit, Complex::new(if bit == 0 { 1.0 } else { -1.0 }, 0.0)),
        }
    }
}

/// Expand a Pauli word like "XZI" into its Kronecker-product matrix.
pub fn pauli_word_matrix(word: &[Pauli]) -> DenseMatrix {
    let mut m = word[0].matrix();
    for letter in &word[1..] {
        m = kron(&m, &letter.matrix());
    }
    m
}

/// Decompose a 2^n x 2^n matrix over the Pauli word basis.
///
/// Returns every coefficient h_w = tr(sigma_w^dagger m) / 2^n keyed by the
/// letter string; the sum of h_w * sigma_w reconstructs `m` exactly (up to
/// rounding), and the coefficients are real precisely when `m` is Hermitian.
pub fn pauli_decompose(m: &DenseMatrix) -> Result<BTreeMap<String, Complex>> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let dim = m.rows();
    if !dim.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(dim));
    }
    let n = dim.trailing_zeros() as usize;
    if n == 0 {
        return Err(Error::NotPowerOfTwo(dim));
    }

    let mut coefficients = BTreeMap::new();
    let mut word = vec![Pauli::I; n];
    decompose_recursive(m, n, 0, &mut word, &mut coefficients);
    Ok(coefficients)
}

fn decompose_recursive(
    m: &DenseMatrix,
    n: usize,
    pos: usize,
    word: &mut Vec<Pauli>,
    out: &mut BTreeMap<String, Complex>,
) {
    if pos == n {
        let dim = 1usize << n;
        // Pauli words have exactly one nonzero per column: sigma|c> =
        // factor(c) |row(c)>, so tr(sigma^dagger m) collapses to a single
        // sum over columns.
        let mut trace = Complex::new(0.0, 0.0);
        for col in 0..dim {
            let mut row = 0usize;
            let mut val = Complex::new(1.0, 0.0);
            for (k, letter) in word.iter().enumerate() {
                let bit = (col >> (n - 1 - k)) & 1;
                let (out_bit, factor) = letter.column_action(bit);
                row |= out_bit << (n - 1 - k);
                val *= factor;
            }
            trace += val.conj() * m.get(row, col);
        }
        let coefficient = trace / Complex::new(dim as f64, 0.0);
        out.insert(word.iter().map(|p| p.symbol()).collect(), coefficient);
        return;
    }
    for letter in Pauli::ALL {
        word[pos] = letter;
        decompose_recursive(m, n, pos + 1, word, out);
    }
    word[pos] = Pauli::I;
}

/// Reconstruct a matrix from Pauli-word coefficients.
pub fn pauli_reconstruct(n: usize, coefficients: &BTreeMap<String, Complex>) -> Result<DenseMatrix> {
    let dim = 1usize << n;
    let mut out = DenseMatrix::zeros(dim, dim);
    for (word, &coefficient) in coefficients {
        if word.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "Pauli word `{word}` has length {} but n = {n}",
                word.len()
            )));
        }
        let letters: Vec<Pauli> = word
            .chars()
            .map(Pauli::from_symbol)
            .collect::<Result<_>>()?;
        out = out.add(&pauli_word_matrix(&letters).scale(coefficient))?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn hadamard() -> DenseMatrix {
        let s = 1.0 / 2f64.sqrt();
        DenseMatrix::new(2, 2, vec![c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)]).unwrap()
    }

    #[test]
    fn kron_identities() {
        let i2 = DenseMatrix::identity(2);
        assert!(kron(&i2, &i2).approx_eq(&DenseMatrix::identity(4), Tolerance::default()));
    }

    #[test]
    fn kron_x_with_x_is_antidiagonal() {
        // Expanding the block formula by hand: X (x) X has ones exactly on
        // the anti-diagonal of the 4x4 matrix.
        let x = Pauli::X.matrix();
        let xx = kron(&x, &x);
        for r in 0..4 {
            for col in 0..4 {
                let expected = if r + col == 3 { 1.0 } else { 0.0 };
                assert!((xx.get(r, col) - c(expected, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn kron_block_structure() {
        // [[a11,a12],[a21,a22]] (x) B has block (i,j) = a_ij B.
        let a = DenseMatrix::new(2, 2, vec![c(1.0, 1.0), c(2.0, 0.0), c(0.0, -1.0), c(3.0, 0.5)])
            .unwrap();
        let b = DenseMatrix::new(2, 2, vec![c(5.0, 0.0), c(0.0, 2.0), c(-1.0, 0.0), c(4.0, 4.0)])
            .unwrap();
        let k = kron(&a, &b);
        for (bi, bj) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            for r in 0..2 {
                for col in 0..2 {
                    let expected = a.get(bi, bj) * b.get(r, col);
                    assert_eq!(k.get(2 * bi + r, 2 * bj + col), expected);
                }
            }
        }
    }

    #[test]
    fn kron_is_associative() {
        // Exact equality of entries, on matrices whose entry products are
        // exactly representable (small Gaussian integers).
        let mut rng = SplitMix64::new(11);
        for _ in 0..20 {
            let mut small = |_r: usize, _c: usize| {
                let re = (rng.next_u64() % 5) as f64 - 2.0;
                let im = (rng.next_u64() % 5) as f64 - 2.0;
                c(re, im)
            };
            let a = DenseMatrix::from_fn(2, 2, &mut small);
            let b = DenseMatrix::from_fn(2, 2, &mut small);
            let d = DenseMatrix::from_fn(2, 2, &mut small);
            assert_eq!(kron(&kron(&a, &b), &d), kron(&a, &kron(&b, &d)));
        }
        // Catalog-style entries (0, +-1, +-i, 1/sqrt2) stay exact too.
        let (x, y, h) = (Pauli::X.matrix(), Pauli::Y.matrix(), hadamard());
        assert_eq!(kron(&kron(&x, &y), &h), kron(&x, &kron(&y, &h)));
    }

    #[test]
    fn dagger_of_hermitian_pauli() {
        let y = Pauli::Y.matrix();
        assert!(dagger(&y).approx_eq(&y, Tolerance::default()));
    }

    #[test]
    fn dagger_conjugates_diagonal() {
        let s = DenseMatrix::new(2, 2, vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)])
            .unwrap();
        let sd = dagger(&s);
        assert_eq!(sd.get(1, 1), c(0.0, -1.0));
        assert_eq!(dagger(&sd), s); // involution, exactly
    }

    #[test]
    fn dagger_identity() {
        let i = DenseMatrix::identity(3);
        assert_eq!(dagger(&i), i);
    }

    #[test]
    fn unitarity_checks() {
        assert!(is_unitary(&hadamard(), Tolerance::new(1e-12).unwrap()).unwrap());
        let scaled =
            DenseMatrix::new(2, 2, vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)])
                .unwrap();
        assert!(!is_unitary(&scaled, Tolerance::default()).unwrap());
        let rect = DenseMatrix::zeros(2, 3);
        assert!(is_unitary(&rect, Tolerance::default()).is_err());
    }

    #[test]
    fn kron_of_unitaries_is_unitary() {
        let mut rng = SplitMix64::new(5);
        for _ in 0..20 {
            let u = DenseMatrix::random_unitary(2, &mut rng);
            let v = DenseMatrix::random_unitary(4, &mut rng);
            assert!(is_unitary(&kron(&u, &v), Tolerance::new(1e-9).unwrap()).unwrap());
        }
    }

    #[test]
    fn herm_exp_of_z_is_diagonal_phases() {
        let t = 0.7311;
        let u = herm_exp(&Pauli::Z.matrix(), t).unwrap();
        let expected = DenseMatrix::new(
            2,
            2,
            vec![
                Complex::from_polar(1.0, -t),
                c(0.0, 0.0),
                c(0.0, 0.0),
                Complex::from_polar(1.0, t),
            ],
        )
        .unwrap();
        assert!(u.max_diff(&expected).unwrap() < 1e-12);
    }

    #[test]
    fn herm_exp_at_zero_time_is_identity() {
        let mut rng = SplitMix64::new(17);
        let u = DenseMatrix::random_unitary(4, &mut rng);
        // Build a random Hermitian matrix u D u^dagger.
        let d = DenseMatrix::from_fn(4, 4, |r, col| {
            if r == col {
                c(rng.next_gaussian(), 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        let h = u.matmul(&d).unwrap().matmul(&dagger(&u)).unwrap();
        let e = herm_exp(&h, 0.0).unwrap();
        assert!(e.max_diff(&DenseMatrix::identity(4)).unwrap() < 1e-12);
    }

    #[test]
    fn herm_exp_matches_trig_form_for_paulis() {
        // exp(-i sigma_a t) = cos(t) I - i sin(t) sigma_a
        let t = 1.234;
        for p in [Pauli::X, Pauli::Y, Pauli::Z] {
            let u = herm_exp(&p.matrix(), t).unwrap();
            let expected = DenseMatrix::identity(2)
                .scale(c(t.cos(), 0.0))
                .add(&p.matrix().scale(c(0.0, -t.sin())))
                .unwrap();
            assert!(u.max_diff(&expected).unwrap() < 1e-12);
        }
    }

    #[test]
    fn herm_exp_result_is_unitary() {
        let mut rng = SplitMix64::new(23);
        for _ in 0..10 {
            let g = DenseMatrix::from_fn(4, 4, |_, _| c(rng.next_gaussian(), rng.next_gaussian()));
            let h = g.add(&dagger(&g)).unwrap().scale(c(0.5, 0.0));
            let u = herm_exp(&h, 0.83).unwrap();
            assert!(is_unitary(&u, Tolerance::new(1e-9).unwrap()).unwrap());
        }
    }

    #[test]
    fn herm_exp_is_a_one_parameter_group() {
        let mut rng = SplitMix64::new(29);
        let g = DenseMatrix::from_fn(4, 4, |_, _| c(rng.next_gaussian(), rng.next_gaussian()));
        let h = g.add(&dagger(&g)).unwrap().scale(c(0.5, 0.0));
        let (t1, t2) = (0.31, 1.27);
        let product = herm_exp(&h, t1).unwrap().matmul(&herm_exp(&h, t2).unwrap()).unwrap();
        let direct = herm_exp(&h, t1 + t2).unwrap();
        assert!(product.max_diff(&direct).unwrap() < 1e-9);
    }

    #[test]
    fn herm_exp_rejects_non_hermitian() {
        let m = DenseMatrix::new(2, 2, vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)])
            .unwrap();
        assert!(matches!(herm_exp(&m, 1.0), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn pauli_decompose_basis_elements() {
        let z = pauli_decompose(&Pauli::Z.matrix()).unwrap();
        for (word, v) in &z {
            let expected = if word == "Z" { 1.0 } else { 0.0 };
            assert!((v - c(expected, 0.0)).norm() < 1e-15, "word {word}");
        }

        let zz = pauli_decompose(&pauli_word_matrix(&[Pauli::Z, Pauli::Z])).unwrap();
        for (word, v) in &zz {
            let expected = if word == "ZZ" { 1.0 } else { 0.0 };
            assert!((v - c(expected, 0.0)).norm() < 1e-15, "word {word}");
        }
    }

    #[test]
    fn pauli_decompose_round_trips_random_hermitian() {
        let mut rng = SplitMix64::new(31);
        for _ in 0..10 {
            let g = DenseMatrix::from_fn(4, 4, |_, _| c(rng.next_gaussian(), rng.next_gaussian()));
            let h = g.add(&dagger(&g)).unwrap().scale(c(0.5, 0.0));
            let coefficients = pauli_decompose(&h).unwrap();
            for v in coefficients.values() {
                assert!(v.im.abs() < 1e-12, "Hermitian input must give real coefficients");
            }
            let rebuilt = pauli_reconstruct(2, &coefficients).unwrap();
            assert!(rebuilt.max_diff(&h).unwrap() < 1e-12);
        }
    }

    #[test]
    fn pauli_decompose_round_trips_random_general() {
        let mut rng = SplitMix64::new(37);
        let m = DenseMatrix::from_fn(8, 8, |_, _| c(rng.next_gaussian(), rng.next_gaussian()));
        let rebuilt = pauli_reconstruct(3, &pauli_decompose(&m).unwrap()).unwrap();
        assert!(rebuilt.max_diff(&m).unwrap() < 1e-12);
    }

    #[test]
    fn pauli_decompose_rejects_bad_dims() {
        let m = DenseMatrix::zeros(3, 3);
        assert!(matches!(pauli_decompose(&m), Err(Error::NotPowerOfTwo(3))));
    }

    #[test]
    fn constructor_rejects_non_finite() {
        let bad = DenseMatrix::new(1, 1, vec![c(f64::NAN, 0.0)]);
        assert!(matches!(bad, Err(Error::NonFinite(_))));
    }

    #[test]
    fn tolerance_must_be_positive() {
        assert!(Tolerance::new(0.0).is_err());
        assert!(Tolerance::new(-1e-3).is_err());
        assert_eq!(Tolerance::default().eps, 1e-10);
    }
}
