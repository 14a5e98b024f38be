//! Error type shared by all modules.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong inside the library.
///
/// Parse errors carry source positions and live in their own variant so the
/// command-line frontend can map them to a distinct exit code.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("{0} qubits exceed the dense-representation guard of {1}")]
    TooLarge(usize, usize),

    #[error("matrix is not Hermitian within tolerance {0:e}")]
    NotHermitian(f64),

    #[error("matrix is not unitary within tolerance {0:e}")]
    NotUnitary(f64),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("qubit index {index} out of range for {num_qubits} qubits")]
    IndexOutOfRange { index: usize, num_qubits: usize },

    #[error("duplicate target qubit {0}")]
    DuplicateTarget(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("rotation axis must have unit norm (got {0})")]
    NonUnitAxis(f64),

    #[error("oracle table is neither constant nor balanced")]
    PromiseViolation,

    #[error("state is not an eigenstate of the gate within tolerance")]
    NotAnEigenstate,

    #[error("{a} and {n} are not coprime")]
    NotCoprime { a: u64, n: u64 },

    #[error("period finding failed: {reason} (period {period})")]
    MethodFailure { period: u64, reason: String },

    #[error("state is outside the single-flip code space")]
    OutOfCodeSpace,

    #[error("ancilla wires are not |00> (decode requires a corrected state)")]
    AncillasNotClear,

    #[error("channel is not trace preserving within tolerance {0:e}")]
    NotTracePreserving(f64),

    #[error("{0}")]
    Parse(#[from] ParseError),
}

/// A circuit-file diagnostic with its source position.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{line}:{col}: {kind}")]
pub struct ParseError {
    /// 1-based source line.
    pub line: usize,
    /// 1-based source column.
    pub col: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseErrorKind {
    #[error("missing `qubits <n>` header")]
    MissingHeader,

    #[error("unknown mnemonic `{0}`")]
    UnknownMnemonic(String),

    #[error("`{mnemonic}` expects {expected} qubit index(es), got {got}")]
    ArityMismatch {
        mnemonic: String,
        expected: usize,
        got: usize,
    },

    #[error("`{mnemonic}` expects {expected} parameter(s), got {got}")]
    ParamCountMismatch {
        mnemonic: String,
        expected: usize,
        got: usize,
    },

    #[error("qubit index {index} out of range for {num_qubits} qubits")]
    IndexOutOfRange { index: usize, num_qubits: usize },

    #[error("duplicate qubit index {0}")]
    DuplicateIndex(usize),

    #[error("malformed number `{0}`")]
    MalformedNumber(String),

    #[error("malformed truth table `{0}` (need 2^k bits over {{0,1}})")]
    MalformedTable(String),

    #[error("{0}")]
    Invalid(String),
}
