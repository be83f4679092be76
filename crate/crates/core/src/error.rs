use thiserror::Error;

/// Errors produced while building or validating structures.
#[derive(Debug, Error)]
pub enum TcdsError {
    #[error("group table is not a Latin square: row {row} repeats index {value}")]
    NotLatinSquare { row: usize, value: usize },

    #[error("group table is not associative: ({g}*{h})*{k} != {g}*({h}*{k})")]
    NotAssociative { g: usize, h: usize, k: usize },

    #[error("index 0 is not a two-sided identity: witness {witness}")]
    BadIdentity { witness: usize },

    #[error("element {g} has no two-sided inverse")]
    NoInverse { g: usize },

    #[error("group table is not square: {rows} rows, row {row} has {cols} entries")]
    NotSquare { rows: usize, row: usize, cols: usize },

    #[error("group table entry out of range: table[{row}][{col}] = {value} (order {order})")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        value: usize,
        order: usize,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("algebra mismatch: operands live in different multi-matrix algebras")]
    AlgebraMismatch,

    #[error("system mismatch: operands refer to different twisted systems")]
    SystemMismatch,

    #[error("module mismatch: elements live in different Hilbert modules")]
    ModuleMismatch,

    #[error("shape mismatch in module operator: {0}")]
    ShapeMismatch(String),

    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("element is not unitary (residual {residual:.3e}): {context}")]
    NotUnitary { residual: f64, context: String },

    #[error("map is not a unital *-homomorphism: {0}")]
    NotHomomorphism(String),

    #[error("map is not a *-automorphism: {0}")]
    NotAutomorphism(String),

    #[error("not a state: {0}")]
    NotState(String),

    #[error("conditional expectation invalid: {0}")]
    BadExpectation(String),

    #[error("subsystem invalid: {0}")]
    BadSubsystem(String),

    #[error("cocycle entry sigma({g},{h}) is not unitary (residual {residual:.3e})")]
    SigmaNotUnitary { g: usize, h: usize, residual: f64 },

    #[error("twisted action axioms fail: {0}")]
    AxiomFailure(String),

    #[error("builder input invalid: {0}")]
    BadBuilder(String),

    #[error("certificate malformed: {0}")]
    BadCertificate(String),

    #[error("invalid configuration: {0}")]
    BadConfig(String),
}

pub type Result<T> = std::result::Result<T, TcdsError>;
