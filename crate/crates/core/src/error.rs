use thiserror::Error;

/// Errors raised when an input violates a structural or physical invariant.
///
/// Residuals are reported as `f64` regardless of the working scalar.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dimension {0} is not a perfect square")]
    NotPerfectSquare(usize),
    #[error("matrix is not Hermitian: max|m - m^dagger| = {residual:e}")]
    NotHermitian { residual: f64 },
    #[error("trace is not one: |tr - 1| = {residual:e}")]
    TraceNotUnit { residual: f64 },
    #[error("negative eigenvalue {min_eigenvalue:e} below tolerance")]
    NegativeEigenvalue { min_eigenvalue: f64 },
    #[error("state vector is not normalized: |norm - 1| = {residual:e}")]
    NotNormalized { residual: f64 },
    #[error("matrix is not unitary: max|U^dagger U - 1| = {residual:e}")]
    NotUnitary { residual: f64 },
    #[error("Kraus operators are not complete: max|sum K^dagger K - 1| = {residual:e}")]
    NotTracePreserving { residual: f64 },
    #[error(
        "Choi state fails the trace-preservation witness: max|tr_out sigma - 1/n| = {residual:e}"
    )]
    ChoiNotTracePreserving { residual: f64 },
    #[error("map is not completely positive: Choi eigenvalue {min_eigenvalue:e}")]
    NotCompletelyPositive { min_eigenvalue: f64 },
    #[error("state is not maximally entangled: max reduced-state deviation {residual:e}")]
    NotMaximallyEntangled { residual: f64 },
    #[error("point lies outside the tetrahedron: weight {min_weight:e}")]
    OutsideTetrahedron { min_weight: f64 },
    #[error("{name} = {value} outside [{lo}, {hi}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("invalid {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("channel file: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
