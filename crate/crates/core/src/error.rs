use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("basis is linearly dependent (Gram eigenvalue ratio {0:e})")]
    DependentBasis(f64),

    #[error("{0} is not the square of an integer dimension")]
    NotTensorSquare(usize),

    #[error("no catalogued group {family} acts on d = {d}")]
    InvalidGroup { family: String, d: usize },

    #[error("axis {axis} out of range for d = {d} (axes are 1-based)")]
    InvalidAxis { axis: usize, d: usize },

    #[error("d = {0} is not a multiple of 4")]
    NotMultipleOfFour(usize),

    #[error("Clifford construction only supports n = 7 or n = 9, got {0}")]
    UnsupportedClifford(usize),

    #[error("expected a {expected}-dimensional solution space, found {found}")]
    SolutionSpace { expected: usize, found: usize },

    #[error("matrix is not real after conjugation (imaginary residual {0:e})")]
    NotReal(f64),

    #[error("generator is not antisymmetric (residual {0:e})")]
    NotAntisymmetric(f64),

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("Bloch vector norm {0} exceeds 1")]
    NormViolation(f64),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("inconclusive: {step} produced {value:e}, inside the deadband")]
    Inconclusive { step: String, value: f64 },

    #[error("non-integral dimension {0}")]
    NonIntegral(String),

    #[error("enumeration contradicts lemma: {0}")]
    LemmaContradiction(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
