use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("Krein vector {0:?} is not unit timelike")]
    InvalidKreinVector([f64; 4]),
    #[error("invalid physical constant {0}")]
    InvalidConstant(f64),
    #[error("Gaussian width must be positive and finite, got {0}")]
    InvalidWidth(f64),
    #[error("non-finite coordinates {0:?}")]
    NonFinite([f64; 4]),
    #[error("state parameter alpha must be positive and finite, got {0}")]
    InvalidStateAlpha(f64),
    #[error("reference function psi must have mean 1")]
    PsiNotNormalized,
    #[error("null separation: the log kernel is singular there")]
    NullSeparation,
    #[error("momentum-space form needs mean-zero smearings, got means {0:?} and {1:?}")]
    NonZeroMean([f64; 4], [f64; 4]),
    #[error("corrected world function diverges at null or coincident points")]
    NullWorldFunction,
    #[error("positivity violated: Re mu2(f,f) = {value} with error {error}")]
    Positivity { value: f64, error: f64 },
    #[error("Im mu2(f,f) = {value} exceeds its quadrature error {error}")]
    ImaginaryNorm { value: f64, error: f64 },
    #[error("phase {0} lies outside the principal branch of the logarithm")]
    BranchCut(f64),
    #[error("invalid configuration: {0}")]
    Config(String),
}
