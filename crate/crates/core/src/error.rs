use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Input outside the mathematical domain of a formula.
    #[error("domain error: {0}")]
    Domain(String),

    /// Inconsistent arguments (mismatched grids, bad factors, ...).
    #[error("invalid argument: {0}")]
    Argument(String),

    /// Invalid solver or experiment configuration.
    #[error("configuration error: {0}")]
    Configuration(String),

    /// An exponent left the representable range.
    #[error("numeric overflow: exponent argument {argument} exceeds +/-{bound}")]
    NumericOverflow { argument: f64, bound: f64 },

    /// The circulant embedding has a negative eigenvalue beyond rounding noise.
    #[error(
        "circulant embedding failed: eigenvalue {index} is {eigenvalue:e} (tolerance {tolerance:e}); \
         retry with the Cholesky sampler"
    )]
    EmbeddingFailure { index: usize, eigenvalue: f64, tolerance: f64 },

    /// Dense covariance factorisation failed or is too large.
    #[error("cholesky sampler: {0}")]
    Cholesky(String),

    /// Least-squares rate fit could not be formed.
    #[error("rate fit: {0}")]
    Fit(String),
}
