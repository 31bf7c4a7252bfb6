use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(&'static str),

    #[error("the polynomial is identically zero")]
    ZeroPolynomial,

    #[error("unsupported configuration: {0}")]
    Unsupported(&'static str),

    #[error("{routine} did not converge within {iterations} iterations")]
    NonConvergence { routine: &'static str, iterations: usize },

    #[error("inverse iteration broke down: shifted pencil is numerically singular")]
    Breakdown,

    #[error("vector is zero")]
    ZeroVector,

    #[error("eigenvalue is infinite")]
    InfiniteEigenvalue,

    #[error("vector is not an eigenvector of the pencil (relative residual {0:e})")]
    NotAnEigenvector(f64),

    #[error("lambda = {0} lies outside the domain of the factorization")]
    OutsideDomain(num_complex::Complex64),

    #[error("no block permutation reproduces the target pencil")]
    NoMatch,

    #[error("Newton Jacobian is singular")]
    SingularJacobian,

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),
}
