use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("unknown operator name `{0}`")]
    UnknownOperator(String),

    #[error("exponent must be positive, got {0}")]
    NonPositiveExponent(String),

    #[error("sphere shift must be nonnegative, got {0}")]
    NegativeShift(String),

    #[error("invalid tau: {0}")]
    InvalidTau(String),

    #[error("tensor factor {index} has smallest eigenvalue below 1")]
    FactorBelowOne { index: usize },

    #[error("spectral zeta diverges: exponent {c} is not above the abscissa {abscissa}")]
    Divergence { c: f64, abscissa: f64 },

    #[error("spectrum contains a nonpositive eigenvalue; zeta sums are undefined")]
    NonpositiveEigenvalue,

    #[error("requested tolerance {tol} unreachable within work budget {budget}")]
    ToleranceUnreachable { tol: f64, budget: u64 },

    #[error("pole of the Riemann zeta function at s = 1")]
    Pole,

    #[error("argument {0} below the implemented continuation range (s > {1})")]
    OutOfRange(f64, f64),

    #[error("the maximum zeta abscissa is attained by more than one factor (symmetric case)")]
    SymmetricCase,

    #[error("tensor product mixes closed-manifold and Shubin factors")]
    MixedCalculus,

    #[error("exact count overflowed the 128-bit accumulator")]
    CountOverflow,

    #[error("work budget of {0} exceeded")]
    BudgetExceeded(u64),

    #[error("not enough usable samples: need at least {needed}, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("{0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
