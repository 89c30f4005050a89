use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("resultant undefined: both polynomials are constant in `{0}`")]
    ResultantUndefined(String),
    #[error("zero polynomial where a nonzero one is required")]
    ZeroPolynomial,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("truncation orders differ ({0} vs {1})")]
    TruncationMismatch(usize, usize),
    #[error("series is not a unit with constant term 1")]
    NotNormalizedUnit,
    #[error("root index must be positive")]
    ZeroRootIndex,
    #[error("series vanishes to the available truncation order")]
    VanishesToTruncation,
    #[error("composition requires an inner series of positive order")]
    InnerSeriesNotInMaximalIdeal,
}

/// Errors raised by the germ pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GermError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("coordinate functions must vanish at the origin")]
    NotOriginPreserving,
    #[error("corank {0} unsupported: only corank-1 germs are handled")]
    UnsupportedCorank(u8),
    #[error("not in normal form: {0}")]
    NotInNormalForm(String),
    #[error("multiplicity {0} > 2 with vanishing pure y-power in the third coordinate: not finitely determined")]
    BetaZeroHighMultiplicity(u32),
    #[error("not finitely determined: {0}")]
    NotFinitelyDetermined(String),
    #[error("not quasi-homogeneous")]
    NotQuasiHomogeneous,
    #[error("mathematical inconsistency: {0}")]
    Inconsistency(String),
    #[error("computation budget exhausted after {0} steps")]
    BudgetExhausted(u64),
    #[error("computation cancelled")]
    Cancelled,
    #[error("truncation cap {0} reached without deciding the characteristic exponents")]
    Undecided(usize),
}
