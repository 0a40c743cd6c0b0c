use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero input has no multiplicative order")]
    ZeroInput,
    #[error("expected a primitive {expected}-th root of unity, got an element of order {found}")]
    NotPrimitiveRoot { expected: u64, found: String },
    #[error("parameter mismatch: {0}")]
    ParameterMismatch(String),
    #[error("zero entry")]
    ZeroEntry,
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("not a permutation matrix (entry ({row}, {col}): {reason})")]
    NotPermutation { row: usize, col: usize, reason: String },
    #[error("not a Hadamard matrix: rows {0} and {1} are not orthogonal")]
    NotHadamard(usize, usize),
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("eta choice violates eta^n = chi(a,a)^(-n(n-1)/2) for cyclic factor {factor}")]
    BadEtaChoice { factor: usize },
    #[error("t0^2 is not a root of unity; cannot select a cyclotomic t0")]
    TZeroBranchUnresolved,
    #[error("construction invariant violated: {0}")]
    ConstructionInvariantViolated(String),
    #[error("mode unavailable: {0}")]
    ModeUnavailable(String),
    #[error("hypothesis unmet: {0}")]
    HypothesisUnmet(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("budget exceeded: n = {n} > {budget}")]
    BudgetExceeded { n: usize, budget: usize },
    #[error("malformed input: {0}")]
    Format(String),
}
