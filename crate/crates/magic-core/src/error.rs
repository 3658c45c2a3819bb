use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("operator is not Hermitian: max |A - A^dag| = {deviation:e}")]
    NotHermitian { deviation: f64 },

    #[error("not a density matrix: {reason}")]
    NotAState { reason: String },

    #[error("non-finite entry encountered in {context}")]
    NonFinite { context: &'static str },

    #[error("size cap exceeded: {what} requires {requested}, cap is {cap}")]
    SizeCap {
        what: &'static str,
        requested: usize,
        cap: usize,
    },

    #[error("mixed-state input: {what} is defined here for pure states only (purity {purity}); the convex-roof extension is out of scope")]
    MixedStateInput { what: &'static str, purity: f64 },

    #[error("linear program infeasible: {reason}")]
    Infeasible { reason: String },

    #[error("dictionary is rank-deficient for the equality constraints (rank {rank} < {needed}); refine the net")]
    RankDeficientDictionary { rank: usize, needed: usize },

    #[error("numerical failure: {reason}")]
    Numerical { reason: String },

    #[error("solver did not converge within {max_iters} iterations (last gap {gap:e})")]
    NoConvergence { max_iters: usize, gap: f64 },

    #[error("called on an interior point: distance {distance:e} is not positive")]
    InteriorPoint { distance: f64 },

    #[error("witness norm precondition violated: |W|_2 = {norm} > 1")]
    WitnessNorm { norm: f64 },

    #[error("empty dictionary")]
    EmptyDictionary,

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("CNF parse error at line {line}: {reason}")]
    CnfParse { line: usize, reason: String },

    #[error("clause has wrong width: expected exactly 3 literals, got {got} (WRONG_WIDTH)")]
    WrongClauseWidth { got: usize },

    #[error("literal out of range: variable {var} not in 1..={num_vars}")]
    LiteralOutOfRange { var: i64, num_vars: usize },

    #[error("duplicate variable {var} within a clause")]
    DuplicateVariable { var: usize },

    #[error("capacity exceeded: {num_vars} variables need C(n,2) >= num_vars, got n = {vertices}")]
    ReductionCapacity { num_vars: usize, vertices: usize },

    #[error("channel is not trace preserving: |sum K^dag K - I|_max = {deviation:e}")]
    NotTracePreserving { deviation: f64 },

    #[error("JSON format error: {reason}")]
    Format { reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-readable code, used by the CLI report.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "DIMENSION_MISMATCH",
            Error::NotHermitian { .. } => "NOT_HERMITIAN",
            Error::NotAState { .. } => "NOT_A_STATE",
            Error::NonFinite { .. } => "NON_FINITE",
            Error::SizeCap { .. } => "SIZE_CAP",
            Error::MixedStateInput { .. } => "MIXED_STATE_INPUT",
            Error::Infeasible { .. } => "INFEASIBLE",
            Error::RankDeficientDictionary { .. } => "RANK_DEFICIENT_DICTIONARY",
            Error::Numerical { .. } => "NUMERICAL",
            Error::NoConvergence { .. } => "NO_CONVERGENCE",
            Error::InteriorPoint { .. } => "INTERIOR_POINT",
            Error::WitnessNorm { .. } => "WITNESS_NORM",
            Error::EmptyDictionary => "EMPTY_DICTIONARY",
            Error::InvalidParameter { .. } => "INVALID_PARAMETER",
            Error::CnfParse { .. } => "CNF_PARSE",
            Error::WrongClauseWidth { .. } => "WRONG_WIDTH",
            Error::LiteralOutOfRange { .. } => "LITERAL_OUT_OF_RANGE",
            Error::DuplicateVariable { .. } => "DUPLICATE_VARIABLE",
            Error::ReductionCapacity { .. } => "REDUCTION_CAPACITY",
            Error::NotTracePreserving { .. } => "NOT_TRACE_PRESERVING",
            Error::Format { .. } => "FORMAT",
            Error::Io(_) => "IO",
            Error::Json(_) => "JSON",
        }
    }
}
