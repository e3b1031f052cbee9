use thiserror::Error;

/// Errors produced by formula construction, parsing, generation, counting
/// and inflation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("literal has variable index 0")]
    ZeroVariable,
    #[error("variable {var} occurs more than once in a clause")]
    RepeatedVariable { var: u32 },
    #[error("clause is empty")]
    EmptyClause,
    #[error("variable {var} exceeds the declared variable count {num_vars}")]
    VariableOutOfRange { var: u32, num_vars: u32 },
    #[error("formula must have at least one variable")]
    NoVariables,
    #[error("duplicate clause at position {position} (clauses form a set)")]
    DuplicateClause { position: usize },

    #[error("line {line}: {msg}")]
    Dimacs { line: usize, msg: String },
    #[error("header declares {declared} clauses but {found} were found")]
    ClauseCountMismatch { declared: usize, found: usize },

    #[error("clause width {k} exceeds variable count {n}")]
    WidthExceedsVariables { k: u32, n: u32 },
    #[error("{requested} clauses requested but only {available} distinct candidates exist")]
    TooManyClauses { requested: u64, available: u64 },

    #[error("sigma must be at least 1")]
    SigmaZero,
    #[error("critical saturation requires at least 2 variables, got {n}")]
    TooFewVariables { n: u32 },
    #[error("identity result {value} outside [0, 2^{n}]: parity tallies are inconsistent")]
    IdentityOutOfRange { value: String, n: u32 },
    #[error(
        "split count {value} outside [0, 2^{n}]: the saturation cutoff discarded \
         non-cancelling sub-formulae on this instance"
    )]
    SplitCountOutOfRange { value: String, n: u32 },

    #[error("{op} supports at most {ceiling} {unit}, got {actual}")]
    CeilingExceeded {
        op: &'static str,
        ceiling: u32,
        unit: &'static str,
        actual: u32,
    },

    #[error("inflation needs at least 4 variables, got {n}")]
    TooFewVariablesToInflate { n: u32 },
    #[error("clause of width {width} cannot take {z} fresh variables out of {n}")]
    ClauseTooWide { width: u32, z: u32, n: u32 },

    #[error("estimator needs a sign state of at least {k} variables, got {nu}")]
    StateTooSmall { nu: u32, k: u32 },
    #[error("estimator called with zero trials")]
    EmptySample,
}

pub type Result<T> = std::result::Result<T, Error>;
