use thiserror::Error;

/// Errors produced by repair construction and the solvers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("schema error: {0}")]
    Schema(String),

    #[error("row {row} has {got} cells, schema has {want} attributes")]
    Arity { row: usize, got: usize, want: usize },

    #[error("unknown row id {0}")]
    UnknownRowId(usize),

    #[error("functional dependency is trivial (RHS contained in LHS)")]
    TrivialFd,

    #[error("attribute index {index} out of range for schema of arity {arity}")]
    AttributeOutOfRange { index: usize, arity: usize },

    #[error("invalid proportion: {0}")]
    Proportion(String),

    #[error("representation constraint is infeasible: bounds sum to {num}/{den} > 1")]
    InfeasibleConstraint { num: u64, den: u64 },

    #[error("duplicate representation bound for value {0:?}")]
    DuplicateBound(String),

    #[error("FD set is not an LHS-chain")]
    NotAChain,

    #[error("simplification does not apply to this FD set: {0}")]
    InvalidSimplification(String),

    #[error("candidate frontier exceeded the configured cap of {cap} entries")]
    FrontierCapExceeded { cap: usize },

    #[error("LP relaxation is infeasible (malformed model)")]
    LpInfeasible,

    #[error("branch-and-bound node cap of {cap} exhausted; incumbent has {incumbent_size} rows, bound {bound}")]
    NodeCapExceeded {
        cap: u64,
        incumbent_size: usize,
        bound: f64,
    },

    #[error("brute-force oracle guard: relation has {0} rows, limit is 20")]
    OracleGuard(usize),

    #[error("noise spec invalid: {0}")]
    Noise(String),

    #[error("stratified sample: group {group:?} has {available} rows, {requested} requested")]
    InsufficientGroup {
        group: String,
        available: usize,
        requested: usize,
    },

    #[error("repaired relation violates {0}")]
    InvalidRepair(String),

    #[error("CNF formula has no clauses")]
    EmptyFormula,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
