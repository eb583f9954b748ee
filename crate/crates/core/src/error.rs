//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("span of {dimension} basis vectors exceeds the enumeration budget of {budget} (2^{budget} vectors)")]
    EnumerationBudget { dimension: usize, budget: usize },

    #[error("the zero code has no minimum weight")]
    ZeroCode,

    #[error("no doubly even self-dual code of length {length} exists; the length must be a positive multiple of 8")]
    NoSelfDualLength { length: usize },

    #[error("unknown seed code `{0}`")]
    UnknownSeed(String),

    #[error("neighbor vector already lies in the code")]
    DegenerateNeighbor,

    #[error("coordinate map is not a permutation: {0}")]
    Permutation(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("infeasible design parameters: {0}")]
    InfeasibleParameters(String),

    #[error("need at least two blocks to compute intersection numbers")]
    DegenerateDesign,

    #[error("vector is not a member of the code")]
    Membership,

    #[error("no code of minimum weight {target} found in {walks} walk(s) of {steps} steps")]
    SamplingExhausted { target: usize, walks: usize, steps: usize },

    #[error("pair graph on {size} vertices has more than {cap} cliques of the target size")]
    Stage2Overflow { cap: u64, size: usize },

    #[error("internal consistency violation: {0}")]
    InternalConsistency(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
