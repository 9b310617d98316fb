use alloc::string::String;

/// Errors reported by the algorithms in this crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0} -> {1}")]
    DuplicateEdge(usize, usize),
    #[error("edge weight must be finite and positive, got {0}")]
    NonPositiveWeight(f64),
    #[error("vertex {0} has no out-neighbour")]
    Sink(usize),
    #[error("the chain is reducible")]
    Reducible,
    #[error("the graph is not connected")]
    Disconnected,
    #[error("operation requires an undirected graph")]
    Directed,
    #[error("target cannot be reached from vertex {0}")]
    Unreachable(usize),
    #[error("input vector is empty")]
    Empty,
    #[error("matrix row {row} puts mass on non-edge {row} -> {col}")]
    SupportViolation { row: usize, col: usize },
    #[error("matrix row {0} is not a probability distribution")]
    NotStochastic(usize),
    #[error("horizon {horizon} exceeds the enumeration limit {limit}")]
    HorizonTooLarge { horizon: usize, limit: usize },
    #[error("trajectory ends at vertex {vertex} with no out-neighbour at depth {depth}")]
    NoExtension { vertex: usize, depth: usize },
    #[error("bias {eps} is below the emulation threshold {required}")]
    BelowThreshold { eps: f64, required: f64 },
    #[error("edge weights around vertex {0} violate the ratio condition")]
    RatioCondition(usize),
    #[error("{n} vertices exceed the visited-set cap of {cap}")]
    TooManyVertices { n: usize, cap: usize },
    #[error("infeasible visited set: {0}")]
    Infeasible(String),
    #[error("linear system is singular or ill-conditioned")]
    Singular,
    #[error("iteration did not converge: {0}")]
    NoConvergence(&'static str),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("gadget construction failed: {0}")]
    Construction(String),
    #[error("malformed formula: {0}")]
    Formula(String),
    #[error("walk exceeded the step limit of {0}")]
    StepLimit(usize),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
