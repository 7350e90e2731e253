use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("graph has {n} vertices, at most {max} are supported")]
    TooManyVertices { n: usize, max: usize },
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("invalid family: {0}")]
    InvalidFamily(String),
    #[error("invalid bipartition: {0}")]
    InvalidBipartition(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("permutation does not map the vertex mask {mask:#x} onto itself")]
    NotStabilizing { mask: u64 },
    #[error("generator {index} is not an automorphism: {reason}")]
    NotAutomorphism { index: usize, reason: String },
    #[error("group elements are not enumerated (order above the enumeration cap)")]
    GroupNotEnumerated,
    #[error("Burnside sum {sum} is not divisible by the group order {order}")]
    BurnsideDivisibility { sum: u128, order: u128 },
    #[error("{what}: size {size} exceeds cap {cap}")]
    CapExceeded { what: &'static str, size: u128, cap: u128 },
    #[error("coefficient matrix 2^{a} x 2^{b} exceeds the dense size limit")]
    DimensionOverflow { a: usize, b: usize },
    #[error("SVD did not converge on a {rows}x{cols} matrix")]
    SvdFailed { rows: usize, cols: usize },
    #[error("seed list is empty")]
    EmptySeeds,
    #[error("empty ground manifold")]
    EmptyManifold,
    #[error("entropy {entropy} exceeds the combined bound {bound}")]
    BoundViolation { entropy: f64, bound: f64 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit status for the CLI: 1 verification failure, 2 input error,
    /// 3 cap exceeded.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. }
            | Error::SelfLoop(_)
            | Error::VertexOutOfRange { .. }
            | Error::EmptyGraph
            | Error::InvalidFamily(_)
            | Error::InvalidBipartition(_)
            | Error::InvalidConfig(_)
            | Error::Io(_) => 2,
            Error::TooManyVertices { .. } | Error::CapExceeded { .. } | Error::DimensionOverflow { .. } => 3,
            _ => 1,
        }
    }
}
