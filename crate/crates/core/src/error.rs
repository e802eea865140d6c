use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("rank mismatch: expected {expected}, got {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("generator index {index} out of range for rank {rank}")]
    GeneratorOutOfRange { index: usize, rank: usize },
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unknown relator family {0:?}")]
    UnknownFamily(String),
    #[error("cycles {i} and {j} have nonzero intersection pairing {pairing}")]
    NotDisjoint { i: usize, j: usize, pairing: i64 },
    #[error("modulus {0} is even; use the tree extension construction for N = 2")]
    EvenModulus(u64),
    #[error("graph is not a tree: {0}")]
    NotATree(String),
    #[error("cycle set is not isotropic mod 2: cycles {i} and {j}")]
    NotIsotropic { i: usize, j: usize },
    #[error("malformed component subset: {0}")]
    BadSubgraph(String),
    #[error("automorphism {name:?} does not preserve the surface relator")]
    NotAdmissible { name: String },
    #[error("unsupported curve {0:?}")]
    UnsupportedCurve(String),
}
