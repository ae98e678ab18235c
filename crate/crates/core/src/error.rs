use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("images {0:?} do not form a permutation")]
    NotAPermutation(Vec<u32>),
    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("point {0} appears in more than one cycle")]
    CyclesNotDisjoint(usize),
    #[error("generator has degree {found}, expected {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("group order exceeds the configured cap of {cap}")]
    OrderCapExceeded { cap: usize },
    #[error("subgroup lattice exceeds the configured cap of {cap} subgroups")]
    LatticeCapExceeded { cap: usize },
    #[error("time budget exhausted")]
    BudgetExhausted,
    #[error("element id {0} out of range")]
    InvalidElement(u32),
    #[error("subgroup id {0} out of range")]
    InvalidSubgroup(usize),
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("invalid group spec: {0}")]
    InvalidSpec(String),
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("subgroup {lower} is not contained in subgroup {upper}")]
    NotContained { lower: usize, upper: usize },
    #[error("subgroup {0} is not invariant under the ambient subgroup")]
    NotInvariant(usize),
    #[error("normal subgroups do not form a graded poset (implementation bug)")]
    NormalSublatticeNotGraded,
    #[error("cache record rejected: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
