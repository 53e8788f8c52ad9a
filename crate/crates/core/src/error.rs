use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid ring configuration: {0}")]
    InvalidConfig(String),
    #[error("element is not a unit")]
    NotUnit,
    #[error("cyclotomic order mismatch: {0} vs {1}")]
    OrderMismatch(u32, u32),
    #[error("cyclotomic order {0} is not an odd prime power")]
    BadOrder(u32),
    #[error("no additive character satisfies the requested axioms")]
    CharacterNotFound,
    #[error("matrix is not an isometry")]
    NotIsometry,
    #[error("parameter {0} is not epsilon-symmetric")]
    NotEpsilonSymmetric(String),
    #[error("element does not lie in the subgroup generated by the Bruhat elements")]
    NotInSsl,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("search found no solution")]
    NotFound,
    #[error("scale guard exceeded: {0}")]
    ScaleGuard(String),
    #[error("hermitian Weil configurations need an even rank m, got m = {0}")]
    OddHermitianRank(usize),
    #[error("broken configuration: {0}")]
    BrokenConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
