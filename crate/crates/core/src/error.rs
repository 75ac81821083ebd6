use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} coordinates, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid generator set: {0}")]
    InvalidGenerators(String),
    #[error("invalid monomial order: {0}")]
    InvalidOrder(String),
    #[error("cannot parse exponent: {0}")]
    Parse(String),
    #[error("monoid map does not respect source relation #{relation}")]
    InvalidMap { relation: usize },
    #[error("maps of the diagram do not share a source presentation")]
    SourceMismatch,
    #[error("not a prime trace: relation #{relation} violates the support condition")]
    InvalidPrime { relation: usize },
    #[error("presentation is not integral; integralize it first")]
    NotIntegral,
    #[error("cone is not pointed")]
    NotPointed,
    #[error("linear map sends ray #{ray} outside the target cone")]
    ConeContainment { ray: usize },
    #[error("integer matrix is not {0}")]
    Matrix(&'static str),
    #[error("extended cone maps do not share a target")]
    TargetMismatch,
    #[error("{count} generators exceed the prime enumeration cap of {cap}")]
    TooManyGenerators { count: usize, cap: usize },
    #[error("oracle box has {cells} lattice points, above the cap of {cap}")]
    OracleTooLarge { cells: u128, cap: u64 },
    #[error("parallelepiped volume {volume} exceeds the cap of {cap}")]
    VolumeCap { volume: String, cap: u64 },
    #[error("ambient rank {rank} exceeds the cap of {cap}")]
    RankCap { rank: usize, cap: usize },
}

impl Error {
    /// True for failures caused by a configured size cap rather than bad input.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::TooManyGenerators { .. }
                | Error::OracleTooLarge { .. }
                | Error::VolumeCap { .. }
                | Error::RankCap { .. }
        )
    }
}
