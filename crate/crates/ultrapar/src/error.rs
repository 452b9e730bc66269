use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("zero vector has no sign class")]
    ZeroVector,
    #[error("point is not in the interior (representative is not negative)")]
    NotInteriorPoint,
    #[error("polar vector is not normalised (<c,c> = {0})")]
    NotNormalised(f64),
    #[error("vector is not positive")]
    NotPositive,
    #[error("vector is not null")]
    NotNullVector,
    #[error("invalid reflection order {0} (need n >= 2)")]
    InvalidOrder(u32),
    #[error("operation is undefined at the point at infinity")]
    InfinityOperand,
    #[error("rotation factor {0} does not have unit modulus")]
    NotUnitModulus(f64),
    #[error("matrix is not an isometry of the form (defect {0:.3e})")]
    NotIsometry(f64),
    #[error("angular invariant {0} outside the open interval (0, 2pi)")]
    UnsupportedAlpha(f64),
    #[error("no triangle exists for these distances and angular invariant")]
    ExistenceFails,
    #[error("angular invariant undefined: a pairing vanishes")]
    DegenerateProduct,
    #[error("unsupported case: {0}")]
    UnsupportedCase(String),
    #[error("word uses generator 3, which is outside <i1,i2>")]
    NotInE,
    #[error("no lattice solution: {0}")]
    NoLatticeSolution(String),
    #[error("t = {t} outside the certified range |t| <= {limit}")]
    OutOfCertifiedRange { t: f64, limit: f64 },
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("inputs must be positive")]
    NonPositiveInput,
    #[error("isometry fixes the point at infinity")]
    FixesInfinity,
    #[error("isometric sphere undefined: entry combination vanishes")]
    DegenerateSphere,
    #[error("word length {len} exceeds cap {cap}")]
    CapExceeded { len: usize, cap: usize },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
