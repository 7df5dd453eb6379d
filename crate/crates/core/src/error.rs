use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("grid size {0} is not a power of two >= 8")]
    InvalidGrid(usize),
    #[error("degree overflow: result would have form degree {0}")]
    DegreeOverflow(usize),
    #[error("operands live on different grids")]
    GridMismatch,
    #[error("mean {mean:e} exceeds tolerance {tol:e}")]
    MeanError { mean: f64, tol: f64 },
    #[error("kmax {kmax} exceeds N/4 = {limit}")]
    BandLimitError { kmax: usize, limit: usize },
    #[error("operands belong to different parameter rings")]
    RingMismatch,
    #[error("monomial {0} is not canonical")]
    NonCanonical(String),
    #[error("monomial {0} does not belong to the ring")]
    ForeignMonomial(String),
    #[error("expected total degree {expected}, found {found}")]
    DegreeError { expected: i32, found: i32 },
    #[error("density must be positive (minimum {0:e})")]
    DensityError(f64),
    #[error("masses differ: {m0:e} vs {m1:e} (relative tolerance {tol:e})")]
    MassError { m0: f64, m1: f64, tol: f64 },
    #[error("slot {0} is not populated")]
    SlotError(&'static str),
    #[error("construction failed: {0}")]
    ConstructionError(String),
    #[error("time samples mismatch")]
    SampleMismatch,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
