use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("weight mismatch: {0}")]
    WeightMismatch(String),
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("grid layouts differ: {0}")]
    GridMismatch(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("context has no registered lift of {0}")]
    NoLiftRegistered(&'static str),
    #[error("lift of 1_B is not symmetric")]
    NotSymmetric,
    #[error("lift does not reconstruct the unit: residual {0:e}")]
    BadLift(f64),
    #[error("element is not in the corner: residual {0:e}")]
    NotInCorner(f64),
    #[error("correction term is ill-conditioned (condition number {0:e})")]
    SingularCorrection(f64),
    #[error("twist has an eigenvalue equal to 1 (eigenphase index {0})")]
    EigenvalueOne(usize),
    #[error("degenerate covering geometry: {0}")]
    DegenerateGeometry(String),
    #[error("lift norms {row:.6}, {col:.6} exceed 1 + eps = {bound:.6}")]
    NormPreconditionFailed { row: f64, col: f64, bound: f64 },
    #[error("no lift of the unit exists in the degree window [{0}, {1}]")]
    InfeasibleWindow(i64, i64),
}

pub type Result<T> = std::result::Result<T, Error>;
