use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma pole at {0}")]
    Pole(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("argument on the branch cut needs an explicit side")]
    MissingBranchSide,
    #[error("series did not converge: {0}")]
    NonConvergence(String),
    #[error("argument outside the validated range: {0}")]
    OutOfRange(String),
    #[error("growth condition violated: {0}")]
    GrowthCondition(String),
    #[error("sample index out of range: {0}")]
    IndexOutOfRange(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidParameter(msg.into()))
}
