use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Invalid scheme parameters, indices or interpolation points.
    #[error("{0}")]
    Param(String),
    /// A quantum state failed its normalization or dimension check.
    #[error("state error: {0}")]
    State(String),
    /// A protocol phase was invoked out of order or with missing inputs.
    #[error("protocol order error: {0}")]
    ProtocolOrder(String),
    /// Exhaustive enumeration would exceed the configured cap.
    #[error("enumeration of {size} candidate polynomials exceeds cap {cap}")]
    EnumerationTooLarge { size: u128, cap: u128 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param(msg: impl Into<String>) -> Error {
    Error::Param(msg.into())
}
