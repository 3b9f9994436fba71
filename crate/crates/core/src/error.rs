use alloc::string::String;

/// Errors produced by code construction, modulation, channel and decoding routines.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Rejection sampling ran out of budget before a matrix met the targets.
    #[error("no parity-check matrix met the targets after {attempts} attempts")]
    ConstructionFailure { attempts: usize },

    /// An exhaustive oracle was asked to enumerate more items than allowed.
    #[error("enumeration of 2^{log2_required} items exceeds the cap of 2^{log2_cap}")]
    CapacityExceeded { log2_required: u32, log2_cap: u32 },
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
