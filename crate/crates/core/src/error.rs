use thiserror::Error;

/// Error type shared by every module of the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Exact factorial/multinomial arithmetic is capped at order 20.
    #[error("order {0} exceeds the exact integer arithmetic cap of 20")]
    OrderOverflow(u32),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("composition parts sum to {found}, expected {expected}")]
    PartsMismatch { expected: u32, found: u32 },

    #[error("argument {argument} outside the domain: {reason}")]
    Domain { argument: f64, reason: &'static str },

    #[error("variance {0} is not positive")]
    DegenerateVariance(f64),

    #[error("no bound available: {0}")]
    UnsupportedBound(String),

    #[error("sample too small: {0}")]
    SampleTooSmall(String),
}

pub type Result<T> = std::result::Result<T, Error>;
