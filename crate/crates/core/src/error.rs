use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("Hecke index k={k} outside supported range 3..={k_max}")]
    IndexOutOfRange { k: u32, k_max: u32 },
    #[error("operands belong to different rings (k={left} vs k={right})")]
    RingMismatch { left: u32, right: u32 },
    #[error("precision cap of {cap} bits exceeded while {context}")]
    PrecisionCap { cap: u64, context: &'static str },
    #[error("point is outside the expansion domain")]
    OutOfDomain,
    #[error("digit exceeds 64 bits")]
    DigitOverflow,
    #[error("denominator is zero")]
    ZeroDenominator,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("cannot parse {0:?} as an exact number")]
    Parse(String),
    #[error("budget exhausted: {0}")]
    Budget(String),
    #[error("no linear regime detected in the distribution")]
    NoLinearRegime,
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code used by the command-line runner.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::PrecisionCap { .. } => 3,
            Error::Budget(_) => 4,
            _ => 2,
        }
    }
}
