use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("series did not converge within {terms} terms ({what})")]
    NonConvergent { what: &'static str, terms: usize },

    #[error("modified Bessel function of order {0} is not supported (orders 0, 1, 2 only)")]
    UnsupportedOrder(u32),

    #[error("time {t} s lies outside the pass [0, {service_time}] s")]
    OutOfPass { t: f64, service_time: f64 },

    #[error("slot length {slot_len} s exceeds the service time {service_time} s")]
    SlotTooLong { slot_len: f64, service_time: f64 },

    #[error("level crossing rate at threshold {r_th} is zero; fade duration undefined")]
    ZeroCrossingRate { r_th: f64 },

    #[error("average transmit power is zero; energy efficiency undefined")]
    ZeroPower,

    #[error("{what} index {index} out of range 1..={len}")]
    IndexOutOfRange { what: &'static str, index: usize, len: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{key} (line {line}): {message}")]
    Validation { key: String, line: usize, message: String },

    #[error("unknown key `{key}` (line {line})")]
    UnknownKey { key: String, line: usize },

    #[error("{0}")]
    Io(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }

    /// Stable machine-readable code used by the command-line front end.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidParameter { .. } | Error::Validation { .. } => "validation_error",
            Error::Parse { .. } => "parse_error",
            Error::UnknownKey { .. } => "unknown_key",
            Error::Io(_) => "io_error",
            Error::NonConvergent { .. } => "non_convergent",
            Error::UnsupportedOrder(_) => "unsupported_order",
            Error::OutOfPass { .. } => "out_of_pass",
            Error::SlotTooLong { .. } => "slot_too_long",
            Error::ZeroCrossingRate { .. } => "zero_crossing_rate",
            Error::ZeroPower => "zero_power",
            Error::IndexOutOfRange { .. } => "index_out_of_range",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
        }
    }

    /// Process exit code: 2 for input problems, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParameter { .. }
            | Error::Validation { .. }
            | Error::Parse { .. }
            | Error::UnknownKey { .. }
            | Error::Io(_)
            | Error::SlotTooLong { .. } => 2,
            _ => 3,
        }
    }
}
