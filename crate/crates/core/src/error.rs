use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A real value does not fit the Q2.8 range.
    #[error("value {0} is outside the Q2.8 range (|x| < 2)")]
    Q8OutOfRange(f64),

    /// Signal length must be even (and at least 2).
    #[error("signal length {0} is not an even length >= 2")]
    OddLength(usize),

    /// Boundary extension longer than the signal allows.
    #[error("extension ({left}, {right}) too long for signal of length {len}")]
    ExtensionTooLong { left: usize, right: usize, len: usize },

    /// A fixed-mode input sample is outside the signed 8-bit input range.
    #[error("sample {value} at index {index} is outside the signed 8-bit input range")]
    SampleOutOfRange { index: usize, value: i64 },

    /// Band lengths of a pair do not match.
    #[error("band length mismatch: low {low} vs high {high}")]
    BandLengthMismatch { low: usize, high: usize },

    /// Plane dimensions do not satisfy an operation's requirement.
    #[error("bad plane shape: {0}")]
    Shape(String),

    /// A register latched a value outside its declared range; the simulation halts.
    #[error("register `{register}` overflowed at cycle {cycle}: {value} outside [{min}, {max}]")]
    RegisterOverflow {
        register: String,
        cycle: u64,
        value: i64,
        min: i64,
        max: i64,
    },

    /// Malformed coefficient dump.
    #[error("coefficient dump parse error at byte {offset}: {message}")]
    DumpParse { offset: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
