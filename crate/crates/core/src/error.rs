use thiserror::Error;

use crate::fixed::QFormat;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unsupported length {0}: the plan requires N ≡ 0 (mod 4) and N ≥ 4")]
    UnsupportedLength(usize),

    #[error("length mismatch: expected {expected} samples, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("format mismatch: {left} vs {right}")]
    FormatMismatch { left: QFormat, right: QFormat },

    #[error("entry {value} at ({row}, {col}) is outside {{-1, 0, +1}}")]
    NotTernary { row: usize, col: usize, value: i64 },

    #[error("sample {index} ({value}) is outside the {format} range")]
    SampleOutOfRange {
        index: usize,
        value: f64,
        format: QFormat,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
