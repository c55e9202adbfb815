use thiserror::Error;

/// Errors raised by field arithmetic, parameter derivation, and the encoder.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("{value} is not an element of a field of order {order}")]
    NotAnElement { value: u32, order: u32 },
    #[error("unsupported field order {0}")]
    UnsupportedOrder(u32),
    #[error("unsupported extension degree {0} (expected 1..=16)")]
    UnsupportedDegree(u8),
    #[error("error target {0} is outside (0, 1/2] or needs a field larger than 2^16")]
    AlphaOutOfRange(f64),
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("band width {w} is not in 1..={m}")]
    BandWidth { w: usize, m: usize },
    #[error("row starting at column {start} with {len} coefficients does not fit in {m} columns")]
    RowOutOfRange { start: usize, len: usize, m: usize },
    #[error("{rows} rows exceed {m} columns")]
    TooManyRows { rows: usize, m: usize },
    #[error("evaluation point {0} appears more than once")]
    DuplicatePoint(u32),
    #[error("{points} points and {columns} columns are incompatible with a field of order {order}")]
    VandermondeShape {
        points: usize,
        columns: usize,
        order: u32,
    },
    #[error("input set has {size} elements but the encoding was sized for {k_hat}")]
    SetTooLarge { size: usize, k_hat: usize },
    #[error("input element {index} is a duplicate")]
    DuplicateElement { index: usize },
    #[error("input element {index} is not an element of the field universe")]
    NotRepresentable { index: usize },
    #[error("input element {index} is longer than 65535 bytes")]
    ElementTooLong { index: usize },
}
