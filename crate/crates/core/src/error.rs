use thiserror::Error;

/// Errors produced while building, decoding or applying transactions.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("one-time key is not addressed to this long-term key")]
    NotOurs,
    #[error("amount {0} outside the admissible range")]
    AmountRange(u64),
    #[error("no discrete logarithm below the search bound")]
    DlogNotFound,
    #[error("ring member at the signer index does not match the secret key")]
    BadIndex,
    #[error("ring size {0} is not a power of the ring base")]
    BadRingSize(usize),
    #[error("aggregation size {0} is not a power of two")]
    BadBatch(usize),
    #[error("spend secret key does not open the referenced account")]
    BadSpendKey,
    #[error("inputs and outputs do not balance")]
    Unbalanced,
    #[error("duplicate key image within one transaction")]
    DuplicateKeyImage,
    #[error("unknown account offset {0}")]
    UnknownOffset(u32),
    #[error("parameter bound exceeded: {0}")]
    Bounds(&'static str),
    #[error("transaction rejected")]
    Invalid,
    #[error("transaction links to an already spent account")]
    DoubleSpend,
    #[error("decode error at byte {offset}: {reason}")]
    Decode { offset: usize, reason: &'static str },
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
