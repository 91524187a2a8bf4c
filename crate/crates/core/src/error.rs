use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    EmptyString,
    OutOfRange(&'static str),
    NotPeriodic,
    BallTooLarge { t: usize, len: usize },
    SketchMismatch,
    ProviderContract,
    ProviderOutOfRange { len: usize, w_max: usize },
    OddAlphabet(u32),
    BadSymbol { symbol: u32, q: u32 },
    BadLength { expected: usize, got: usize },
    Schedule(&'static str),
    NotADeletion,
    NotABurst,
    LocatorMismatch,
    Unrecoverable(&'static str),
    DecodeFailure(&'static str),
    InvalidParams(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyString => write!(f, "empty string"),
            Error::OutOfRange(what) => write!(f, "{what} out of range"),
            Error::NotPeriodic => write!(f, "seed not period-t'"),
            Error::BallTooLarge { t, len } => {
                write!(f, "cannot delete {t} symbols from a string of length {len}")
            }
            Error::SketchMismatch => write!(f, "sketch mismatch"),
            Error::ProviderContract => write!(f, "provider contract violated"),
            Error::ProviderOutOfRange { len, w_max } => {
                write!(f, "provider out of range (length {len} > W_max {w_max})")
            }
            Error::OddAlphabet(q) => write!(f, "even alphabet required (q = {q})"),
            Error::BadSymbol { symbol, q } => write!(f, "symbol {symbol} not in Z_{q}"),
            Error::BadLength { expected, got } => {
                write!(f, "bad length: expected {expected}, got {got}")
            }
            Error::Schedule(why) => write!(f, "block schedule infeasible: {why}"),
            Error::NotADeletion => write!(f, "not a two-deletion result of c"),
            Error::NotABurst => write!(f, "not a burst of c"),
            Error::LocatorMismatch => write!(f, "locator mismatch"),
            Error::Unrecoverable(why) => write!(f, "unrecoverable: {why}"),
            Error::DecodeFailure(stage) => write!(f, "decode failure in {stage}"),
            Error::InvalidParams(msg) => write!(f, "invalid parameters: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
