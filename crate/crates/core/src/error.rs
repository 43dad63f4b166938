use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed arguments: dimension mismatch, non-positive radius and so on.
    #[error("invalid input: {0}")]
    Input(String),
    /// An IFS or kernel description that does not define a valid object.
    #[error("invalid configuration: {0}")]
    Config(String),
    /// A point outside the domain of a function, e.g. a kernel on the diagonal.
    #[error("domain error: {0}")]
    Domain(String),
    #[error("resource limit: {cells} cells requested, cap is {cap}")]
    Resource { cells: u128, cap: u128 },
    #[error("integrand is not finite ({value}) at the representative of cell {word}")]
    Evaluation { word: String, value: f64 },
    #[error("refused: {0}")]
    Refused(String),
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! input_err {
    ($($arg:tt)*) => { $crate::error::Error::Input(format!($($arg)*)) };
}

macro_rules! config_err {
    ($($arg:tt)*) => { $crate::error::Error::Config(format!($($arg)*)) };
}

pub(crate) use config_err;
pub(crate) use input_err;
