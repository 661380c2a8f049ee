use thiserror::Error;

/// Errors shared by all modules of this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A sequence contained a symbol id outside its declared alphabet.
    #[error("symbol id {symbol} out of range for alphabet of size {alphabet_size}")]
    InvalidSymbol { symbol: u32, alphabet_size: u32 },

    /// A parameter violated a documented precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An enumeration oracle was asked to do more work than its budget allows.
    /// Oracles never silently approximate; they refuse instead.
    #[error("budget exceeded: {needed} units needed, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    /// A simulation produced samples with zero variance (e.g. a point-mass
    /// letter distribution), so standardization is impossible.
    #[error("degenerate distribution: sample variance is zero")]
    DegenerateDistribution,

    /// An asymptotic formula was evaluated outside the range where it is defined.
    #[error("alpha = {alpha} outside supported range {range}")]
    AlphaOutOfRange { alpha: f64, range: &'static str },
}

pub type Result<T> = std::result::Result<T, Error>;
