//! Exact counting and statistics for common-subsequence embedding pairs.
//!
//! Given two words over a shared finite alphabet, the central quantity is the
//! number of pairs of strictly increasing index tuples of length `k` whose
//! letters agree position by position, together with its sum over all `k`.
//! The crate provides exact counting engines ([`count`]), exact rational
//! moments and second-moment bounds with majorization machinery ([`moments`]),
//! log-space asymptotic formulas for alphabets growing with the word length
//! ([`asymptotics`]), and seeded Monte Carlo distribution checks
//! ([`montecarlo`]).

pub mod asymptotics;
pub mod count;
pub mod error;
pub mod logspace;
pub mod moments;
pub mod montecarlo;
pub mod seq;

pub use error::{Error, Result};
pub use seq::Sequence;

/// Arbitrary-precision nonnegative count (embedding counts grow like `n^{2k}`).
pub type BigCount = num_bigint::BigUint;

/// Reduced ratio of arbitrary-precision integers, for exact moments and bounds.
pub type ExactRational = num_rational::BigRational;
