//! Exact arithmetic for missing-digit Cantor sets and restricted-digit integers.
//!
//! The library has three layers that build on each other:
//!
//! - **Integer digits** ([`digits`], [`restricted`]): base-`b` digit
//!   expansions, membership tests for digit-restricted integer sets, and
//!   Kummer's carry criterion for prime divisibility of central binomial
//!   coefficients.
//! - **Cantor sets** ([`fractal`]): finite-depth interval approximations of
//!   missing-digit sets, Newhouse thickness computed exactly over rationals,
//!   Minkowski sums and power images.
//! - **Certificates and searches** ([`certify`], [`orbit`], [`witness`]):
//!   checkable records for gap-lemma style intersection arguments, certified
//!   enclosures of logarithm ratios driving orbit searches on the torus, and
//!   the number-theoretic witness hunts (sum triples, simultaneous digit
//!   restrictions, Waring-style coverage) those arguments support.
//!
//! All interval endpoints are exact `BigRational` values; every verdict a
//! certificate reports can be re-derived from the data echoed inside it.
//! Floating point appears only in diagnostic output (empirical exponents,
//! printed decimals) and in pre-filters whose rejections are re-checked
//! exactly.

pub mod certify;
pub mod digits;
pub mod fractal;
pub mod orbit;
pub mod rational;
pub mod restricted;
pub mod witness;

pub use rational::Rational;

use thiserror::Error;

/// Error type shared by all modules.
///
/// `Domain` marks inputs outside an operation's contract, `Capacity` marks
/// inputs that exceed a documented resource cap, and `Refusal` marks a
/// certificate precondition that failed, naming the violated inequality.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("refused: {0}")]
    Refusal(String),
}

impl Error {
    /// Process exit code for CLI reporting: 1 for domain errors and
    /// refusals, 2 for capacity limits.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) | Error::Refusal(_) => 1,
            Error::Capacity(_) => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
