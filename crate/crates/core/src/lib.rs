//! Exact and sampled analysis of the random process
//!
//! ```text
//! X_0 = 0,   X_{n+1} = 2 X_n + b_n  (mod p),   b_n i.i.d. in {-1, 0, 1}
//! ```
//!
//! The crate is `no_std` and only needs `alloc`. It covers:
//!
//! * [`process`]: parameters, digit strings and seeded trajectory sampling,
//! * [`exact`]: dense evolution of the law of `X_n` and its distance,
//!   entropy, support and typical-set functionals,
//! * [`canonical`]: the sign-coherent binary standard form of a signed-digit
//!   string and its block decomposition,
//! * [`stats`]: adjacent-pair cell counts, by exhaustive enumeration and by
//!   Monte Carlo, with odd/even splits,
//! * [`bounds`]: the mixing-threshold constants and the exact or log-domain
//!   counting sums they come from.
//!
//! IO, parallel drivers and the command line live in the `cdg` crate.

#![no_std]
#![deny(missing_debug_implementations)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bounds;
pub mod canonical;
mod digits;
mod error;
pub mod exact;
pub mod process;
pub mod stats;

pub use digits::{Digit, SignedDigitString, MAX_FIXED_WIDTH_DIGITS};
pub use error::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;
