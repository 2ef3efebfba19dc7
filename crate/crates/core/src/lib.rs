//! Exact generation and analysis of Halton subsequences indexed by `floor(n * beta)`.
//!
//! The crate is `no_std` (it needs `alloc`). Every quantity that enters an
//! inequality check is computed in exact integer or rational arithmetic:
//!
//! * [`real`] holds the exact real parameters (rationals, quadratic surds and
//!   decimal constants with a certified error bound) together with certified
//!   floors, continued fractions and Ostrowski expansions.
//! * [`halton`] generates radical inverses, Halton points and the
//!   `floor(n * beta)`-indexed subsequence.
//! * [`discrepancy`] computes exact star discrepancies and local cell
//!   discrepancies of Kronecker sequences.
//! * [`bounds`] evaluates the local-discrepancy decomposition bound, the
//!   partial-quotient bound and growth statistics.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bounds;
pub mod discrepancy;
mod error;
pub mod halton;
pub mod real;

pub use error::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Default cap on the number of anchored-box evaluations an exact
/// discrepancy computation may perform.
pub const DEFAULT_WORK_BUDGET: u128 = 1_000_000_000;

/// Knobs shared by the heavier operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Settings {
    pub precision: real::Precision,
    pub work_budget: u128,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            precision: real::Precision::default(),
            work_budget: DEFAULT_WORK_BUDGET,
        }
    }
}
