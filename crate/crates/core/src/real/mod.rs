//! Exact real parameters and the continued-fraction machinery built on them.

mod cf;
mod consts;
mod eval;
mod ostrowski;
mod parse;
mod value;

pub use cf::{
    cf_expand, cf_period, convergents, reciprocal_cf_shift, CfPeriod, ContinuedFraction,
    Convergents,
};
pub use eval::{certified_floor, certified_frac, Bracket};
pub use ostrowski::{ostrowski_expand, OstrowskiExpansion, OstrowskiSystem};
pub use value::{DecimalReal, QuadraticSurd, RealSpec};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

/// Precision ladder used whenever a decimal value (or an irrational enclosure)
/// has to be certified.
///
/// Evaluation starts at [`Precision::START_DIGITS`] and doubles until
/// `max_digits`; decimal constants additionally stop at their own accuracy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Precision {
    pub max_digits: u32,
    /// `certified_frac` brackets are at most `10^-frac_tolerance_digits` wide.
    pub frac_tolerance_digits: u32,
}

impl Precision {
    pub const START_DIGITS: u32 = 50;
    pub const DEFAULT_MAX_DIGITS: u32 = 3200;

    pub fn with_max_digits(max_digits: u32) -> Self {
        Self {
            max_digits,
            ..Self::default()
        }
    }

    /// Digit counts visited by the ladder, capped by `limit` (a decimal
    /// constant's accuracy) when given.
    pub(crate) fn rungs(&self, limit: Option<u32>) -> impl Iterator<Item = u32> {
        let max = match limit {
            Some(l) => l.min(self.max_digits),
            None => self.max_digits,
        };
        let mut next = Some(Self::START_DIGITS.min(max));
        core::iter::from_fn(move || {
            let cur = next?;
            next = if cur >= max {
                None
            } else {
                Some(cur.saturating_mul(2).min(max))
            };
            Some(cur)
        })
    }
}

impl Default for Precision {
    fn default() -> Self {
        Self {
            max_digits: Self::DEFAULT_MAX_DIGITS,
            frac_tolerance_digits: 30,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    #[test]
    fn ladder_doubles_and_stops_at_cap() {
        let p = Precision::default();
        let r: Vec<u32> = p.rungs(None).collect();
        assert_eq!(r, [50, 100, 200, 400, 800, 1600, 3200]);
        let r: Vec<u32> = p.rungs(Some(200)).collect();
        assert_eq!(r, [50, 100, 200]);
        let r: Vec<u32> = p.rungs(Some(120)).collect();
        assert_eq!(r, [50, 100, 120]);
        let r: Vec<u32> = Precision::with_max_digits(30).rungs(Some(200)).collect();
        assert_eq!(r, [30]);
    }
}
