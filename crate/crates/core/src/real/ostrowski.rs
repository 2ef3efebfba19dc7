use alloc::vec::Vec;

use num_traits::ToPrimitive;

use super::cf::convergents;
use super::value::RealSpec;
use super::Precision;
use crate::{Error, Result};

/// `N = digits[0]*q_0 + digits[1]*q_1 + ... + digits[r]*q_r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OstrowskiExpansion {
    pub digits: Vec<u64>,
    pub denominators: Vec<u64>,
}

impl OstrowskiExpansion {
    pub fn value(&self) -> u128 {
        self.digits
            .iter()
            .zip(&self.denominators)
            .map(|(&d, &q)| d as u128 * q as u128)
            .sum()
    }
}

/// Convergent denominators of `x` up to the first one exceeding `limit`.
#[derive(Clone, Debug)]
pub struct OstrowskiSystem {
    denominators: Vec<u128>,
    quotients: Vec<u64>,
    limit: u64,
}

const MAX_DEPTH: usize = 1 << 14;

impl OstrowskiSystem {
    pub fn new(x: &RealSpec, limit: u64, prec: &Precision) -> Result<Self> {
        let mut depth = 32;
        loop {
            let cf = x.continued_fraction(depth, prec)?;
            let conv = convergents(&cf);
            let mut denominators = Vec::new();
            for q in conv.denominators() {
                let q = q.to_u128().unwrap_or(u128::MAX);
                denominators.push(q);
                if q > limit as u128 {
                    let quotients = cf
                        .partial_quotients
                        .iter()
                        .take(denominators.len())
                        .map(|a| a.to_u64().unwrap_or(u64::MAX))
                        .collect();
                    return Ok(Self {
                        denominators,
                        quotients,
                        limit,
                    });
                }
            }
            if cf.depth() < depth || depth >= MAX_DEPTH {
                return Err(Error::InsufficientConvergents {
                    target: limit,
                    depth: cf.depth(),
                });
            }
            depth *= 2;
        }
    }

    pub fn denominators(&self) -> &[u128] {
        &self.denominators
    }

    /// `a_1, a_2, ...` as far as the system reaches.
    pub fn partial_quotients(&self) -> &[u64] {
        &self.quotients
    }

    /// Greedy expansion: the leading index `r` is the largest with `q_r <= n`.
    pub fn expand(&self, n: u64) -> Result<OstrowskiExpansion> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "Ostrowski expansion needs N >= 1".into(),
            ));
        }
        if n > self.limit {
            return Err(Error::InsufficientConvergents {
                target: n,
                depth: self.quotients.len(),
            });
        }
        let r = self
            .denominators
            .iter()
            .rposition(|&q| q <= n as u128)
            .expect("q_0 = 1");
        let mut digits = alloc::vec![0u64; r + 1];
        let mut rem = n as u128;
        for i in (0..=r).rev() {
            let q = self.denominators[i];
            digits[i] = (rem / q) as u64;
            rem %= q;
        }
        debug_assert_eq!(rem, 0);
        Ok(OstrowskiExpansion {
            digits,
            denominators: self.denominators[..=r].iter().map(|&q| q as u64).collect(),
        })
    }
}

/// Ostrowski expansion of `n` in the numeration system of `x`'s convergent
/// denominators.
pub fn ostrowski_expand(n: u64, x: &RealSpec) -> Result<OstrowskiExpansion> {
    OstrowskiSystem::new(x, n, &Precision::default())?.expand(n)
}
