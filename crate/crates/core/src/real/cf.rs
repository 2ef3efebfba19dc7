use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::value::{QuadraticSurd, RealSpec};
use super::Precision;
use crate::{Error, Result};

/// `[a0; a1, a2, ...]`, truncated or terminated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContinuedFraction {
    pub a0: BigInt,
    /// `a_1, a_2, ...`, each at least 1.
    pub partial_quotients: Vec<BigInt>,
}

impl ContinuedFraction {
    /// `a_k` with `a_0` at index 0.
    pub fn term(&self, k: usize) -> Option<&BigInt> {
        if k == 0 {
            Some(&self.a0)
        } else {
            self.partial_quotients.get(k - 1)
        }
    }

    pub fn depth(&self) -> usize {
        self.partial_quotients.len()
    }
}

/// Convergents `p_k / q_k` for `k = 0..=K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Convergents {
    pub terms: Vec<(BigInt, BigInt)>,
}

impl Convergents {
    pub fn denominators(&self) -> impl Iterator<Item = &BigInt> {
        self.terms.iter().map(|(_, q)| q)
    }
}

/// Eventually periodic expansion of a quadratic irrational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CfPeriod {
    /// Terms before the period starts, beginning with `a_0`.
    pub preperiod: Vec<BigInt>,
    pub period: Vec<BigInt>,
}

/// `x = (p + sqrt(d)) / q` with `q | d - p^2`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct SurdState {
    p: BigInt,
    q: BigInt,
}

struct SurdIter {
    state: SurdState,
    d: BigInt,
    root: BigInt,
}

impl SurdIter {
    fn new(x: &QuadraticSurd) -> Self {
        let d = x.b() * x.b() * x.d();
        let (mut p, mut q, mut d) = if x.b().is_positive() {
            (x.a().clone(), x.c().clone(), d)
        } else {
            (-x.a(), -x.c(), d)
        };
        if !(&d - &p * &p).is_multiple_of(&q) {
            let m = q.abs();
            p *= &m;
            d *= &q * &q;
            q *= &m;
        }
        let root = d.sqrt();
        Self {
            state: SurdState { p, q },
            d,
            root,
        }
    }

    fn step(&mut self) -> BigInt {
        let SurdState { p, q } = &self.state;
        let a = if q.is_positive() {
            (p + &self.root).div_floor(q)
        } else {
            -(p + &self.root).div_floor(&-q) - 1
        };
        let np = &a * q - p;
        let nq = (&self.d - &np * &np) / q;
        self.state = SurdState { p: np, q: nq };
        a
    }
}

impl RealSpec {
    /// `a_0` and the first `k` partial quotients (fewer if a rational
    /// expansion terminates).
    pub fn continued_fraction(&self, k: usize, prec: &Precision) -> Result<ContinuedFraction> {
        let mut terms = match self {
            RealSpec::Rational(r) => {
                let (mut p, mut q) = (r.numer().clone(), r.denom().clone());
                let mut out = Vec::new();
                while !q.is_zero() && out.len() <= k {
                    let (a, rem) = p.div_mod_floor(&q);
                    out.push(a);
                    p = core::mem::replace(&mut q, rem);
                }
                out
            }
            RealSpec::Quadratic(x) => {
                let mut it = SurdIter::new(x);
                (0..=k).map(|_| it.step()).collect()
            }
            RealSpec::Decimal(_) => self.decimal_cf(k, prec)?,
        };
        let a0 = terms.remove(0);
        Ok(ContinuedFraction {
            a0,
            partial_quotients: terms,
        })
    }

    fn decimal_cf(&self, k: usize, prec: &Precision) -> Result<Vec<BigInt>> {
        let RealSpec::Decimal(dr) = self else {
            unreachable!()
        };
        let mut last = 0;
        for digits in prec.rungs(Some(dr.accuracy())) {
            last = digits;
            let (lo, hi, den) = dr.base_enclosure(digits);
            let [mut m0, mut m1, mut m2, mut m3] = dr.map().clone();
            let mut out = Vec::with_capacity(k + 1);
            while out.len() <= k {
                let d_lo = &m2 * &lo + &m3 * &den;
                let d_hi = &m2 * &hi + &m3 * &den;
                if d_lo.is_zero() || d_hi.is_zero() || d_lo.sign() != d_hi.sign() {
                    break;
                }
                let f_lo = (&m0 * &lo + &m1 * &den).div_floor(&d_lo);
                let f_hi = (&m0 * &hi + &m1 * &den).div_floor(&d_hi);
                if f_lo != f_hi {
                    break;
                }
                // x <- 1 / (x - a)
                let n2 = &m0 - &f_lo * &m2;
                let n3 = &m1 - &f_lo * &m3;
                m0 = core::mem::replace(&mut m2, n2);
                m1 = core::mem::replace(&mut m3, n3);
                out.push(f_lo);
            }
            if out.len() > k {
                return Ok(out);
            }
        }
        Err(Error::PrecisionExhausted { digits: last })
    }
}

/// First `k` partial quotients of `x` at the default precision ladder.
pub fn cf_expand(x: &RealSpec, k: usize) -> Result<ContinuedFraction> {
    x.continued_fraction(k, &Precision::default())
}

/// `p_k = a_k p_{k-1} + p_{k-2}`, `q_k = a_k q_{k-1} + q_{k-2}` from
/// `p_{-1} = 1, p_{-2} = 0, q_{-1} = 0, q_{-2} = 1`, so `q_0 = 1` and
/// `q_1 = a_1`.
pub fn convergents(cf: &ContinuedFraction) -> Convergents {
    let (mut p2, mut p1) = (BigInt::zero(), BigInt::one());
    let (mut q2, mut q1) = (BigInt::one(), BigInt::zero());
    let terms = core::iter::once(&cf.a0)
        .chain(&cf.partial_quotients)
        .map(|a| {
            let p = a * &p1 + &p2;
            let q = a * &q1 + &q2;
            p2 = core::mem::replace(&mut p1, p.clone());
            q2 = core::mem::replace(&mut q1, q.clone());
            (p, q)
        })
        .collect();
    Convergents { terms }
}

/// Returns `(floor(y), a_1(1/y))`; the two agree for every `y > 1`.
pub fn reciprocal_cf_shift(y: &RealSpec, prec: &Precision) -> Result<(BigInt, BigInt)> {
    if y.cmp_int(1, prec)? != core::cmp::Ordering::Greater {
        return Err(Error::InvalidArgument(
            "reciprocal shift needs y > 1".into(),
        ));
    }
    let floor = y.floor_mul(1, prec)?;
    let cf = y.recip()?.continued_fraction(1, prec)?;
    let a1 = cf
        .partial_quotients
        .first()
        .cloned()
        .ok_or(Error::InvalidArgument(
            "1/y has no first partial quotient".into(),
        ))?;
    Ok((floor, a1))
}

/// Detects the pre-period and period of a quadratic irrational's expansion
/// by iterating the exact surd state until it repeats.
pub fn cf_period(x: &QuadraticSurd) -> CfPeriod {
    let mut it = SurdIter::new(x);
    let mut seen = BTreeMap::new();
    let mut terms = Vec::new();
    loop {
        if let Some(&start) = seen.get(&it.state) {
            let period = terms.split_off(start);
            return CfPeriod {
                preperiod: terms,
                period,
            };
        }
        seen.insert(it.state.clone(), terms.len());
        terms.push(it.step());
    }
}
