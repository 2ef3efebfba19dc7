//! Certified evaluation of `n * x`: floors, ceilings and fractional parts.

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::value::{QuadraticSurd, RealSpec};
use super::Precision;
use crate::{Error, Result};

/// Rational enclosure `lo/den <= value <= hi/den` with `den > 0`.
#[derive(Clone, Debug)]
pub(crate) struct Enclosure {
    pub lo: BigInt,
    pub hi: BigInt,
    pub den: BigInt,
}

impl Enclosure {
    pub(crate) fn exact(num: BigInt, den: BigInt) -> Self {
        let (num, den) = if den.is_negative() {
            (-num, -den)
        } else {
            (num, den)
        };
        Self {
            lo: num.clone(),
            hi: num,
            den,
        }
    }

    /// Encloses the interval spanned by two fractions.
    pub(crate) fn from_fractions(n1: BigInt, d1: BigInt, n2: BigInt, d2: BigInt) -> Self {
        let (n1, d1) = if d1.is_negative() {
            (-n1, -d1)
        } else {
            (n1, d1)
        };
        let (n2, d2) = if d2.is_negative() {
            (-n2, -d2)
        } else {
            (n2, d2)
        };
        let a = n1 * &d2;
        let b = n2 * &d1;
        let den = d1 * d2;
        if a <= b {
            Self { lo: a, hi: b, den }
        } else {
            Self { lo: b, hi: a, den }
        }
    }

    fn scale(mut self, n: u64) -> Self {
        let n = BigInt::from(n);
        self.lo *= &n;
        self.hi *= &n;
        self
    }

    pub(crate) fn floor(&self) -> Option<BigInt> {
        let lo = self.lo.div_floor(&self.den);
        let hi = self.hi.div_floor(&self.den);
        (lo == hi).then_some(lo)
    }

    fn ceil(&self) -> Option<BigInt> {
        let lo = self.lo.div_ceil(&self.den);
        let hi = self.hi.div_ceil(&self.den);
        (lo == hi).then_some(lo)
    }

    /// The cell `k` with `{value} in [k/cells, (k+1)/cells)` if the
    /// enclosure pins it down.
    fn frac_cell(&self, cells: &BigInt) -> Option<BigInt> {
        let k = self.floor()?;
        let base = &k * &self.den;
        let lo = (&self.lo - &base) * cells;
        let hi = (&self.hi - &base) * cells;
        let c_lo = lo.div_floor(&self.den);
        let c_hi = hi.div_floor(&self.den);
        (c_lo == c_hi).then_some(c_lo)
    }
}

/// A closed rational interval `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bracket {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Bracket {
    pub fn contains(&self, v: &BigRational) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }
}

fn bits_for_digits(digits: u32) -> u64 {
    // log2(10) < 3.3220
    digits as u64 * 3322 / 1000 + 4
}

impl RealSpec {
    /// Encloses `n * x` with width roughly `10^-digits` (exact for rationals).
    /// Fails only when a decimal map's pole cannot be excluded.
    pub(crate) fn enclose_mul(&self, n: u64, digits: u32) -> Result<Enclosure> {
        match self {
            RealSpec::Rational(r) => Ok(Enclosure::exact(
                r.numer() * BigInt::from(n),
                r.denom().clone(),
            )),
            RealSpec::Quadratic(q) => Ok(enclose_quadratic(q, n, digits)),
            RealSpec::Decimal(dr) => dr
                .enclose(digits)
                .map(|e| e.scale(n))
                .ok_or(Error::PrecisionExhausted { digits }),
        }
    }

    fn accuracy_limit(&self) -> Option<u32> {
        match self {
            RealSpec::Decimal(dr) => Some(dr.accuracy()),
            _ => None,
        }
    }

    /// Walks the precision ladder until `check` accepts an enclosure of `n * x`.
    pub(crate) fn certify<T>(
        &self,
        n: u64,
        prec: &Precision,
        mut check: impl FnMut(&Enclosure) -> Option<T>,
    ) -> Result<T> {
        let mut last = 0;
        for digits in prec.rungs(self.accuracy_limit()) {
            last = digits;
            if let Ok(enc) = self.enclose_mul(n, digits) {
                if let Some(v) = check(&enc) {
                    return Ok(v);
                }
            }
            if self.is_rational() {
                break;
            }
        }
        Err(Error::PrecisionExhausted { digits: last })
    }

    /// `floor(n * x)`, exact.
    pub fn floor_mul(&self, n: u64, prec: &Precision) -> Result<BigInt> {
        match self {
            RealSpec::Rational(r) => Ok((r.numer() * BigInt::from(n)).div_floor(r.denom())),
            RealSpec::Quadratic(q) => Ok(floor_quadratic(q, n)),
            RealSpec::Decimal(_) => self.certify(n, prec, Enclosure::floor),
        }
    }

    /// `ceil(n * x)`, exact.
    pub fn ceil_mul(&self, n: u64, prec: &Precision) -> Result<BigInt> {
        match self {
            RealSpec::Rational(r) => Ok((r.numer() * BigInt::from(n)).div_ceil(r.denom())),
            // n * x is irrational for n > 0
            RealSpec::Quadratic(q) if n > 0 => Ok(floor_quadratic(q, n) + 1),
            RealSpec::Quadratic(_) => Ok(BigInt::zero()),
            RealSpec::Decimal(_) => self.certify(n, prec, Enclosure::ceil),
        }
    }

    /// Bracket around `{n * x}` no wider than `10^-prec.frac_tolerance_digits`.
    pub fn frac_bracket(&self, n: u64, prec: &Precision) -> Result<Bracket> {
        if n == 0 {
            return Ok(Bracket {
                lo: BigRational::zero(),
                hi: BigRational::zero(),
            });
        }
        let tol = super::value::pow10(prec.frac_tolerance_digits);
        self.certify(n, prec, |enc| {
            let k = enc.floor()?;
            if (&enc.hi - &enc.lo) * &tol > enc.den {
                return None;
            }
            let base = &k * &enc.den;
            Some(Bracket {
                lo: BigRational::new(&enc.lo - &base, enc.den.clone()),
                hi: BigRational::new(&enc.hi - &base, enc.den.clone()),
            })
        })
    }

    /// The cell `k` in `0..cells` with `{n * x} in [k/cells, (k+1)/cells)`,
    /// escalating precision until the bracket sits inside one cell.
    pub fn frac_cell(&self, n: u64, cells: u64, prec: &Precision) -> Result<u64> {
        let m = BigInt::from(cells);
        let k = self.certify(n, prec, |enc| enc.frac_cell(&m))?;
        Ok(k.to_u64().expect("cell index below cell count"))
    }
}

fn enclose_quadratic(q: &QuadraticSurd, n: u64, digits: u32) -> Enclosure {
    if n == 0 {
        return Enclosure::exact(BigInt::zero(), BigInt::from(1));
    }
    let n = BigInt::from(n);
    let bits = bits_for_digits(digits);
    let nb = &n * q.b();
    let radicand = (&nb * &nb * q.d()) << (2 * bits);
    let t = radicand.sqrt();
    let base = (&n * q.a()) << bits;
    let den = q.c() << bits;
    if nb.is_negative() {
        Enclosure {
            lo: &base - &t - 1,
            hi: base - t,
            den,
        }
    } else {
        Enclosure {
            lo: &base + &t,
            hi: base + t + 1,
            den,
        }
    }
}

/// `floor((n*a + n*b*sqrt(d)) / c)` by integer square-root bracketing.
fn floor_quadratic(q: &QuadraticSurd, n: u64) -> BigInt {
    if n == 0 {
        return BigInt::zero();
    }
    if let Some(v) = floor_quadratic_small(q, n) {
        return BigInt::from(v);
    }
    let n = BigInt::from(n);
    let nb = &n * q.b();
    let t: BigInt = (&nb * &nb * q.d()).sqrt();
    let x = &n * q.a();
    // sqrt term lies strictly inside (t, t+1)
    if nb.is_negative() {
        (x - t - BigInt::one()).div_floor(q.c())
    } else {
        (x + t).div_floor(q.c())
    }
}

fn floor_quadratic_small(q: &QuadraticSurd, n: u64) -> Option<i128> {
    let a = q.a().to_i128()?;
    let b = q.b().to_i128()?;
    let d = q.d().to_u128()?;
    let c = q.c().to_i128()?;
    let nb = b.checked_mul(n as i128)?;
    let nb_abs = nb.unsigned_abs();
    let radicand = nb_abs.checked_mul(nb_abs)?.checked_mul(d)?;
    let t = i128::try_from(radicand.sqrt()).ok()?;
    let x = a.checked_mul(n as i128)?;
    let num = if nb < 0 {
        x.checked_sub(t)?.checked_sub(1)?
    } else {
        x.checked_add(t)?
    };
    Some(Integer::div_floor(&num, &c))
}

/// `floor(n * x)` at the default precision ladder.
pub fn certified_floor(x: &RealSpec, n: u64) -> Result<BigInt> {
    x.floor_mul(n, &Precision::default())
}

/// A bracket around `{n * x}` at the default tolerance `10^-30`.
pub fn certified_frac(x: &RealSpec, n: u64) -> Result<Bracket> {
    x.frac_bracket(n, &Precision::default())
}
