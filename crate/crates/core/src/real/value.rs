use alloc::format;
use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::consts;
use super::eval::Enclosure;
use super::Precision;
use crate::{Error, Result};

/// An exactly specified real number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RealSpec {
    Rational(BigRational),
    Quadratic(QuadraticSurd),
    Decimal(DecimalReal),
}

/// `(a + b*sqrt(d)) / c` with `d` not a perfect square, `b != 0` and `c > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticSurd {
    a: BigInt,
    b: BigInt,
    d: BigInt,
    c: BigInt,
}

/// A decimal constant known to within `10^-accuracy`, optionally pushed
/// through an integer Moebius map `(m0*D + m1) / (m2*D + m3)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecimalReal {
    name: Option<&'static str>,
    mantissa: BigInt,
    scale: u32,
    accuracy: u32,
    map: [BigInt; 4],
}

pub(crate) fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

pub(crate) fn pow10(k: u32) -> BigInt {
    num_traits::pow(BigInt::from(10u32), k as usize)
}

impl QuadraticSurd {
    pub fn new(a: BigInt, b: BigInt, d: BigInt, c: BigInt) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::InvalidReal("zero denominator"));
        }
        if d.sign() != Sign::Plus {
            return Err(Error::InvalidReal("radicand must be positive"));
        }
        if is_perfect_square(&d) {
            return Err(Error::InvalidReal("radicand is a perfect square"));
        }
        if b.is_zero() {
            return Err(Error::InvalidReal("surd coefficient is zero"));
        }
        let (mut a, mut b, mut c) = (a, b, c);
        if c.is_negative() {
            a = -a;
            b = -b;
            c = -c;
        }
        let g = a.gcd(&b).gcd(&c);
        if !g.is_one() {
            a /= &g;
            b /= &g;
            c /= &g;
        }
        Ok(Self { a, b, d, c })
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }
    pub fn b(&self) -> &BigInt {
        &self.b
    }
    pub fn d(&self) -> &BigInt {
        &self.d
    }
    pub fn c(&self) -> &BigInt {
        &self.c
    }

    /// Sign of `x + y*sqrt(d)`; never zero unless both are zero.
    pub(crate) fn sign_of(x: &BigInt, y: &BigInt, d: &BigInt) -> Ordering {
        let zero = BigInt::zero();
        match (x.cmp(&zero), y.cmp(&zero)) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (Ordering::Greater, Ordering::Greater) => Ordering::Greater,
            (Ordering::Less, Ordering::Less) => Ordering::Less,
            (Ordering::Greater, Ordering::Less) => (x * x).cmp(&(y * y * d)),
            (Ordering::Less, Ordering::Greater) => (y * y * d).cmp(&(x * x)),
        }
    }
}

impl DecimalReal {
    /// `mantissa / 10^scale`, accurate to `10^-accuracy`.
    pub fn new(mantissa: BigInt, scale: u32, accuracy: u32) -> Result<Self> {
        if accuracy == 0 {
            return Err(Error::InvalidReal("decimal accuracy must be positive"));
        }
        Ok(Self {
            name: None,
            mantissa,
            scale,
            accuracy,
            map: identity_map(),
        })
    }

    fn named(name: &'static str, digits: &str) -> Self {
        let (int, frac) = digits
            .split_once('.')
            .expect("constant has a decimal point");
        let mut s = String::from(int);
        s.push_str(frac);
        Self {
            name: Some(name),
            mantissa: s.parse().expect("constant digits"),
            scale: frac.len() as u32,
            accuracy: frac.len() as u32,
            map: identity_map(),
        }
    }

    pub fn accuracy(&self) -> u32 {
        self.accuracy
    }

    pub(crate) fn map(&self) -> &[BigInt; 4] {
        &self.map
    }

    fn is_plain(&self) -> bool {
        self.map == identity_map()
    }

    /// Enclosure `[lo, hi] / 10^p'` of the underlying constant at `p` digits.
    pub(crate) fn base_enclosure(&self, digits: u32) -> (BigInt, BigInt, BigInt) {
        let p = digits.min(self.accuracy);
        let (t, truncated) = if p >= self.scale {
            (&self.mantissa * pow10(p - self.scale), false)
        } else {
            (self.mantissa.div_floor(&pow10(self.scale - p)), true)
        };
        let lo = &t - 1;
        let hi = t + if truncated { 2 } else { 1 };
        (lo, hi, pow10(p))
    }

    /// Encloses the mapped value; `None` when the pole of the map cannot be
    /// excluded at this precision.
    pub(crate) fn enclose(&self, digits: u32) -> Option<Enclosure> {
        let (lo, hi, den) = self.base_enclosure(digits);
        let [m0, m1, m2, m3] = &self.map;
        let num_lo = m0 * &lo + m1 * &den;
        let den_lo = m2 * &lo + m3 * &den;
        let num_hi = m0 * &hi + m1 * &den;
        let den_hi = m2 * &hi + m3 * &den;
        if den_lo.is_zero() || den_hi.is_zero() || den_lo.sign() != den_hi.sign() {
            return None;
        }
        Some(Enclosure::from_fractions(num_lo, den_lo, num_hi, den_hi))
    }

    fn compose(&self, outer: [BigInt; 4]) -> Result<Self> {
        let [a, b, c, d] = outer;
        let [p, q, r, s] = &self.map;
        let map = [
            &a * p + &b * r,
            &a * q + &b * s,
            &c * p + &d * r,
            &c * q + &d * s,
        ];
        if &map[0] * &map[3] == &map[1] * &map[2] {
            return Err(Error::InvalidReal("degenerate transform"));
        }
        Ok(Self {
            map,
            ..self.clone()
        })
    }

    fn fmt_base(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(name) = self.name {
            return f.write_str(name);
        }
        let neg = self.mantissa.is_negative();
        let digits = self.mantissa.abs().to_str_radix(10);
        let scale = self.scale as usize;
        let padded = if digits.len() <= scale {
            format!("{}{}", "0".repeat(scale + 1 - digits.len()), digits)
        } else {
            digits
        };
        let (int, frac) = padded.split_at(padded.len() - scale);
        if neg {
            f.write_str("-")?;
        }
        if frac.is_empty() {
            write!(f, "{int}")?;
        } else {
            write!(f, "{int}.{frac}")?;
        }
        write!(f, "~digits={}", self.accuracy)
    }
}

fn identity_map() -> [BigInt; 4] {
    [BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one()]
}

impl RealSpec {
    pub fn rational(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let den = den.into();
        if den.is_zero() {
            return Err(Error::InvalidReal("zero denominator"));
        }
        Ok(RealSpec::Rational(BigRational::new(num.into(), den)))
    }

    pub fn integer(n: impl Into<BigInt>) -> Self {
        RealSpec::Rational(BigRational::from_integer(n.into()))
    }

    /// `(a + b*sqrt(d)) / c`, collapsing to a rational when `b == 0` or `d`
    /// is a perfect square.
    pub fn quadratic(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        d: impl Into<BigInt>,
        c: impl Into<BigInt>,
    ) -> Result<Self> {
        let (a, b, d, c) = (a.into(), b.into(), d.into(), c.into());
        if c.is_zero() {
            return Err(Error::InvalidReal("zero denominator"));
        }
        if d.is_negative() {
            return Err(Error::InvalidReal("radicand must be non-negative"));
        }
        if b.is_zero() || d.is_zero() {
            return Ok(RealSpec::Rational(BigRational::new(a, c)));
        }
        if is_perfect_square(&d) {
            return Ok(RealSpec::Rational(BigRational::new(a + b * d.sqrt(), c)));
        }
        QuadraticSurd::new(a, b, d, c).map(RealSpec::Quadratic)
    }

    pub fn sqrt(d: impl Into<BigInt>) -> Result<Self> {
        Self::quadratic(0, 1, d, 1)
    }

    /// `(1 + sqrt(5)) / 2`.
    pub fn golden_ratio() -> Self {
        Self::quadratic(1, 1, 5, 2).expect("valid surd")
    }

    pub fn pi() -> Self {
        RealSpec::Decimal(DecimalReal::named("pi", consts::PI_200))
    }

    pub fn e() -> Self {
        RealSpec::Decimal(DecimalReal::named("e", consts::E_200))
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, RealSpec::Rational(_))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            RealSpec::Rational(r) => Some(r),
            _ => None,
        }
    }

    /// `(a*x + b) / (c*x + d)` for integers `a, b, c, d`.
    pub fn mobius(&self, a: &BigInt, b: &BigInt, c: &BigInt, d: &BigInt) -> Result<Self> {
        match self {
            RealSpec::Rational(r) => {
                let num =
                    BigRational::from_integer(a.clone()) * r + BigRational::from_integer(b.clone());
                let den =
                    BigRational::from_integer(c.clone()) * r + BigRational::from_integer(d.clone());
                if den.is_zero() {
                    return Err(Error::InvalidReal("division by zero"));
                }
                Ok(RealSpec::Rational(num / den))
            }
            RealSpec::Quadratic(q) => {
                let (qa, qb, qd, qc) = (&q.a, &q.b, &q.d, &q.c);
                let na = a * qa + b * qc;
                let nb = a * qb;
                let da = c * qa + d * qc;
                let db = c * qb;
                // (na + nb*s)(da - db*s) / (da^2 - db^2*d)
                let den = &da * &da - &db * &db * qd;
                if den.is_zero() {
                    return Err(Error::InvalidReal("division by zero"));
                }
                let ra = &na * &da - &nb * &db * qd;
                let rb = &nb * &da - &na * &db;
                Self::quadratic(ra, rb, qd.clone(), den)
            }
            RealSpec::Decimal(dr) => dr
                .compose([a.clone(), b.clone(), c.clone(), d.clone()])
                .map(RealSpec::Decimal),
        }
    }

    pub fn recip(&self) -> Result<Self> {
        self.mobius(
            &BigInt::zero(),
            &BigInt::one(),
            &BigInt::one(),
            &BigInt::zero(),
        )
    }

    /// `x * k`.
    pub fn mul_int(&self, k: &BigInt) -> Result<Self> {
        self.mobius(k, &BigInt::zero(), &BigInt::zero(), &BigInt::one())
    }

    /// `x / k`.
    pub fn div_int(&self, k: &BigInt) -> Result<Self> {
        if k.is_zero() {
            return Err(Error::InvalidReal("division by zero"));
        }
        self.mobius(&BigInt::one(), &BigInt::zero(), &BigInt::zero(), k)
    }

    /// `x + k`.
    pub fn add_int(&self, k: &BigInt) -> Result<Self> {
        self.mobius(&BigInt::one(), k, &BigInt::zero(), &BigInt::one())
    }

    /// Exact three-way comparison against a rational.
    pub fn cmp_rational(&self, r: &BigRational, prec: &Precision) -> Result<Ordering> {
        match self {
            RealSpec::Rational(x) => Ok(x.cmp(r)),
            RealSpec::Quadratic(q) => {
                let x = &q.a * r.denom() - r.numer() * &q.c;
                let y = &q.b * r.denom();
                Ok(QuadraticSurd::sign_of(&x, &y, &q.d))
            }
            RealSpec::Decimal(dr) => {
                let mut last = 0;
                for digits in prec.rungs(Some(dr.accuracy)) {
                    last = digits;
                    let Some(enc) = dr.enclose(digits) else {
                        continue;
                    };
                    let lo = r.numer() * &enc.den;
                    let scaled_lo = &enc.lo * r.denom();
                    let scaled_hi = &enc.hi * r.denom();
                    if scaled_hi < lo {
                        return Ok(Ordering::Less);
                    }
                    if scaled_lo > lo {
                        return Ok(Ordering::Greater);
                    }
                }
                Err(Error::PrecisionExhausted { digits: last })
            }
        }
    }

    pub fn cmp_int(&self, k: i64, prec: &Precision) -> Result<Ordering> {
        self.cmp_rational(&BigRational::from_integer(BigInt::from(k)), prec)
    }

    /// A certified rational upper bound on the value.
    pub fn upper_bound(&self, prec: &Precision) -> Result<BigRational> {
        match self {
            RealSpec::Rational(r) => Ok(r.clone()),
            _ => {
                let enc = self.enclose_mul(1, Precision::START_DIGITS.min(prec.max_digits))?;
                Ok(BigRational::new(enc.hi, enc.den))
            }
        }
    }

    /// Nearest-below `f64`, for reporting only.
    pub fn to_f64(&self) -> f64 {
        let r = match self {
            RealSpec::Rational(r) => r.clone(),
            _ => match self.enclose_mul(1, 30) {
                Ok(enc) => BigRational::new(enc.lo, enc.den),
                Err(_) => return f64::NAN,
            },
        };
        ratio_to_f64(&r)
    }
}

pub(crate) fn ratio_to_f64(r: &BigRational) -> f64 {
    // Scale into a 64-bit window so huge numerators do not overflow.
    let shift = r.numer().bits() as i64 - r.denom().bits() as i64 - 60;
    let (n, d) = if shift > 0 {
        (r.numer().clone(), r.denom() << (shift as usize))
    } else {
        (r.numer() << ((-shift) as usize), r.denom().clone())
    };
    let q = n / d;
    let q: f64 = num_traits::ToPrimitive::to_f64(&q).unwrap_or(f64::NAN);
    q * libm::exp2(shift as f64)
}

impl fmt::Display for RealSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealSpec::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            RealSpec::Quadratic(q) => {
                if q.a.is_zero() && q.b.is_one() && q.c.is_one() {
                    return write!(f, "sqrt({})", q.d);
                }
                let sign = if q.b.is_negative() { '-' } else { '+' };
                write!(f, "({}{}{}*sqrt({}))/{}", q.a, sign, q.b.abs(), q.d, q.c)
            }
            RealSpec::Decimal(dr) => {
                if dr.is_plain() {
                    return dr.fmt_base(f);
                }
                let [a, b, c, d] = &dr.map;
                write!(f, "({a}*")?;
                dr.fmt_base(f)?;
                write!(f, "+{b})/({c}*")?;
                dr.fmt_base(f)?;
                write!(f, "+{d})")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prec() -> Precision {
        Precision::default()
    }

    #[test]
    fn quadratic_normalizes_sign_and_gcd() {
        let x = RealSpec::quadratic(2, 4, 2, -2).unwrap();
        assert_eq!(x, RealSpec::quadratic(-1, -2, 2, 1).unwrap());
        assert_eq!(
            RealSpec::quadratic(1, 2, 9, 7).unwrap(),
            RealSpec::rational(1, 1).unwrap()
        );
        assert!(QuadraticSurd::new(0.into(), 1.into(), 4.into(), 1.into()).is_err());
    }

    #[test]
    fn surd_reciprocal_is_exact() {
        // 1/sqrt(2) = sqrt(2)/2
        let x = RealSpec::sqrt(2).unwrap().recip().unwrap();
        assert_eq!(x, RealSpec::quadratic(0, 1, 2, 2).unwrap());
        // 1/golden = golden - 1
        let g = RealSpec::golden_ratio();
        assert_eq!(g.recip().unwrap(), g.add_int(&BigInt::from(-1)).unwrap());
    }

    #[test]
    fn comparisons() {
        let s2 = RealSpec::sqrt(2).unwrap();
        assert_eq!(s2.cmp_int(1, &prec()).unwrap(), Ordering::Greater);
        assert_eq!(s2.cmp_int(2, &prec()).unwrap(), Ordering::Less);
        let r = BigRational::new(141421.into(), 100000.into());
        assert_eq!(s2.cmp_rational(&r, &prec()).unwrap(), Ordering::Greater);
        let neg = RealSpec::quadratic(1, -1, 2, 1).unwrap();
        assert_eq!(neg.cmp_int(0, &prec()).unwrap(), Ordering::Less);
        assert_eq!(
            RealSpec::pi().cmp_int(3, &prec()).unwrap(),
            Ordering::Greater
        );
        let r = BigRational::new(355.into(), 113.into());
        assert_eq!(
            RealSpec::pi().cmp_rational(&r, &prec()).unwrap(),
            Ordering::Less
        );
    }

    #[test]
    fn decimal_equal_to_probe_is_uncertifiable() {
        let d = DecimalReal::new(BigInt::from(15), 1, 25).unwrap();
        let x = RealSpec::Decimal(d);
        let r = BigRational::new(3.into(), 2.into());
        assert!(matches!(
            x.cmp_rational(&r, &prec()),
            Err(Error::PrecisionExhausted { .. })
        ));
    }

    #[test]
    fn display_forms() {
        use alloc::string::ToString;
        assert_eq!(RealSpec::sqrt(2).unwrap().to_string(), "sqrt(2)");
        assert_eq!(RealSpec::golden_ratio().to_string(), "(1+1*sqrt(5))/2");
        assert_eq!(
            RealSpec::quadratic(1, -3, 7, 2).unwrap().to_string(),
            "(1-3*sqrt(7))/2"
        );
        assert_eq!(RealSpec::rational(10, 7).unwrap().to_string(), "10/7");
        assert_eq!(RealSpec::pi().to_string(), "pi");
        let d = DecimalReal::new(BigInt::from(-5), 3, 22).unwrap();
        assert_eq!(RealSpec::Decimal(d).to_string(), "-0.005~digits=22");
    }

    #[test]
    fn f64_conversion() {
        assert!((RealSpec::pi().to_f64() - core::f64::consts::PI).abs() < 1e-15);
        assert!((RealSpec::sqrt(2).unwrap().to_f64() - core::f64::consts::SQRT_2).abs() < 1e-15);
    }
}
