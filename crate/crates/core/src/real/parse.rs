//! Text syntax for [`RealSpec`]:
//!
//! * `p`, `p/q`, `1.25` (exact rationals)
//! * `sqrt(d)`, `k*sqrt(d)`, `(a+b*sqrt(d))/c`, `(a-sqrt(d))` and similar
//! * `pi`, `e`
//! * `3.14159...~digits=D` (decimal accurate to `10^-D`, `D >= 20`)

use alloc::format;
use alloc::string::ToString;
use core::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;

use super::value::{pow10, DecimalReal, RealSpec};
use crate::{Error, Result};

/// Smallest accepted `~digits=` value.
pub const MIN_DECIMAL_DIGITS: u32 = 20;

struct Cursor<'a> {
    s: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn rest(&self) -> &'a str {
        &self.s[self.pos..]
    }

    fn eat(&mut self, tok: &str) -> bool {
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{tok}`")))
        }
    }

    fn error(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at offset {} in `{}`", self.pos, self.s))
    }

    fn digits(&mut self) -> Option<&'a str> {
        let len = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if len == 0 {
            return None;
        }
        let d = &self.rest()[..len];
        self.pos += len;
        Some(d)
    }

    fn uint(&mut self) -> Result<BigInt> {
        self.digits()
            .map(|d| d.parse().expect("ascii digits"))
            .ok_or_else(|| self.error("expected digits"))
    }

    fn int(&mut self) -> Result<BigInt> {
        let neg = self.eat("-");
        if !neg {
            self.eat("+");
        }
        let v = self.uint()?;
        Ok(if neg { -v } else { v })
    }

    fn done(&self) -> Result<()> {
        if self.rest().is_empty() {
            Ok(())
        } else {
            Err(self.error("unexpected trailing input"))
        }
    }

    /// `sqrt(d)` with the `sqrt(` already known to follow.
    fn sqrt_arg(&mut self) -> Result<BigInt> {
        self.expect("sqrt(")?;
        let d = self.uint()?;
        self.expect(")")?;
        Ok(d)
    }

    fn optional_den(&mut self) -> Result<BigInt> {
        if self.eat("/") {
            self.int()
        } else {
            Ok(BigInt::one())
        }
    }
}

fn parse_decimal(s: &str) -> Result<(BigInt, u32)> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    let ok = |p: &str| p.bytes().all(|b| b.is_ascii_digit());
    if int.is_empty() || !ok(int) || !ok(frac) || (body.contains('.') && frac.is_empty()) {
        return Err(Error::Parse(format!("malformed decimal `{s}`")));
    }
    let mut digits = int.to_string();
    digits.push_str(frac);
    let m: BigInt = digits.parse().expect("ascii digits");
    Ok((if neg { -m } else { m }, frac.len() as u32))
}

impl FromStr for RealSpec {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        let s: alloc::string::String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty real".into()));
        }
        match s.as_str() {
            "pi" => return Ok(RealSpec::pi()),
            "e" => return Ok(RealSpec::e()),
            _ => {}
        }
        if let Some((lit, acc)) = s.split_once('~') {
            let acc = acc
                .strip_prefix("digits=")
                .and_then(|d| d.parse::<u32>().ok())
                .ok_or_else(|| Error::Parse(format!("malformed accuracy suffix in `{s}`")))?;
            if acc < MIN_DECIMAL_DIGITS {
                return Err(Error::Parse(format!(
                    "decimal accuracy {acc} is below the minimum of {MIN_DECIMAL_DIGITS} digits"
                )));
            }
            let (m, scale) = parse_decimal(lit)?;
            return DecimalReal::new(m, scale, acc).map(RealSpec::Decimal);
        }
        let mut c = Cursor { s: &s, pos: 0 };
        if c.eat("(") {
            // (a +/- b*sqrt(d)) / c, any of a and b optional
            let a = if c.rest().starts_with("sqrt(")
                || c.rest().starts_with("-sqrt(")
                || c.rest().starts_with("+sqrt(")
            {
                BigInt::from(0)
            } else {
                let save = c.pos;
                let v = c.int()?;
                if c.eat("*") {
                    // no constant term: `(b*sqrt(d))`
                    c.pos = save;
                    BigInt::from(0)
                } else {
                    v
                }
            };
            let neg = if c.eat("-") {
                true
            } else {
                c.eat("+");
                false
            };
            let b = if c.rest().starts_with("sqrt(") {
                BigInt::one()
            } else {
                let b = c.uint()?;
                c.expect("*")?;
                b
            };
            let d = c.sqrt_arg()?;
            c.expect(")")?;
            let den = c.optional_den()?;
            c.done()?;
            return RealSpec::quadratic(a, if neg { -b } else { b }, d, den);
        }
        if c.rest().starts_with("sqrt(") || c.rest().contains("*sqrt(") {
            let k = if c.rest().starts_with("sqrt(") {
                BigInt::one()
            } else {
                let k = c.int()?;
                c.expect("*")?;
                k
            };
            let d = c.sqrt_arg()?;
            let den = c.optional_den()?;
            c.done()?;
            return RealSpec::quadratic(0, k, d, den);
        }
        if let Some((num, den)) = s.split_once('/') {
            let mut c = Cursor { s: num, pos: 0 };
            let n = c.int()?;
            c.done()?;
            let mut c = Cursor { s: den, pos: 0 };
            let d = c.int()?;
            c.done()?;
            return RealSpec::rational(n, d);
        }
        let (m, scale) = parse_decimal(&s)?;
        RealSpec::rational(m, pow10(scale))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn p(s: &str) -> RealSpec {
        s.parse().unwrap()
    }

    #[test]
    fn accepted_forms() {
        assert_eq!(p("3/2"), RealSpec::rational(3, 2).unwrap());
        assert_eq!(p("-6/4"), RealSpec::rational(-3, 2).unwrap());
        assert_eq!(p("5"), RealSpec::integer(5));
        assert_eq!(p("1.25"), RealSpec::rational(5, 4).unwrap());
        assert_eq!(p("sqrt(2)"), RealSpec::sqrt(2).unwrap());
        assert_eq!(p("2*sqrt(2)"), RealSpec::quadratic(0, 2, 2, 1).unwrap());
        assert_eq!(p("sqrt(2)/2"), RealSpec::quadratic(0, 1, 2, 2).unwrap());
        assert_eq!(
            p("(0+1*sqrt(2))/2"),
            RealSpec::quadratic(0, 1, 2, 2).unwrap()
        );
        assert_eq!(p("(1+sqrt(5))/2"), RealSpec::golden_ratio());
        assert_eq!(
            p("( 1 - 3*sqrt(7) ) / 2"),
            RealSpec::quadratic(1, -3, 7, 2).unwrap()
        );
        assert_eq!(p("(-sqrt(3))"), RealSpec::quadratic(0, -1, 3, 1).unwrap());
        assert_eq!(p("(2*sqrt(3))/5"), RealSpec::quadratic(0, 2, 3, 5).unwrap());
        assert_eq!(p("sqrt(9)"), RealSpec::integer(3));
        assert_eq!(p("pi"), RealSpec::pi());
        assert_eq!(p("e"), RealSpec::e());
        let d = p("1.4142135623730950488016887~digits=24");
        assert!(matches!(d, RealSpec::Decimal(_)));
    }

    #[test]
    fn rejected_forms() {
        for bad in [
            "",
            "abc",
            "1/0",
            "sqrt(-2)",
            "(1+sqrt(2)",
            "1.2.3",
            "3.~digits=30",
            "1.5~digits=5",
            "1.5~prec=30",
            "sqrt(2)x",
            "(1+2*sqrt(2))/0",
            "--1",
        ] {
            assert!(bad.parse::<RealSpec>().is_err(), "accepted `{bad}`");
        }
    }

    #[test]
    fn display_round_trips() {
        for s in [
            "3/2",
            "-7",
            "sqrt(2)",
            "(1+1*sqrt(5))/2",
            "(1-3*sqrt(7))/2",
            "pi",
            "e",
            "2.71828182845904523536028747~digits=26",
            "(0+2*sqrt(3))/5",
        ] {
            let x = p(s);
            assert_eq!(p(&x.to_string()), x, "{s}");
        }
    }
}
