//! Text formats: decimal rendering of exact values and the CSV schemas.

use halton_subseq::bounds::{BoundReport, GrowthReport};
use halton_subseq::discrepancy::{AnchoredBox, Closure, DiscrepancyResult};
use halton_subseq::halton::{Coord, PointSet};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Significant digits of every float column.
pub const SIG_DIGITS: u32 = 17;

fn pow10(k: u32) -> BigInt {
    BigInt::from(10u32).pow(k)
}

fn round_half_even(r: &BigRational) -> BigInt {
    let floor = r.floor();
    let frac = r - &floor;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let f = floor.to_integer();
    match frac.cmp(&half) {
        std::cmp::Ordering::Less => f,
        std::cmp::Ordering::Greater => f + 1,
        std::cmp::Ordering::Equal if f.bit(0) => f + 1,
        std::cmp::Ordering::Equal => f,
    }
}

/// `r` rounded half-to-even to `sig` significant digits; positional for
/// exponents in `-5..sig`, scientific otherwise, trailing zeros trimmed.
pub fn fmt_sig(r: &BigRational, sig: u32) -> String {
    if r.is_zero() {
        return "0".into();
    }
    let a = r.abs();
    let mut e = a.numer().to_string().len() as i64 - a.denom().to_string().len() as i64;
    let scale = |k: i64| {
        if k >= 0 {
            BigRational::from_integer(pow10(k as u32))
        } else {
            BigRational::new(BigInt::one(), pow10((-k) as u32))
        }
    };
    while a >= scale(e + 1) {
        e += 1;
    }
    while a < scale(e) {
        e -= 1;
    }
    let mut m = round_half_even(&(&a * scale(sig as i64 - 1 - e)));
    if m == pow10(sig) {
        m = pow10(sig - 1);
        e += 1;
    }
    let digits = m.to_string();
    let sign = if r.is_negative() { "-" } else { "" };
    let trim = |int: &str, frac: &str| {
        let frac = frac.trim_end_matches('0');
        if frac.is_empty() {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac}")
        }
    };
    if (-5..sig as i64).contains(&e) {
        if e >= 0 {
            let (int, frac) = digits.split_at(e as usize + 1);
            trim(int, frac)
        } else {
            let zeros = "0".repeat((-e - 1) as usize);
            trim("0", &format!("{zeros}{digits}"))
        }
    } else {
        let (lead, rest) = digits.split_at(1);
        format!("{}e{e}", trim(lead, rest))
    }
}

/// A float through its exact binary value; `nan`/`inf` pass through.
pub fn fmt_f64(v: f64) -> String {
    match BigRational::from_float(v) {
        Some(r) => fmt_sig(&r, SIG_DIGITS),
        None if v.is_nan() => "nan".into(),
        None if v > 0.0 => "inf".into(),
        None => "-inf".into(),
    }
}

pub fn fmt_coord(c: &Coord, exact: bool) -> String {
    if exact {
        format!("{}/{}", c.numer(), c.denom())
    } else {
        let r = BigRational::new((*c.numer()).into(), (*c.denom()).into());
        fmt_sig(&r, SIG_DIGITS)
    }
}

/// `[0,w1)x[0,w2)` for open boxes, `[0,w1]x[0,w2]` for closed ones.
pub fn fmt_witness(b: &AnchoredBox) -> String {
    let close = match b.closure {
        Closure::Open => ')',
        Closure::Closed => ']',
    };
    b.upper
        .iter()
        .map(|w| format!("[0,{}/{}{close}", w.numer(), w.denom()))
        .collect::<Vec<_>>()
        .join("x")
}

fn fmt_list<T: ToString>(v: impl IntoIterator<Item = T>) -> String {
    v.into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<Vec<u8>, csv::Error> {
    w.into_inner().map_err(|e| e.into_error().into())
}

/// `n,index,x1,...,xs`.
pub fn points_csv(ps: &PointSet, exact: bool) -> Result<Vec<u8>, csv::Error> {
    let mut w = writer();
    let mut header = vec!["n".to_string(), "index".to_string()];
    header.extend((1..=ps.dim()).map(|i| format!("x{i}")));
    w.write_record(&header)?;
    let indices = ps.indices();
    for (n, p) in ps.points().iter().enumerate() {
        let mut row = vec![
            n.to_string(),
            indices.get(n).map_or(String::new(), u64::to_string),
        ];
        row.extend(p.coords.iter().map(|c| fmt_coord(c, exact)));
        w.write_record(&row)?;
    }
    finish(w)
}

/// `N,s,value_num,value_den,value_float,witness`.
pub fn discrepancy_csv(rows: &[(usize, DiscrepancyResult)]) -> Result<Vec<u8>, csv::Error> {
    let mut w = writer();
    w.write_record(["N", "s", "value_num", "value_den", "value_float", "witness"])?;
    for (s, d) in rows {
        w.write_record([
            d.n.to_string(),
            s.to_string(),
            d.value.numer().to_string(),
            d.value.denom().to_string(),
            fmt_sig(&d.value, SIG_DIGITS),
            fmt_witness(&d.witness),
        ])?;
    }
    finish(w)
}

/// `N,alpha,bases,j_tuple,lhs_num,lhs_den,rhs_num,rhs_den,satisfied`.
///
/// The summed bound lists its level range as `<=(f_1,...,f_s)`.
pub fn bounds_csv(rows: &[(String, BoundReport)]) -> Result<Vec<u8>, csv::Error> {
    let mut w = writer();
    w.write_record([
        "N",
        "alpha",
        "bases",
        "j_tuple",
        "lhs_num",
        "lhs_den",
        "rhs_num",
        "rhs_den",
        "satisfied",
    ])?;
    for (j, r) in rows {
        let (ln, ld) = r.lhs.as_ref().map_or((String::new(), String::new()), |l| {
            (l.numer().to_string(), l.denom().to_string())
        });
        w.write_record([
            r.n.to_string(),
            r.alpha.to_string(),
            fmt_list(r.bases.iter()),
            j.clone(),
            ln,
            ld,
            r.rhs.numer().to_string(),
            r.rhs.denom().to_string(),
            r.satisfied.map_or(String::new(), |s| s.to_string()),
        ])?;
    }
    finish(w)
}

pub fn tuple_label(j: &[u32]) -> String {
    format!("({})", fmt_list(j))
}

/// `N,NDstar_float,log_N,ratio_s_plus_1,fitted_slope_running` then
/// `fitted_slope=<value>`; `exact` adds `NDstar_num,NDstar_den`.
pub fn growth_csv(g: &GrowthReport, exact: bool) -> Result<Vec<u8>, csv::Error> {
    let mut w = writer();
    let mut header = vec![
        "N",
        "NDstar_float",
        "log_N",
        "ratio_s_plus_1",
        "fitted_slope_running",
    ];
    if exact {
        header.extend(["NDstar_num", "NDstar_den"]);
    }
    w.write_record(&header)?;
    for s in &g.samples {
        let mut row = vec![
            s.n.to_string(),
            fmt_sig(&s.nd_star, SIG_DIGITS),
            fmt_f64(s.log_n),
            fmt_f64(s.ratio),
            s.running_slope.map_or(String::new(), fmt_f64),
        ];
        if exact {
            row.extend([s.nd_star.numer().to_string(), s.nd_star.denom().to_string()]);
        }
        w.write_record(&row)?;
    }
    let mut out = finish(w)?;
    out.extend_from_slice(format!("fitted_slope={}\n", fmt_f64(g.slope)).as_bytes());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn significant_digits() {
        assert_eq!(fmt_sig(&r(1, 3), 17), "0.33333333333333333");
        assert_eq!(fmt_sig(&r(2, 3), 17), "0.66666666666666667");
        assert_eq!(fmt_sig(&r(1, 2), 17), "0.5");
        assert_eq!(fmt_sig(&r(0, 1), 17), "0");
        assert_eq!(fmt_sig(&r(-7, 4), 17), "-1.75");
        assert_eq!(fmt_sig(&r(123, 1), 17), "123");
        assert_eq!(fmt_sig(&r(1, 1_000_000), 17), "1e-6");
        assert_eq!(fmt_sig(&r(1, 100_000), 17), "0.00001");
        assert_eq!(fmt_sig(&r(10i64.pow(18), 1), 17), "1e18");
        // ties go to even
        assert_eq!(fmt_sig(&r(125, 100), 2), "1.2");
        assert_eq!(fmt_sig(&r(135, 100), 2), "1.4");
        assert_eq!(fmt_sig(&r(999, 1), 2), "1e3");
    }

    #[test]
    fn floats() {
        assert_eq!(fmt_f64(0.1), "0.10000000000000001");
        assert_eq!(fmt_f64(2.0f64.ln()), "0.69314718055994529");
        assert_eq!(fmt_f64(f64::NAN), "nan");
    }

    #[test]
    fn witness_text() {
        let b = AnchoredBox {
            upper: vec![Coord::new(1, 2), Coord::new(2, 3)],
            closure: Closure::Closed,
        };
        assert_eq!(fmt_witness(&b), "[0,1/2]x[0,2/3]");
    }
}
