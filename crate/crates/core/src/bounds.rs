//! Upper bounds on subsequence discrepancy and their ingredients.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::discrepancy::{local_delta, star_discrepancy_exact};
use crate::halton::{subsequence_points, BaseTuple, Coord};
use crate::real::{Precision, RealSpec};
use crate::{Error, Result, Settings};

/// Least `f` with `b^f >= n`, per base.
pub fn f_exponents(n: u64, bases: &BaseTuple) -> Vec<u32> {
    bases
        .iter()
        .map(|b| {
            let mut f = 0;
            let mut p = 1u128;
            while p < n as u128 {
                p *= b as u128;
                f += 1;
            }
            f
        })
        .collect()
}

/// Residue `a` modulo `b^j` of the indices whose radical inverse lies in
/// [`elementary_interval`]`(j, k, u, b)`.
///
/// `k` ranges over `1..=b` and `u` holds the `j - 1` leading digits; level 0
/// admits only `k = 1` with no digits.
pub fn elementary_residue(j: u32, k: u64, u: &[u64], b: u64) -> Result<u64> {
    check_cell(j, k, u, b)?;
    if j == 0 {
        return Ok(0);
    }
    let top = (k - 1) * b.pow(j - 1);
    let low = u.iter().rev().fold(0u64, |acc, &d| acc * b + d);
    Ok(top + low)
}

/// `[sum_l u_l b^-l + (k-1) b^-j, sum_l u_l b^-l + k b^-j)`.
pub fn elementary_interval(j: u32, k: u64, u: &[u64], b: u64) -> Result<(Coord, Coord)> {
    check_cell(j, k, u, b)?;
    let den = b.pow(j);
    let base = u.iter().fold(0u64, |acc, &d| acc * b + d) * b;
    Ok((Coord::new(base + k - 1, den), Coord::new(base + k, den)))
}

fn check_cell(j: u32, k: u64, u: &[u64], b: u64) -> Result<()> {
    if b < 2 {
        return Err(Error::InvalidBase(b));
    }
    if b.checked_pow(j).is_none() {
        return Err(Error::IndexOverflow);
    }
    let levels = j.saturating_sub(1) as usize;
    if u.len() != levels {
        return Err(Error::InvalidArgument("digit count must be j - 1".into()));
    }
    if u.iter().any(|&d| d >= b) {
        return Err(Error::InvalidArgument("digit out of range".into()));
    }
    let k_max = if j == 0 { 1 } else { b };
    if !(1..=k_max).contains(&k) {
        return Err(Error::InvalidArgument("cell index out of range".into()));
    }
    Ok(())
}

fn inverse_mod(a: u128, m: u128) -> Option<u128> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0 == 1).then(|| t0.rem_euclid(m as i128) as u128)
}

/// The unique `R` in `[0, prod m_i)` with `R = a_i (mod m_i)`.
pub fn crt_combine(residues: &[u64], moduli: &[u64]) -> Result<u64> {
    if residues.len() != moduli.len() {
        return Err(Error::DimensionMismatch {
            expected: moduli.len(),
            found: residues.len(),
        });
    }
    let (mut r, mut m) = (0u128, 1u128);
    for (&a, &mi) in residues.iter().zip(moduli) {
        if mi == 0 {
            return Err(Error::InvalidArgument("zero modulus".into()));
        }
        let mi = mi as u128;
        let inv = inverse_mod(m % mi, mi).ok_or_else(|| {
            let g = num_integer::gcd(m, mi);
            Error::NotCoprime(m as u64, g as u64)
        })?;
        let a = a as u128 % mi;
        let step = (a + mi - r % mi) % mi * inv % mi;
        r += m * step;
        m = m
            .checked_mul(mi)
            .filter(|&v| v <= u64::MAX as u128)
            .ok_or(Error::IndexOverflow)?;
    }
    Ok(r as u64)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TermKey {
    /// `N * Delta` for a level tuple.
    LocalDelta(Vec<u32>),
    /// `a_k` of the scaled parameter, already doubled.
    PartialQuotient(usize),
    /// Rational upper bracket of alpha.
    AlphaUpper,
    Constant,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundTerm {
    pub key: TermKey,
    pub value: BigRational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub n: u64,
    pub alpha: RealSpec,
    pub bases: BaseTuple,
    pub j: Option<Vec<u32>>,
    pub lhs: Option<BigRational>,
    pub rhs: BigRational,
    /// `lhs <= rhs`, when the left side was evaluated.
    pub satisfied: Option<bool>,
    pub components: Vec<BoundTerm>,
}

impl BoundReport {
    fn new(
        n: u64,
        alpha: &RealSpec,
        bases: &BaseTuple,
        j: Option<Vec<u32>>,
        lhs: Option<BigRational>,
        components: Vec<BoundTerm>,
    ) -> Self {
        let rhs = components
            .iter()
            .fold(BigRational::zero(), |acc, t| acc + &t.value);
        let satisfied = lhs.as_ref().map(|l| *l <= rhs);
        Self {
            n,
            alpha: alpha.clone(),
            bases: bases.clone(),
            j,
            lhs,
            rhs,
            satisfied,
            components,
        }
    }
}

fn require_alpha_above_one(alpha: &RealSpec, prec: &Precision) -> Result<()> {
    if alpha.cmp_int(1, prec)? != Ordering::Greater {
        return Err(Error::InvalidArgument("alpha must exceed 1".into()));
    }
    Ok(())
}

/// Level tuples `0 <= j_i <= f_i` in lexicographic order.
pub fn prop1_tuples(n: u64, bases: &BaseTuple) -> Vec<Vec<u32>> {
    let f = f_exponents(n, bases);
    let mut out = vec![Vec::new()];
    for &fi in &f {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..=fi).map(move |j| {
                    let mut t = t.clone();
                    t.push(j);
                    t
                })
            })
            .collect();
    }
    out
}

/// `N * D_N^*` of the first `n` subsequence points for `beta = 1 / alpha`,
/// or `None` above dimension 3.
pub fn prop1_lhs(
    n: u64,
    alpha: &RealSpec,
    bases: &BaseTuple,
    settings: &Settings,
) -> Result<Option<BigRational>> {
    if bases.dim() > 3 {
        return Ok(None);
    }
    let beta = alpha.recip()?;
    let count = usize::try_from(n).map_err(|_| Error::IndexOverflow)?;
    let ps = subsequence_points(&beta, bases, count, &settings.precision)?;
    Ok(Some(
        star_discrepancy_exact(&ps, settings.work_budget)?.scaled(),
    ))
}

/// Builds the report from per-tuple `N * Delta` values (in any order).
pub fn prop1_assemble(
    n: u64,
    alpha: &RealSpec,
    bases: &BaseTuple,
    mut deltas: Vec<(Vec<u32>, BigRational)>,
    lhs: Option<BigRational>,
) -> BoundReport {
    deltas.sort_by(|a, b| a.0.cmp(&b.0));
    let prod: u64 = bases.iter().product();
    let mut components: Vec<BoundTerm> = deltas
        .into_iter()
        .map(|(j, d)| BoundTerm {
            key: TermKey::LocalDelta(j),
            value: d * BigInt::from(prod),
        })
        .collect();
    components.push(BoundTerm {
        key: TermKey::Constant,
        value: BigRational::from_integer(bases.dim().into()),
    });
    BoundReport::new(n, alpha, bases, None, lhs, components)
}

fn check_tuple_budget(n: u64, tuples: usize, budget: u128) -> Result<()> {
    let required = (tuples as u128).saturating_mul(n as u128);
    if required > budget {
        return Err(Error::WorkBudgetExceeded { required, budget });
    }
    Ok(())
}

/// `N D_N^* <= b_1...b_s * sum_{0 <= j_i <= f_i} N Delta^{(j)} + s` for the
/// subsequence with `beta = 1 / alpha`.
pub fn prop1_rhs(
    n: u64,
    alpha: &RealSpec,
    bases: &BaseTuple,
    settings: &Settings,
) -> Result<BoundReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be positive".into()));
    }
    require_alpha_above_one(alpha, &settings.precision)?;
    let tuples = prop1_tuples(n, bases);
    check_tuple_budget(n, tuples.len(), settings.work_budget)?;
    let deltas = tuples
        .into_iter()
        .map(|j| {
            let d = local_delta(n, alpha, &j, bases, &settings.precision)?;
            Ok((j, d))
        })
        .collect::<Result<Vec<_>>>()?;
    let lhs = prop1_lhs(n, alpha, bases, settings)?;
    Ok(prop1_assemble(n, alpha, bases, deltas, lhs))
}

/// Least `K` with `(3/2)^K >= n`.
pub fn log_three_halves_ceil(n: u64) -> usize {
    let (mut three, mut two) = (BigInt::one(), BigInt::from(n));
    let mut k = 0;
    while three < two {
        three *= 3u32;
        two *= 2u32;
        k += 1;
    }
    k
}

/// `N Delta^{(j)} <= alpha + 1 + 2 sum_{k=1}^{K} a_k(alpha b_1^{j_1}...b_s^{j_s})`
/// with `K = ceil(log_{3/2} N)` and alpha replaced by a rational upper bound.
///
/// A rational `alpha * B` whose expansion ends before `K` contributes only
/// its existing terms.
pub fn lemma1_rhs(
    n: u64,
    alpha: &RealSpec,
    j: &[u32],
    bases: &BaseTuple,
    prec: &Precision,
) -> Result<BoundReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be positive".into()));
    }
    require_alpha_above_one(alpha, prec)?;
    let lhs = local_delta(n, alpha, j, bases, prec)?;
    let scale = scale_factor(j, bases)?;
    let k = log_three_halves_ceil(n);
    let cf = alpha.mul_int(&scale)?.continued_fraction(k, prec)?;
    if cf.depth() < k && !alpha.is_rational() {
        return Err(Error::InsufficientConvergents {
            target: k as u64,
            depth: cf.depth(),
        });
    }
    let mut components = vec![
        BoundTerm {
            key: TermKey::AlphaUpper,
            value: alpha.upper_bound(prec)?,
        },
        BoundTerm {
            key: TermKey::Constant,
            value: BigRational::one(),
        },
    ];
    components.extend(
        cf.partial_quotients
            .iter()
            .enumerate()
            .map(|(i, a)| BoundTerm {
                key: TermKey::PartialQuotient(i + 1),
                value: BigRational::from_integer(a * 2u32),
            }),
    );
    Ok(BoundReport::new(
        n,
        alpha,
        bases,
        Some(j.to_vec()),
        Some(lhs),
        components,
    ))
}

fn scale_factor(j: &[u32], bases: &BaseTuple) -> Result<BigInt> {
    if j.len() != bases.dim() {
        return Err(Error::DimensionMismatch {
            expected: bases.dim(),
            found: j.len(),
        });
    }
    Ok(bases
        .iter()
        .zip(j)
        .map(|(b, &e)| BigInt::from(b).pow(e))
        .product())
}

/// `S_L(alpha) = sum_{0 <= j_i <= L} sum_{k=1}^{L} a_k(alpha b_1^{j_1}...b_s^{j_s})`.
pub fn s_l_sum(alpha: &RealSpec, bases: &BaseTuple, l: u32, prec: &Precision) -> Result<BigInt> {
    let dim = bases.dim();
    let mut j = vec![0u32; dim];
    let mut total = BigInt::zero();
    loop {
        let x = alpha.mul_int(&scale_factor(&j, bases)?)?;
        let cf = x.continued_fraction(l as usize, prec)?;
        total += cf.partial_quotients.iter().sum::<BigInt>();
        // odometer over {0..=L}^s
        let mut axis = 0;
        loop {
            if axis == dim {
                return Ok(total);
            }
            if j[axis] < l {
                j[axis] += 1;
                break;
            }
            j[axis] = 0;
            axis += 1;
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthSample {
    pub n: u64,
    /// `N * D_N^*`.
    pub nd_star: BigRational,
    pub log_n: f64,
    /// `N D_N^* / (log N)^{s+1}`.
    pub ratio: f64,
    /// Least-squares slope over samples so far, from the second sample on.
    pub running_slope: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthReport {
    pub samples: Vec<GrowthSample>,
    /// Least-squares slope of `log(N D_N^*)` against `log log N`.
    pub slope: f64,
}

fn ols_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    (xs.len() >= 2 && sxx > 0.0).then(|| sxy / sxx)
}

fn check_sweep_list(ns: &[u64]) -> Result<()> {
    if ns.is_empty() {
        return Err(Error::InvalidArgument("empty N list".into()));
    }
    if ns[0] < 2 || ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "N list must be strictly increasing from at least 2".into(),
        ));
    }
    Ok(())
}

/// Fits growth statistics to `(N, N D_N^*)` pairs in increasing `N`.
pub fn fit_growth(dim: usize, values: Vec<(u64, BigRational)>) -> Result<GrowthReport> {
    check_sweep_list(&values.iter().map(|v| v.0).collect::<Vec<_>>())?;
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    let mut samples = Vec::with_capacity(values.len());
    for (n, nd) in values {
        let log_n = libm::log(n as f64);
        let v = nd.to_f64().unwrap_or(f64::INFINITY);
        xs.push(libm::log(log_n));
        ys.push(libm::log(v));
        samples.push(GrowthSample {
            n,
            nd_star: nd,
            log_n,
            ratio: v / libm::pow(log_n, (dim + 1) as f64),
            running_slope: ols_slope(&xs, &ys),
        });
    }
    let slope = ols_slope(&xs, &ys).unwrap_or(f64::NAN);
    Ok(GrowthReport { samples, slope })
}

/// `N D_N^*` of the subsequence prefixes of length `N` for each listed `N`.
pub fn growth_sweep(
    beta: &RealSpec,
    bases: &BaseTuple,
    ns: &[u64],
    settings: &Settings,
) -> Result<GrowthReport> {
    check_sweep_list(ns)?;
    let max = usize::try_from(*ns.last().expect("nonempty")).map_err(|_| Error::IndexOverflow)?;
    let ps = subsequence_points(beta, bases, max, &settings.precision)?;
    let values = ns
        .iter()
        .map(|&n| {
            let d = star_discrepancy_exact(&ps.prefix(n as usize), settings.work_budget)?;
            Ok((n, d.scaled()))
        })
        .collect::<Result<Vec<_>>>()?;
    fit_growth(bases.dim(), values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::halton::radical_inverse;

    fn bt(b: &[u64]) -> BaseTuple {
        BaseTuple::new(b.to_vec()).unwrap()
    }

    #[test]
    fn f_examples() {
        assert_eq!(f_exponents(8, &bt(&[2])), [3]);
        assert_eq!(f_exponents(9, &bt(&[2])), [4]);
        assert_eq!(f_exponents(100, &bt(&[2, 3])), [7, 5]);
        assert_eq!(f_exponents(1, &bt(&[5])), [0]);
    }

    #[test]
    fn residue_examples() {
        assert_eq!(elementary_residue(1, 1, &[], 2).unwrap(), 0);
        assert_eq!(elementary_residue(2, 2, &[1], 2).unwrap(), 3);
        assert_eq!(elementary_residue(3, 1, &[0, 1], 3).unwrap(), 3);
        assert_eq!(elementary_residue(0, 1, &[], 3).unwrap(), 0);
        assert!(elementary_residue(2, 3, &[0], 2).is_err());
        assert!(elementary_residue(2, 1, &[2], 2).is_err());
        assert!(elementary_residue(2, 1, &[], 2).is_err());
    }

    #[test]
    fn residue_matches_interval() {
        for b in [2u64, 3, 5] {
            for (k, u) in [(1, vec![0]), (2, vec![1]), (b, vec![b - 1])] {
                let a = elementary_residue(2, k, &u, b).unwrap();
                let (lo, hi) = elementary_interval(2, k, &u, b).unwrap();
                for n in 0..b.pow(3) {
                    let x = radical_inverse(n, b);
                    assert_eq!(lo <= x && x < hi, n % (b * b) == a, "b={b} k={k} n={n}");
                }
            }
        }
    }

    #[test]
    fn crt_examples() {
        assert_eq!(crt_combine(&[0, 0], &[4, 9]).unwrap(), 0);
        assert_eq!(crt_combine(&[1, 2], &[2, 3]).unwrap(), 5);
        assert_eq!(crt_combine(&[3, 1], &[4, 3]).unwrap(), 7);
        assert_eq!(crt_combine(&[], &[]).unwrap(), 0);
        assert!(matches!(
            crt_combine(&[1, 1], &[4, 6]),
            Err(Error::NotCoprime(..))
        ));
    }

    #[test]
    fn three_halves_exponent() {
        assert_eq!(log_three_halves_ceil(1), 0);
        assert_eq!(log_three_halves_ceil(2), 2);
        assert_eq!(log_three_halves_ceil(100), 12);
        assert_eq!(log_three_halves_ceil(10_000), 23);
    }

    #[test]
    fn partial_quotient_bound_single_point() {
        let r = lemma1_rhs(
            1,
            &RealSpec::integer(2),
            &[1],
            &bt(&[2]),
            &Precision::default(),
        )
        .unwrap();
        assert_eq!(r.rhs, BigRational::from_integer(3.into()));
        assert_eq!(r.satisfied, Some(true));
    }

    #[test]
    fn partial_quotient_bound_sqrt2() {
        let a = RealSpec::sqrt(2).unwrap();
        let r = lemma1_rhs(100, &a, &[1], &bt(&[2]), &Precision::default()).unwrap();
        // 2 sqrt(2) = [2; 1, 4, 1, 4, ...]: twelve terms sum to 30
        let pq: Vec<_> = r
            .components
            .iter()
            .filter(|t| matches!(t.key, TermKey::PartialQuotient(_)))
            .collect();
        assert_eq!(pq.len(), 12);
        assert_eq!(
            pq.iter().fold(BigRational::zero(), |a, t| a + &t.value),
            BigRational::from_integer(60.into())
        );
        assert_eq!(r.satisfied, Some(true));
    }

    #[test]
    fn summed_bound_small() {
        let s = Settings::default();
        let r = prop1_rhs(16, &RealSpec::integer(2), &bt(&[3]), &s).unwrap();
        assert_eq!(r.satisfied, Some(true));
        assert_eq!(r.components.len(), 5);
        let r = prop1_rhs(100, &RealSpec::sqrt(2).unwrap(), &bt(&[2]), &s).unwrap();
        assert_eq!(r.satisfied, Some(true));
        assert!(prop1_rhs(10, &RealSpec::rational(1, 2).unwrap(), &bt(&[2]), &s).is_err());
    }

    #[test]
    fn s_l_golden() {
        // a_1(phi) = 1, a_1(2 phi) = floor(1 / 0.236...) = 4
        let p = Precision::default();
        assert_eq!(
            s_l_sum(&RealSpec::golden_ratio(), &bt(&[2]), 1, &p).unwrap(),
            BigInt::from(5)
        );
    }

    #[test]
    fn growth_errors_and_fit() {
        let s = Settings::default();
        assert!(growth_sweep(&RealSpec::integer(1), &bt(&[2]), &[], &s).is_err());
        assert!(growth_sweep(&RealSpec::integer(1), &bt(&[2]), &[8, 4], &s).is_err());
        let g = growth_sweep(&RealSpec::integer(1), &bt(&[2]), &[16, 32, 64], &s).unwrap();
        assert_eq!(g.samples.len(), 3);
        assert!(g.samples[0].running_slope.is_none());
        assert!(g.slope.is_finite());
    }
}
