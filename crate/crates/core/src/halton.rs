//! Radical inverses, Halton points and the `floor(n * beta)`-indexed
//! subsequence.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};

use crate::real::{Precision, RealSpec};
use crate::{Error, Result};

/// An exact coordinate in `[0, 1)`.
pub type Coord = Ratio<u64>;

/// Pairwise coprime bases `b_1, ..., b_s`, each at least 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BaseTuple(Vec<u64>);

impl BaseTuple {
    pub fn new(bases: Vec<u64>) -> Result<Self> {
        if bases.is_empty() {
            return Err(Error::InvalidArgument(
                "at least one base is required".into(),
            ));
        }
        if let Some(&b) = bases.iter().find(|&&b| b < 2) {
            return Err(Error::InvalidBase(b));
        }
        for (i, &a) in bases.iter().enumerate() {
            for &b in &bases[i + 1..] {
                if a.gcd(&b) != 1 {
                    return Err(Error::NotCoprime(a, b));
                }
            }
        }
        Ok(Self(bases))
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().copied()
    }
}

/// Base-`b` digits of `n`, least significant first; empty for `n = 0`.
pub fn digits(mut n: u64, b: u64) -> Vec<u64> {
    assert!(b >= 2, "base must be at least 2");
    let mut out = Vec::new();
    while n > 0 {
        out.push(n % b);
        n /= b;
    }
    out
}

/// Digit-reversed numerator and the denominator `b^len`; `None` if the
/// denominator overflows.
pub(crate) fn radical_inverse_parts(mut n: u64, b: u64) -> Option<(u64, u64)> {
    let (mut num, mut den) = (0u64, 1u64);
    while n > 0 {
        num = num * b + n % b;
        den = den.checked_mul(b)?;
        n /= b;
    }
    Some((num, den))
}

/// `phi_b(n)`: the digits of `n` mirrored across the radix point.
///
/// # Panics
/// If `b < 2` or `b^len(n)` overflows `u64`.
pub fn radical_inverse(n: u64, b: u64) -> Coord {
    assert!(b >= 2, "base must be at least 2");
    let (num, den) =
        radical_inverse_parts(n, b).expect("radical inverse denominator overflows u64");
    Ratio::new(num, den)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Point {
    pub coords: Vec<Coord>,
}

impl Point {
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    fn halton(index: u64, bases: &BaseTuple) -> Option<Self> {
        let coords = bases
            .iter()
            .map(|b| radical_inverse_parts(index, b).map(|(n, d)| Ratio::new(n, d)))
            .collect::<Option<Vec<_>>>()?;
        Some(Self { coords })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Halton { start: u64 },
    Subsequence { beta: RealSpec },
    External,
}

/// An ordered, fixed-dimension list of points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    dim: usize,
    points: Vec<Point>,
    /// Halton index of each point; empty for external sets.
    indices: Vec<u64>,
    bases: Option<BaseTuple>,
    provenance: Provenance,
}

impl PointSet {
    /// An external point set; all points must share dimension `dim` and lie
    /// in `[0, 1)`.
    pub fn from_points(dim: usize, points: Vec<Point>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        for p in &points {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.dim(),
                });
            }
            if p.coords.iter().any(|c| *c >= Coord::one()) {
                return Err(Error::InvalidArgument(
                    "coordinates must lie in [0, 1)".into(),
                ));
            }
        }
        Ok(Self {
            dim,
            points,
            indices: Vec::new(),
            bases: None,
            provenance: Provenance::External,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn indices(&self) -> &[u64] {
        &self.indices
    }

    pub fn bases(&self) -> Option<&BaseTuple> {
        self.bases.as_ref()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// The first `n` points, keeping provenance.
    pub fn prefix(&self, n: usize) -> Self {
        let n = n.min(self.len());
        Self {
            dim: self.dim,
            points: self.points[..n].to_vec(),
            indices: self.indices[..n.min(self.indices.len())].to_vec(),
            bases: self.bases.clone(),
            provenance: self.provenance.clone(),
        }
    }
}

/// Halton points `y_start, ..., y_{start+n-1}`.
pub fn halton_points(bases: &BaseTuple, n: usize, start: u64) -> PointSet {
    let indices: Vec<u64> = (0..n as u64).map(|i| start + i).collect();
    let points = indices
        .iter()
        .map(|&i| Point::halton(i, bases).expect("Halton index overflows u64"))
        .collect();
    PointSet {
        dim: bases.dim(),
        points,
        indices,
        bases: Some(bases.clone()),
        provenance: Provenance::Halton { start },
    }
}

/// Streams `(n, floor(n * beta), x_n)` for `n = 0, 1, 2, ...`.
#[derive(Clone, Debug)]
pub struct Subsequence {
    beta: RealSpec,
    bases: BaseTuple,
    prec: Precision,
    next: u64,
}

impl Subsequence {
    pub fn new(beta: RealSpec, bases: BaseTuple, prec: Precision) -> Result<Self> {
        match beta.cmp_int(0, &prec)? {
            Ordering::Equal => return Err(Error::ZeroBeta),
            Ordering::Less => return Err(Error::NegativeBeta),
            Ordering::Greater => {}
        }
        Ok(Self {
            beta,
            bases,
            prec,
            next: 0,
        })
    }

    /// Skips to index `n`.
    pub fn starting_at(mut self, n: u64) -> Self {
        self.next = n;
        self
    }

    fn point(&self, n: u64) -> Result<(u64, Point)> {
        let index = self
            .beta
            .floor_mul(n, &self.prec)?
            .to_u64()
            .ok_or(Error::IndexOverflow)?;
        let p = Point::halton(index, &self.bases).ok_or(Error::IndexOverflow)?;
        Ok((index, p))
    }
}

impl Iterator for Subsequence {
    type Item = Result<(u64, u64, Point)>;

    fn next(&mut self) -> Option<Self::Item> {
        let n = self.next;
        self.next = n.checked_add(1)?;
        Some(self.point(n).map(|(i, p)| (n, i, p)))
    }
}

/// `x_n = (phi_{b_1}(floor(n beta)), ..., phi_{b_s}(floor(n beta)))` for
/// `n = 0..count`.
pub fn subsequence_points(
    beta: &RealSpec,
    bases: &BaseTuple,
    count: usize,
    prec: &Precision,
) -> Result<PointSet> {
    let mut indices = Vec::with_capacity(count);
    let mut points = Vec::with_capacity(count);
    for item in Subsequence::new(beta.clone(), bases.clone(), *prec)?.take(count) {
        let (_, i, p) = item?;
        indices.push(i);
        points.push(p);
    }
    Ok(PointSet {
        dim: bases.dim(),
        points,
        indices,
        bases: Some(bases.clone()),
        provenance: Provenance::Subsequence { beta: beta.clone() },
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MergeMismatch {
    /// `floor(n alpha) != n - ceil(n / (beta + 1))`.
    Complement {
        n: u64,
        floor_alpha: u64,
        complement: u64,
    },
    /// A value's multiplicity among `floor(n alpha)` differs from
    /// `1 + [value is some floor(k beta)]`.
    Multiplicity {
        value: u64,
        observed: u64,
        expected: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MergeReport {
    pub checked: u64,
    pub mismatch: Option<MergeMismatch>,
}

impl MergeReport {
    pub fn passed(&self) -> bool {
        self.mismatch.is_none()
    }
}

/// Checks, for irrational `beta > 1` and `alpha = beta / (beta + 1)`, that
/// `floor(n alpha) = n - ceil(n / (beta + 1))` for `1 <= n <= count` and that
/// the values `floor(n alpha)` are exactly `N_0` merged with the Beatty values
/// `floor(k beta)`, `k >= 1`, over the range both lists cover.
pub fn verify_merge_identity(beta: &RealSpec, count: u64, prec: &Precision) -> Result<MergeReport> {
    if beta.is_rational() {
        return Err(Error::InvalidArgument(
            "the merge identity requires an irrational beta".into(),
        ));
    }
    if beta.cmp_int(1, prec)? != Ordering::Greater {
        return Err(Error::InvalidArgument(
            "the merge identity requires beta > 1".into(),
        ));
    }
    let (zero, one) = (BigInt::zero(), BigInt::one());
    let alpha = beta.mobius(&one, &zero, &one, &one)?;
    let gamma = beta.mobius(&zero, &one, &one, &one)?;
    let as_u64 = |v: BigInt| v.to_u64().ok_or(Error::IndexOverflow);

    let mut values = Vec::with_capacity(count as usize);
    for n in 1..=count {
        let floor_alpha = as_u64(alpha.floor_mul(n, prec)?)?;
        let complement = n - as_u64(gamma.ceil_mul(n, prec)?)?;
        if floor_alpha != complement {
            return Ok(MergeReport {
                checked: n,
                mismatch: Some(MergeMismatch::Complement {
                    n,
                    floor_alpha,
                    complement,
                }),
            });
        }
        values.push(floor_alpha);
    }
    let top = values.last().copied().unwrap_or(0);
    let mut observed = vec![0u64; top as usize + 1];
    for &v in &values {
        observed[v as usize] += 1;
    }
    let mut expected = vec![1u64; top as usize + 1];
    for k in 1.. {
        let v = as_u64(beta.floor_mul(k, prec)?)?;
        if v > top {
            break;
        }
        expected[v as usize] += 1;
    }
    // The largest value may still be waiting for its second occurrence.
    for v in 0..=top {
        let (o, e) = (observed[v as usize], expected[v as usize]);
        if o != e && !(v == top && o < e) {
            return Ok(MergeReport {
                checked: count,
                mismatch: Some(MergeMismatch::Multiplicity {
                    value: v,
                    observed: o,
                    expected: e,
                }),
            });
        }
    }
    Ok(MergeReport {
        checked: count,
        mismatch: None,
    })
}
