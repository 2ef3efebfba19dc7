//! Exact discrepancy computations.
//!
//! Star discrepancies are computed on an integer lattice: every coordinate on
//! axis `i` is rescaled by the lcm `D_i` of that axis' denominators, so box
//! volumes and counts compare as integers over the common denominator
//! `N * D_1 * ... * D_s`. The machine integer width is chosen from that bound.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive, Zero};

use crate::halton::{BaseTuple, Coord, PointSet};
use crate::real::{Precision, RealSpec};
use crate::{Error, Result};

/// `[lower_1, upper_1) x ... x [lower_s, upper_s)` inside `[0, 1]^s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalBox {
    lower: Vec<Coord>,
    upper: Vec<Coord>,
}

impl IntervalBox {
    pub fn new(lower: Vec<Coord>, upper: Vec<Coord>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                found: upper.len(),
            });
        }
        if lower
            .iter()
            .zip(&upper)
            .any(|(u, w)| u >= w || *w > Coord::one())
        {
            return Err(Error::InvalidArgument(
                "box sides must satisfy 0 <= u < w <= 1".into(),
            ));
        }
        Ok(Self { lower, upper })
    }

    pub fn anchored(upper: Vec<Coord>) -> Result<Self> {
        Self::new(vec![Coord::zero(); upper.len()], upper)
    }

    pub fn unit(dim: usize) -> Self {
        Self {
            lower: vec![Coord::zero(); dim],
            upper: vec![Coord::one(); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn volume(&self) -> BigRational {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(u, w)| ratio_to_big(&(w - u)))
            .fold(BigRational::one(), |acc, s| acc * s)
    }
}

/// `A_N(J)`: number of points in the half-open box.
pub fn count_in_box(ps: &PointSet, j: &IntervalBox) -> Result<u64> {
    if ps.dim() != j.dim() {
        return Err(Error::DimensionMismatch {
            expected: ps.dim(),
            found: j.dim(),
        });
    }
    let n = ps
        .points()
        .iter()
        .filter(|p| {
            p.coords
                .iter()
                .zip(j.lower.iter().zip(&j.upper))
                .all(|(x, (u, w))| u <= x && x < w)
        })
        .count();
    Ok(n as u64)
}

/// Which side of the upper corner an anchored box includes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Closure {
    /// `[0, w)`: attains sup of `volume - A/N`.
    Open,
    /// `[0, w]`, the limit of `[0, w + eps)`: attains sup of `A/N - volume`.
    Closed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnchoredBox {
    pub upper: Vec<Coord>,
    pub closure: Closure,
}

impl AnchoredBox {
    pub fn count(&self, ps: &PointSet) -> u64 {
        ps.points()
            .iter()
            .filter(|p| {
                p.coords
                    .iter()
                    .zip(&self.upper)
                    .all(|(x, w)| match self.closure {
                        Closure::Open => x < w,
                        Closure::Closed => x <= w,
                    })
            })
            .count() as u64
    }

    pub fn volume(&self) -> BigRational {
        self.upper
            .iter()
            .map(ratio_to_big)
            .fold(BigRational::one(), |acc, w| acc * w)
    }

    /// `|A/N - volume|` for this box.
    pub fn local_discrepancy(&self, ps: &PointSet) -> BigRational {
        let a = BigRational::new(self.count(ps).into(), ps.len().into());
        let d = a - self.volume();
        if d < BigRational::zero() {
            -d
        } else {
            d
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscrepancyResult {
    pub value: BigRational,
    pub witness: AnchoredBox,
    pub n: usize,
}

impl DiscrepancyResult {
    /// `N * D_N^*`.
    pub fn scaled(&self) -> BigRational {
        &self.value * BigInt::from(self.n)
    }
}

fn ratio_to_big(r: &Coord) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

/// Star discrepancy of a one-dimensional sample from the sorted-sample
/// formula `1/(2N) + max_i |x_(i) - (2i - 1)/(2N)|`.
pub fn star_discrepancy_1d(ps: &PointSet) -> Result<DiscrepancyResult> {
    if ps.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: ps.dim(),
        });
    }
    let n = ps.len();
    if n == 0 {
        return Err(Error::InvalidArgument(
            "discrepancy of an empty point set".into(),
        ));
    }
    let mut xs: Vec<Coord> = ps.points().iter().map(|p| p.coords[0]).collect();
    xs.sort_unstable();
    let two_n = BigInt::from(2 * n);
    let half = BigRational::new(BigInt::one(), two_n.clone());
    let mut best: Option<(BigRational, usize)> = None;
    for (i, x) in xs.iter().enumerate() {
        let center = BigRational::new(BigInt::from(2 * i + 1), two_n.clone());
        let dev = ratio_to_big(x) - center;
        let dev = if dev < BigRational::zero() { -dev } else { dev };
        if best.as_ref().is_none_or(|(b, _)| dev > *b) {
            best = Some((dev, i));
        }
    }
    let (dev, i) = best.expect("nonempty");
    let x = xs[i];
    // x above its center: [0, x) holds too few points; below: [0, x] too many.
    let center = BigRational::new(BigInt::from(2 * i + 1), two_n);
    let closure = if ratio_to_big(&x) >= center {
        Closure::Open
    } else {
        Closure::Closed
    };
    Ok(DiscrepancyResult {
        value: dev + half,
        witness: AnchoredBox {
            upper: vec![x],
            closure,
        },
        n,
    })
}

/// `D^* <= D <= 2^s D^*`.
pub fn extreme_from_star(star: &DiscrepancyResult, dim: usize) -> (BigRational, BigRational) {
    let upper = &star.value * BigInt::from(2u32).pow(dim as u32);
    (star.value.clone(), upper)
}

trait Scalar:
    Clone + Ord + Zero + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self>
{
    fn from_u64(v: u64) -> Self;
    fn from_big(v: &BigInt) -> Self;
    fn to_big(&self) -> BigInt;
}

macro_rules! scalar_prim {
    ($t:ty, $to:ident) => {
        impl Scalar for $t {
            fn from_u64(v: u64) -> Self {
                v as $t
            }
            fn from_big(v: &BigInt) -> Self {
                v.$to().expect("lattice value fits the chosen width")
            }
            fn to_big(&self) -> BigInt {
                BigInt::from(*self)
            }
        }
    };
}
scalar_prim!(i64, to_i64);
scalar_prim!(i128, to_i128);

impl Scalar for BigInt {
    fn from_u64(v: u64) -> Self {
        BigInt::from(v)
    }
    fn from_big(v: &BigInt) -> Self {
        v.clone()
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

struct Lattice<T> {
    /// Per point, per axis: `x_i * D_i`.
    coords: Vec<Vec<T>>,
    denoms: Vec<T>,
    n: T,
    /// `D_1 * ... * D_s`.
    m: T,
}

#[derive(Clone, Copy)]
struct Modes {
    plus: bool,
    minus: bool,
}

/// Best `A_closed * M - N * vol` (plus) and `N * vol - A_open * M` (minus)
/// with their box corners.
struct Best<T> {
    plus: Option<(T, Vec<T>)>,
    minus: Option<(T, Vec<T>)>,
}

impl<T: Scalar> Best<T> {
    fn offer_plus(&mut self, v: T, corner: impl FnOnce() -> Vec<T>) {
        if self.plus.as_ref().is_none_or(|(b, _)| v > *b) {
            self.plus = Some((v, corner()));
        }
    }

    fn offer_minus(&mut self, v: T, corner: impl FnOnce() -> Vec<T>) {
        if self.minus.as_ref().is_none_or(|(b, _)| v > *b) {
            self.minus = Some((v, corner()));
        }
    }
}

fn with<T: Clone>(prefix: &[T], tail: &[T]) -> Vec<T> {
    let mut v = prefix.to_vec();
    v.extend_from_slice(tail);
    v
}

impl<T: Scalar> Lattice<T> {
    fn dim(&self) -> usize {
        self.denoms.len()
    }

    fn sweep(
        &self,
        active: &mut [usize],
        axis: usize,
        factor: T,
        modes: Modes,
        prefix: &mut Vec<T>,
        best: &mut Best<T>,
    ) {
        match self.dim() - axis {
            1 => self.sweep_1d(active, axis, factor, modes, prefix, best),
            2 => self.sweep_2d(active, axis, factor, modes, prefix, best),
            _ => {
                active.sort_by(|&a, &b| self.coords[a][axis].cmp(&self.coords[b][axis]));
                let mut start = 0;
                while start < active.len() {
                    let g = self.coords[active[start]][axis].clone();
                    let mut end = start;
                    while end < active.len() && self.coords[active[end]][axis] == g {
                        end += 1;
                    }
                    let f = factor.clone() * g.clone();
                    prefix.push(g);
                    if modes.minus {
                        let mut open = active[..start].to_vec();
                        let m = Modes {
                            plus: false,
                            minus: true,
                        };
                        self.sweep(&mut open, axis + 1, f.clone(), m, prefix, best);
                    }
                    if modes.plus {
                        let mut closed = active[..end].to_vec();
                        let m = Modes {
                            plus: true,
                            minus: false,
                        };
                        self.sweep(&mut closed, axis + 1, f, m, prefix, best);
                    }
                    prefix.pop();
                    start = end;
                }
                if modes.minus {
                    let d = self.denoms[axis].clone();
                    prefix.push(d.clone());
                    let m = Modes {
                        plus: false,
                        minus: true,
                    };
                    self.sweep(active, axis + 1, factor * d, m, prefix, best);
                    prefix.pop();
                }
            }
        }
    }

    fn sweep_1d(
        &self,
        active: &mut [usize],
        axis: usize,
        factor: T,
        modes: Modes,
        prefix: &[T],
        best: &mut Best<T>,
    ) {
        let mut xs: Vec<T> = active
            .iter()
            .map(|&i| self.coords[i][axis].clone())
            .collect();
        xs.sort_unstable();
        let nf = self.n.clone() * factor;
        let mut i = 0;
        while i < xs.len() {
            let g = xs[i].clone();
            let mut j = i;
            while j < xs.len() && xs[j] == g {
                j += 1;
            }
            let vol = nf.clone() * g.clone();
            if modes.minus {
                let v = vol.clone() - T::from_u64(i as u64) * self.m.clone();
                best.offer_minus(v, || with(prefix, core::slice::from_ref(&g)));
            }
            if modes.plus {
                let v = T::from_u64(j as u64) * self.m.clone() - vol;
                best.offer_plus(v, || with(prefix, core::slice::from_ref(&g)));
            }
            i = j;
        }
        if modes.minus {
            let d = self.denoms[axis].clone();
            let v = nf * d.clone() - T::from_u64(xs.len() as u64) * self.m.clone();
            best.offer_minus(v, || with(prefix, &[d]));
        }
    }

    fn sweep_2d(
        &self,
        active: &mut [usize],
        axis: usize,
        factor: T,
        modes: Modes,
        prefix: &[T],
        best: &mut Best<T>,
    ) {
        let (ya, za) = (axis, axis + 1);
        let mut zs: Vec<T> = active.iter().map(|&i| self.coords[i][za].clone()).collect();
        zs.sort_unstable();
        zs.dedup();
        let rank = |i: usize| {
            zs.binary_search(&self.coords[i][za])
                .expect("z value present")
        };
        active.sort_by(|&a, &b| self.coords[a][ya].cmp(&self.coords[b][ya]));

        let nf = self.n.clone() * factor;
        let dz = self.denoms[za].clone();
        let m = &self.m;
        let mut cnt = vec![0u64; zs.len()];
        let mut group: Vec<usize> = Vec::new();
        let mut start = 0;
        let total = active.len();

        // one pass per distinct y value g, then a final open pass at g = D_y
        loop {
            let (g, end) = if start < total {
                let g = self.coords[active[start]][ya].clone();
                let mut end = start;
                while end < total && self.coords[active[end]][ya] == g {
                    end += 1;
                }
                (g, end)
            } else if modes.minus {
                (self.denoms[ya].clone(), total)
            } else {
                break;
            };
            let closing = start < total;
            group.clear();
            group.extend(active[start..end].iter().map(|&i| rank(i)));
            group.sort_unstable();

            let fg = nf.clone() * g.clone();
            let mut acc = 0u64;
            let mut gp = 0usize;
            for (k, z) in zs.iter().enumerate() {
                let vol = fg.clone() * z.clone();
                if modes.minus {
                    let v = vol.clone() - T::from_u64(acc) * m.clone();
                    best.offer_minus(v, || with(prefix, &[g.clone(), z.clone()]));
                }
                acc += cnt[k];
                if closing && modes.plus {
                    while gp < group.len() && group[gp] <= k {
                        gp += 1;
                    }
                    let v = T::from_u64(acc + gp as u64) * m.clone() - vol;
                    best.offer_plus(v, || with(prefix, &[g.clone(), z.clone()]));
                }
            }
            if modes.minus {
                let v = fg * dz.clone() - T::from_u64(acc) * m.clone();
                best.offer_minus(v, || with(prefix, &[g.clone(), dz.clone()]));
            }
            if !closing {
                break;
            }
            for &r in &group {
                cnt[r] += 1;
            }
            start = end;
        }
    }
}

/// Lattice denominators (lcm per axis) and scaled coordinates.
fn lattice_parts(ps: &PointSet) -> (Vec<BigInt>, Vec<Vec<BigInt>>) {
    let s = ps.dim();
    let mut denoms = vec![BigInt::one(); s];
    for p in ps.points() {
        for (d, x) in denoms.iter_mut().zip(&p.coords) {
            *d = d.lcm(&BigInt::from(*x.denom()));
        }
    }
    let coords = ps
        .points()
        .iter()
        .map(|p| {
            p.coords
                .iter()
                .zip(&denoms)
                .map(|(x, d)| BigInt::from(*x.numer()) * (d / BigInt::from(*x.denom())))
                .collect()
        })
        .collect();
    (denoms, coords)
}

fn distinct_per_axis(ps: &PointSet) -> Vec<usize> {
    (0..ps.dim())
        .map(|a| {
            let mut v: Vec<Coord> = ps.points().iter().map(|p| p.coords[a]).collect();
            v.sort_unstable();
            v.dedup();
            v.len()
        })
        .collect()
}

fn run<T: Scalar>(
    denoms: &[BigInt],
    coords: &[Vec<BigInt>],
    n: usize,
) -> (BigInt, Vec<BigInt>, Closure) {
    let lat = Lattice {
        coords: coords
            .iter()
            .map(|c| c.iter().map(T::from_big).collect())
            .collect(),
        denoms: denoms.iter().map(T::from_big).collect(),
        n: T::from_u64(n as u64),
        m: T::from_big(&denoms.iter().product::<BigInt>()),
    };
    let mut active: Vec<usize> = (0..n).collect();
    let mut best = Best {
        plus: None,
        minus: None,
    };
    let modes = Modes {
        plus: true,
        minus: true,
    };
    lat.sweep(
        &mut active,
        0,
        T::from_u64(1),
        modes,
        &mut Vec::new(),
        &mut best,
    );
    let (pv, pw) = best
        .plus
        .expect("nonempty point set has a closed candidate");
    let (mv, mw) = best.minus.expect("the unit box is an open candidate");
    if pv >= mv {
        (
            pv.to_big(),
            pw.iter().map(T::to_big).collect(),
            Closure::Closed,
        )
    } else {
        (
            mv.to_big(),
            mw.iter().map(T::to_big).collect(),
            Closure::Open,
        )
    }
}

/// Exact star discrepancy for dimension 1 to 3 by sweeping every critical
/// anchored box: each side at a point coordinate (both closure sides) or at 1.
pub fn star_discrepancy_exact(ps: &PointSet, work_budget: u128) -> Result<DiscrepancyResult> {
    let s = ps.dim();
    if !(1..=3).contains(&s) {
        return Err(Error::InvalidArgument(
            "exact star discrepancy supports dimensions 1 to 3".into(),
        ));
    }
    let n = ps.len();
    if n == 0 {
        return Err(Error::InvalidArgument(
            "discrepancy of an empty point set".into(),
        ));
    }
    let required = distinct_per_axis(ps)
        .iter()
        .fold(1u128, |acc, &d| acc.saturating_mul(d as u128 + 1));
    if required > work_budget {
        return Err(Error::WorkBudgetExceeded {
            required,
            budget: work_budget,
        });
    }
    let (denoms, coords) = lattice_parts(ps);
    let m: BigInt = denoms.iter().product();
    let scale = &m * BigInt::from(n);
    // values stay within [-N*M, N*M] and products of intermediate factors
    // never exceed N*M
    let bits = scale.bits();
    let (value, corner, closure) = if bits < 62 {
        run::<i64>(&denoms, &coords, n)
    } else if bits < 126 {
        run::<i128>(&denoms, &coords, n)
    } else {
        run::<BigInt>(&denoms, &coords, n)
    };
    let upper = corner
        .iter()
        .zip(&denoms)
        .map(|(w, d)| {
            let r = BigRational::new(w.clone(), d.clone());
            Ratio::new(
                r.numer().to_u64().expect("corner is a coordinate or 1"),
                r.denom().to_u64().expect("corner is a coordinate or 1"),
            )
        })
        .collect();
    Ok(DiscrepancyResult {
        value: BigRational::new(value, scale),
        witness: AnchoredBox { upper, closure },
        n,
    })
}

fn cell_modulus(j: &[u32], bases: &BaseTuple) -> Result<u64> {
    if j.len() != bases.dim() {
        return Err(Error::DimensionMismatch {
            expected: bases.dim(),
            found: j.len(),
        });
    }
    bases.iter().zip(j).try_fold(1u64, |acc, (b, &e)| {
        b.checked_pow(e)
            .and_then(|p| acc.checked_mul(p))
            .ok_or(Error::InvalidArgument("cell modulus overflows u64".into()))
    })
}

/// `N * Delta`: the largest deviation `|A_N(cell) - N/B|` over the `B = prod b_i^{j_i}`
/// cells `[R/B, (R+1)/B)` for the points `{n / (alpha * B)}`, `0 <= n < N`.
pub fn local_delta(
    n: u64,
    alpha: &RealSpec,
    j: &[u32],
    bases: &BaseTuple,
    prec: &Precision,
) -> Result<BigRational> {
    let cells = cell_modulus(j, bases)?;
    if alpha.cmp_int(0, prec)? != Ordering::Greater {
        return Err(Error::InvalidArgument("alpha must be positive".into()));
    }
    if cells == 1 {
        return Ok(BigRational::zero());
    }
    let x = alpha.recip()?.div_int(&BigInt::from(cells))?;
    let mut hits = (0..n)
        .map(|i| x.frac_cell(i, cells, prec))
        .collect::<Result<Vec<u64>>>()?;
    hits.sort_unstable();
    let b = cells as u128;
    let target = n as u128;
    let dev = |count: u128| (count * b).abs_diff(target);
    let mut worst = 0u128;
    let mut occupied = 0u64;
    for run in hits.chunk_by(|a, b| a == b) {
        occupied += 1;
        worst = worst.max(dev(run.len() as u128));
    }
    if occupied < cells {
        worst = worst.max(target);
    }
    Ok(BigRational::new(BigInt::from(worst), BigInt::from(cells)))
}
