//! Command implementations. Each returns its output bytes; nothing is
//! written here.

use std::path::{Path, PathBuf};

use halton_subseq::bounds::{
    f_exponents, fit_growth, lemma1_rhs, prop1_assemble, prop1_lhs, prop1_tuples, s_l_sum,
    BoundReport,
};
use halton_subseq::discrepancy::{local_delta, star_discrepancy_exact, DiscrepancyResult};
use halton_subseq::halton::{
    subsequence_points, verify_merge_identity, BaseTuple, Coord, MergeMismatch, Point, PointSet,
};
use halton_subseq::real::{convergents, BigInt, BigRational, OstrowskiSystem, RealSpec};
use halton_subseq::{Error, Settings};
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::config::{BoundsMode, Command, Format, RunConfig};
use crate::error::{config_err, CliError};
use crate::output::{bounds_csv, discrepancy_csv, growth_csv, points_csv, tuple_label};
use crate::svg::{scatter, ScatterStyle};

/// Bytes bound for a file, or for stdout when `path` is `None`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub path: Option<PathBuf>,
    pub bytes: Vec<u8>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub outputs: Vec<Output>,
    /// Set when a checked inequality or identity came out false.
    pub failure: Option<String>,
}

impl Report {
    fn single(path: Option<PathBuf>, bytes: Vec<u8>) -> Self {
        Self {
            outputs: vec![Output { path, bytes }],
            failure: None,
        }
    }
}

/// Default point count and bases of the four-panel figure.
pub const FIGURE1_N: u64 = 500;
pub const FIGURE1_BASES: [u64; 2] = [2, 3];

/// The figure panels: file stem, title and beta.
pub fn figure1_panels() -> Vec<(&'static str, &'static str, RealSpec)> {
    vec![
        ("figure1_beta_1", "beta = 1", RealSpec::integer(1)),
        (
            "figure1_beta_sqrt2",
            "beta = sqrt(2)",
            RealSpec::sqrt(2).expect("2 is not a square"),
        ),
        ("figure1_beta_pi", "beta = pi", RealSpec::pi()),
        ("figure1_beta_e", "beta = e", RealSpec::e()),
    ]
}

pub fn run(cfg: &RunConfig) -> Result<Report, CliError> {
    match cfg.threads {
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| config_err(format!("thread pool: {e}")))?;
            pool.install(|| dispatch(cfg))
        }
        None => dispatch(cfg),
    }
}

fn dispatch(cfg: &RunConfig) -> Result<Report, CliError> {
    match cfg.command {
        Command::Gen => gen(cfg),
        Command::Figure1 => figure1(cfg),
        Command::Discrepancy => discrepancy(cfg),
        Command::Bounds => bounds(cfg),
        Command::Sweep => sweep(cfg),
        Command::Cf => cf(cfg),
        Command::Ostrowski => ostrowski(cfg),
        Command::VerifyMerge => verify_merge(cfg),
    }
}

fn count(n: u64) -> Result<usize, CliError> {
    usize::try_from(n).map_err(|_| CliError::Core(Error::IndexOverflow))
}

fn required<T>(v: &Option<T>) -> &T {
    v.as_ref().expect("checked by RunConfig::validate")
}

fn bases(cfg: &RunConfig) -> &BaseTuple {
    required(&cfg.bases)
}

/// `--alpha` if given, else `--beta` taken literally.
fn cf_target(cfg: &RunConfig) -> &RealSpec {
    cfg.alpha.as_ref().unwrap_or_else(|| required(&cfg.beta))
}

fn gen(cfg: &RunConfig) -> Result<Report, CliError> {
    let beta = required(&cfg.beta);
    let ps = subsequence_points(
        beta,
        bases(cfg),
        count(*required(&cfg.n))?,
        &cfg.settings().precision,
    )?;
    let bytes = match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => points_csv(&ps, cfg.exact)?,
        Format::Svg => {
            scatter(&ps, &format!("beta = {beta}"), &ScatterStyle::default()).into_bytes()
        }
    };
    Ok(Report::single(cfg.out.clone(), bytes))
}

fn figure1(cfg: &RunConfig) -> Result<Report, CliError> {
    let format = cfg.format.unwrap_or(Format::Svg);
    let bases = match &cfg.bases {
        Some(b) => b.clone(),
        None => BaseTuple::new(FIGURE1_BASES.to_vec())?,
    };
    let n = count(cfg.n.unwrap_or(FIGURE1_N))?;
    let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("."));
    let prec = cfg.settings().precision;
    let outputs = figure1_panels()
        .into_par_iter()
        .map(|(stem, title, beta)| {
            let ps = subsequence_points(&beta, &bases, n, &prec)?;
            let (bytes, ext) = match format {
                Format::Svg => (
                    scatter(&ps, title, &ScatterStyle::default()).into_bytes(),
                    "svg",
                ),
                Format::Csv => (points_csv(&ps, cfg.exact)?, "csv"),
            };
            Ok(Output {
                path: Some(dir.join(format!("{stem}.{ext}"))),
                bytes,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(Report {
        outputs,
        failure: None,
    })
}

/// `p/q`, an integer or a finite decimal such as `0.375`.
fn parse_coord(s: &str) -> Option<Coord> {
    let s = s.trim();
    let r = if let Some((p, q)) = s.split_once('/') {
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        BigRational::new(p.trim().parse().ok()?, q)
    } else if let Some((int, frac)) = s.split_once('.') {
        if !frac.bytes().all(|c| c.is_ascii_digit()) || int.starts_with('-') {
            return None;
        }
        let int: BigInt = if int.is_empty() {
            BigInt::zero()
        } else {
            int.parse().ok()?
        };
        let frac_val: BigInt = if frac.is_empty() {
            BigInt::zero()
        } else {
            frac.parse().ok()?
        };
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        BigRational::new(int * &scale + frac_val, scale)
    } else {
        BigRational::from_integer(s.parse().ok()?)
    };
    Some(Coord::new(r.numer().to_u64()?, r.denom().to_u64()?))
}

/// Reads columns `x1..xs` of a CSV file as an external point set.
fn read_points(path: &Path) -> Result<PointSet, CliError> {
    let mut rd = csv::Reader::from_path(path)?;
    let header = rd.headers()?.clone();
    let mut cols = Vec::new();
    while let Some(c) = header
        .iter()
        .position(|h| h.trim() == format!("x{}", cols.len() + 1))
    {
        cols.push(c);
    }
    if cols.is_empty() {
        return Err(config_err(format!("{}: no x1 column", path.display())));
    }
    let mut points = Vec::new();
    for (row, rec) in rd.records().enumerate() {
        let rec = rec?;
        let coords = cols
            .iter()
            .map(|&c| {
                let cell = rec.get(c).unwrap_or("");
                parse_coord(cell).ok_or_else(|| {
                    config_err(format!(
                        "{} row {}: bad coordinate `{cell}`",
                        path.display(),
                        row + 1
                    ))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        points.push(Point { coords });
    }
    PointSet::from_points(cols.len(), points)
        .map_err(|e| config_err(format!("{}: {e}", path.display())))
}

fn discrepancy(cfg: &RunConfig) -> Result<Report, CliError> {
    let budget = cfg.work_budget;
    let rows: Vec<(usize, DiscrepancyResult)> = if let Some(input) = &cfg.input {
        let ps = read_points(input)?;
        vec![(ps.dim(), star_discrepancy_exact(&ps, budget)?)]
    } else {
        let ns = cfg.n_values().expect("checked by RunConfig::validate");
        let max = count(*ns.last().expect("nonempty"))?;
        let ps = subsequence_points(
            required(&cfg.beta),
            bases(cfg),
            max,
            &cfg.settings().precision,
        )?;
        ns.par_iter()
            .map(|&n| {
                let d = star_discrepancy_exact(&ps.prefix(n as usize), budget)?;
                Ok((ps.dim(), d))
            })
            .collect::<Result<Vec<_>, CliError>>()?
    };
    Ok(Report::single(cfg.out.clone(), discrepancy_csv(&rows)?))
}

fn check_tuple_budget(n: u64, tuples: usize, budget: u128) -> Result<(), CliError> {
    let required = (tuples as u128).saturating_mul(n as u128);
    if required > budget {
        return Err(Error::WorkBudgetExceeded { required, budget }.into());
    }
    Ok(())
}

fn prop1_report(
    n: u64,
    alpha: &RealSpec,
    bases: &BaseTuple,
    settings: &Settings,
) -> Result<BoundReport, CliError> {
    let tuples = prop1_tuples(n, bases);
    check_tuple_budget(n, tuples.len(), settings.work_budget)?;
    let (deltas, lhs) = rayon::join(
        || {
            tuples
                .into_par_iter()
                .map(|j| {
                    let d = local_delta(n, alpha, &j, bases, &settings.precision)?;
                    Ok((j, d))
                })
                .collect::<Result<Vec<_>, Error>>()
        },
        || prop1_lhs(n, alpha, bases, settings),
    );
    Ok(prop1_assemble(n, alpha, bases, deltas?, lhs?))
}

fn violations(rows: &[(String, BoundReport)]) -> Option<String> {
    let bad: Vec<String> = rows
        .iter()
        .filter(|(_, r)| r.satisfied == Some(false))
        .map(|(j, r)| format!("N={} j={j}", r.n))
        .collect();
    (!bad.is_empty()).then(|| format!("bound violated at {}", bad.join("; ")))
}

fn bounds(cfg: &RunConfig) -> Result<Report, CliError> {
    let settings = cfg.settings();
    let bases = bases(cfg);
    let mode = *required(&cfg.mode);
    if mode == BoundsMode::Sl {
        let alpha = cf_target(cfg);
        let l = *required(&cfg.l);
        let s = s_l_sum(alpha, bases, l, &settings.precision)?;
        let mut w = small_writer();
        w.write_record(["L", "alpha", "bases", "S_L"])?;
        let bases_text = bases
            .iter()
            .map(|b| b.to_string())
            .collect::<Vec<_>>()
            .join(",");
        w.write_record([l.to_string(), alpha.to_string(), bases_text, s.to_string()])?;
        return Ok(Report::single(cfg.out.clone(), into_bytes(w)?));
    }
    let alpha = cfg.bound_alpha()?;
    let ns = cfg.n_values().expect("checked by RunConfig::validate");
    let mut rows = Vec::new();
    for &n in &ns {
        match mode {
            BoundsMode::Prop1 => {
                let label = format!("<={}", tuple_label(&f_exponents(n, bases)));
                rows.push((label, prop1_report(n, &alpha, bases, &settings)?));
            }
            BoundsMode::Lemma1 => {
                let tuples = match &cfg.j {
                    Some(j) => vec![j.clone()],
                    None => prop1_tuples(n, bases),
                };
                check_tuple_budget(n, tuples.len(), settings.work_budget)?;
                let reports = tuples
                    .par_iter()
                    .map(|j| {
                        Ok((
                            tuple_label(j),
                            lemma1_rhs(n, &alpha, j, bases, &settings.precision)?,
                        ))
                    })
                    .collect::<Result<Vec<_>, CliError>>()?;
                rows.extend(reports);
            }
            BoundsMode::Sl => unreachable!(),
        }
    }
    Ok(Report {
        outputs: vec![Output {
            path: cfg.out.clone(),
            bytes: bounds_csv(&rows)?,
        }],
        failure: violations(&rows),
    })
}

fn sweep(cfg: &RunConfig) -> Result<Report, CliError> {
    let ns = required(&cfg.n_range);
    let bases = bases(cfg);
    let max = count(*ns.last().expect("nonempty"))?;
    let ps = subsequence_points(required(&cfg.beta), bases, max, &cfg.settings().precision)?;
    let values = ns
        .par_iter()
        .map(|&n| {
            Ok((
                n,
                star_discrepancy_exact(&ps.prefix(n as usize), cfg.work_budget)?.scaled(),
            ))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let g = fit_growth(bases.dim(), values)?;
    Ok(Report::single(cfg.out.clone(), growth_csv(&g, cfg.exact)?))
}

fn small_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

fn into_bytes(w: csv::Writer<Vec<u8>>) -> Result<Vec<u8>, CliError> {
    w.into_inner()
        .map_err(|e| CliError::Csv(e.into_error().into()))
}

/// `k,a_k,p_k,q_k` for `k = 0..=K`.
fn cf(cfg: &RunConfig) -> Result<Report, CliError> {
    let x = cf_target(cfg);
    let k = cfg.k.unwrap_or(20);
    let expansion = x.continued_fraction(k, &cfg.settings().precision)?;
    let conv = convergents(&expansion);
    let mut w = small_writer();
    w.write_record(["k", "a_k", "p_k", "q_k"])?;
    for (i, (p, q)) in conv.terms.iter().enumerate() {
        let a = expansion.term(i).expect("one term per convergent");
        w.write_record([i.to_string(), a.to_string(), p.to_string(), q.to_string()])?;
    }
    Ok(Report::single(cfg.out.clone(), into_bytes(w)?))
}

/// `i,digit,q_i`, least significant first.
fn ostrowski(cfg: &RunConfig) -> Result<Report, CliError> {
    let x = cf_target(cfg);
    let n = *required(&cfg.n);
    let e = OstrowskiSystem::new(x, n, &cfg.settings().precision)?.expand(n)?;
    let mut w = small_writer();
    w.write_record(["i", "digit", "q_i"])?;
    for (i, (d, q)) in e.digits.iter().zip(&e.denominators).enumerate() {
        w.write_record([i.to_string(), d.to_string(), q.to_string()])?;
    }
    let mut failure = None;
    if e.value() != n as u128 {
        failure = Some(format!("digits reconstruct {} instead of {n}", e.value()));
    }
    Ok(Report {
        outputs: vec![Output {
            path: cfg.out.clone(),
            bytes: into_bytes(w)?,
        }],
        failure,
    })
}

/// `beta,N,checked,passed,mismatch`.
fn verify_merge(cfg: &RunConfig) -> Result<Report, CliError> {
    let beta = required(&cfg.beta);
    let n = *required(&cfg.n);
    let r = verify_merge_identity(beta, n, &cfg.settings().precision).map_err(|e| match e {
        Error::InvalidArgument(m) => config_err(m),
        e => e.into(),
    })?;
    let mismatch = match &r.mismatch {
        None => String::new(),
        Some(MergeMismatch::Complement {
            n,
            floor_alpha,
            complement,
        }) => {
            format!("n={n}: floor(n alpha)={floor_alpha} but n-ceil(n/(beta+1))={complement}")
        }
        Some(MergeMismatch::Multiplicity {
            value,
            observed,
            expected,
        }) => {
            format!("value {value} occurs {observed} times, expected {expected}")
        }
    };
    let mut w = small_writer();
    w.write_record(["beta", "N", "checked", "passed", "mismatch"])?;
    w.write_record([
        beta.to_string(),
        n.to_string(),
        r.checked.to_string(),
        r.passed().to_string(),
        mismatch.clone(),
    ])?;
    Ok(Report {
        outputs: vec![Output {
            path: cfg.out.clone(),
            bytes: into_bytes(w)?,
        }],
        failure: (!r.passed()).then_some(mismatch),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinates() {
        assert_eq!(parse_coord("1/3"), Some(Coord::new(1, 3)));
        assert_eq!(parse_coord("0.375"), Some(Coord::new(3, 8)));
        assert_eq!(parse_coord(".5"), Some(Coord::new(1, 2)));
        assert_eq!(parse_coord("0"), Some(Coord::new(0, 1)));
        assert_eq!(parse_coord("-0.5"), None);
        assert_eq!(parse_coord("1/0"), None);
        assert_eq!(parse_coord("abc"), None);
    }
}
