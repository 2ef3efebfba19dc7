//! Run configuration: command-line flags and optional `key = value` files
//! merged into one validated [`RunConfig`].

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::ValueEnum;
use halton_subseq::halton::BaseTuple;
use halton_subseq::real::{Precision, RealSpec};
use halton_subseq::{Settings, DEFAULT_WORK_BUDGET};

use crate::error::{config_err, CliError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Gen,
    Figure1,
    Discrepancy,
    Bounds,
    Sweep,
    Cf,
    Ostrowski,
    VerifyMerge,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Svg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BoundsMode {
    Prop1,
    Lemma1,
    Sl,
}

fn enum_name<T: ValueEnum>(v: T) -> String {
    v.to_possible_value()
        .expect("no skipped variants")
        .get_name()
        .to_string()
}

fn enum_parse<T: ValueEnum>(key: &str, s: &str) -> Result<T, CliError> {
    T::from_str(s, true).map_err(|_| config_err(format!("invalid {key} `{s}`")))
}

/// Keys accepted in config files, in canonical order.
pub const KEYS: [&str; 17] = [
    "command",
    "beta",
    "alpha",
    "bases",
    "n",
    "n-range",
    "out",
    "format",
    "exact",
    "work-budget",
    "max-digits",
    "threads",
    "mode",
    "l",
    "j",
    "k",
    "input",
];

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub beta: Option<RealSpec>,
    pub alpha: Option<RealSpec>,
    pub bases: Option<BaseTuple>,
    pub n: Option<u64>,
    pub n_range: Option<Vec<u64>>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub exact: bool,
    pub work_budget: u128,
    pub max_digits: u32,
    pub threads: Option<usize>,
    pub mode: Option<BoundsMode>,
    pub l: Option<u32>,
    pub j: Option<Vec<u32>>,
    pub k: Option<usize>,
    pub input: Option<PathBuf>,
}

/// Reads `key = value` lines; `#` starts a comment and `_` in keys reads as `-`.
pub fn parse_pairs(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| config_err(format!("line {}: expected `key = value`", no + 1)))?;
        let k = k.trim().replace('_', "-");
        if !KEYS.contains(&k.as_str()) {
            return Err(config_err(format!("line {}: unknown key `{k}`", no + 1)));
        }
        out.insert(k, v.trim().to_string());
    }
    Ok(out)
}

fn parse_num<T: std::str::FromStr>(key: &str, s: &str) -> Result<T, CliError> {
    s.trim()
        .parse()
        .map_err(|_| config_err(format!("invalid {key} `{s}`")))
}

fn parse_list<T: std::str::FromStr>(key: &str, s: &str) -> Result<Vec<T>, CliError> {
    s.split(',').map(|p| parse_num(key, p)).collect()
}

/// `2^k` or a plain integer.
fn parse_count(key: &str, s: &str) -> Result<u64, CliError> {
    match s.trim().split_once('^') {
        Some((b, e)) => {
            let b: u64 = parse_num(key, b)?;
            let e: u32 = parse_num(key, e)?;
            b.checked_pow(e)
                .ok_or_else(|| config_err(format!("{key} `{s}` overflows")))
        }
        None => parse_num(key, s),
    }
}

/// `a..b` with power-of-two ends expands to every power of two in between;
/// otherwise a comma list.
pub fn parse_n_range(s: &str) -> Result<Vec<u64>, CliError> {
    let list = if let Some((a, b)) = s.split_once("..") {
        let (a, b) = (parse_count("n-range", a)?, parse_count("n-range", b)?);
        if !a.is_power_of_two() || !b.is_power_of_two() {
            return Err(config_err(format!(
                "n-range `{s}` must run between powers of two"
            )));
        }
        (a.trailing_zeros()..=b.trailing_zeros())
            .map(|k| 1u64 << k)
            .collect()
    } else {
        s.split(',')
            .map(|p| parse_count("n-range", p))
            .collect::<Result<Vec<_>, _>>()?
    };
    if list.is_empty() {
        return Err(config_err(format!("n-range `{s}` is empty")));
    }
    if list[0] == 0 || list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(config_err(format!(
            "n-range `{s}` must be positive and strictly increasing"
        )));
    }
    Ok(list)
}

/// Integer or `<m>e<k>`.
fn parse_budget(s: &str) -> Result<u128, CliError> {
    let bad = || config_err(format!("invalid work-budget `{s}`"));
    match s.trim().split_once(['e', 'E']) {
        Some((m, e)) => {
            let m: u128 = m.parse().map_err(|_| bad())?;
            let e: u32 = e.parse().map_err(|_| bad())?;
            10u128
                .checked_pow(e)
                .and_then(|p| p.checked_mul(m))
                .ok_or_else(bad)
        }
        None => s.trim().parse().map_err(|_| bad()),
    }
}

fn parse_real(key: &str, s: &str) -> Result<RealSpec, CliError> {
    s.parse().map_err(|e| config_err(format!("{key}: {e}")))
}

fn parse_bool(key: &str, s: &str) -> Result<bool, CliError> {
    match s {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(config_err(format!("invalid {key} `{s}`"))),
    }
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

impl RunConfig {
    pub fn from_pairs(pairs: &BTreeMap<String, String>) -> Result<Self, CliError> {
        let get = |k: &str| pairs.get(k).map(String::as_str);
        let command = enum_parse(
            "command",
            get("command").ok_or_else(|| config_err("missing command"))?,
        )?;
        let bases = get("bases")
            .map(|s| {
                let v = parse_list("bases", s)?;
                BaseTuple::new(v).map_err(|e| config_err(format!("bases: {e}")))
            })
            .transpose()?;
        let max_digits = get("max-digits")
            .map(|s| parse_num("max-digits", s))
            .transpose()?
            .unwrap_or(Precision::DEFAULT_MAX_DIGITS);
        if max_digits < Precision::START_DIGITS {
            return Err(config_err(format!(
                "max-digits must be at least {}",
                Precision::START_DIGITS
            )));
        }
        let threads = get("threads")
            .map(|s| parse_num("threads", s))
            .transpose()?;
        if threads == Some(0) {
            return Err(config_err("threads must be positive"));
        }
        let cfg = Self {
            command,
            beta: get("beta").map(|s| parse_real("beta", s)).transpose()?,
            alpha: get("alpha").map(|s| parse_real("alpha", s)).transpose()?,
            bases,
            n: get("n").map(|s| parse_count("n", s)).transpose()?,
            n_range: get("n-range").map(parse_n_range).transpose()?,
            out: get("out").map(PathBuf::from),
            format: get("format").map(|s| enum_parse("format", s)).transpose()?,
            exact: get("exact")
                .map(|s| parse_bool("exact", s))
                .transpose()?
                .unwrap_or(false),
            work_budget: get("work-budget")
                .map(parse_budget)
                .transpose()?
                .unwrap_or(DEFAULT_WORK_BUDGET),
            max_digits,
            threads,
            mode: get("mode").map(|s| enum_parse("mode", s)).transpose()?,
            l: get("l").map(|s| parse_num("l", s)).transpose()?,
            j: get("j").map(|s| parse_list("j", s)).transpose()?,
            k: get("k").map(|s| parse_num("k", s)).transpose()?,
            input: get("input").map(PathBuf::from),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_text(text: &str) -> Result<Self, CliError> {
        Self::from_pairs(&parse_pairs(text)?)
    }

    /// Canonical `key = value` form; [`RunConfig::from_text`] reads it back
    /// to an equal config.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mut put = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        put("command", enum_name(self.command));
        if let Some(b) = &self.beta {
            put("beta", b.to_string());
        }
        if let Some(a) = &self.alpha {
            put("alpha", a.to_string());
        }
        if let Some(b) = &self.bases {
            put("bases", join(b.as_slice()));
        }
        if let Some(n) = self.n {
            put("n", n.to_string());
        }
        if let Some(r) = &self.n_range {
            put("n-range", join(r));
        }
        if let Some(o) = &self.out {
            put("out", o.display().to_string());
        }
        if let Some(f) = self.format {
            put("format", enum_name(f));
        }
        put("exact", self.exact.to_string());
        put("work-budget", self.work_budget.to_string());
        put("max-digits", self.max_digits.to_string());
        if let Some(t) = self.threads {
            put("threads", t.to_string());
        }
        if let Some(m) = self.mode {
            put("mode", enum_name(m));
        }
        if let Some(l) = self.l {
            put("l", l.to_string());
        }
        if let Some(j) = &self.j {
            put("j", join(j));
        }
        if let Some(k) = self.k {
            put("k", k.to_string());
        }
        if let Some(i) = &self.input {
            put("input", i.display().to_string());
        }
        s
    }

    pub fn settings(&self) -> Settings {
        Settings {
            precision: Precision::with_max_digits(self.max_digits),
            work_budget: self.work_budget,
        }
    }

    /// The N values to evaluate: `n-range` if given, else the single `n`.
    pub fn n_values(&self) -> Option<Vec<u64>> {
        self.n_range.clone().or(self.n.map(|n| vec![n]))
    }

    fn need<'a, T>(&self, v: &'a Option<T>, key: &str) -> Result<&'a T, CliError> {
        v.as_ref()
            .ok_or_else(|| config_err(format!("`{}` needs --{key}", enum_name(self.command))))
    }

    fn need_n(&self) -> Result<(), CliError> {
        if self.n.is_none() && self.n_range.is_none() {
            return Err(config_err(format!(
                "`{}` needs --n or --n-range",
                enum_name(self.command)
            )));
        }
        if self.n == Some(0) {
            return Err(config_err("n must be positive"));
        }
        Ok(())
    }

    fn positive_beta(&self) -> Result<&RealSpec, CliError> {
        let beta = self.need(&self.beta, "beta")?;
        let prec = Precision::with_max_digits(self.max_digits);
        match beta.cmp_int(0, &prec)? {
            std::cmp::Ordering::Greater => Ok(beta),
            std::cmp::Ordering::Equal => Err(config_err("beta must be nonzero")),
            std::cmp::Ordering::Less => Err(config_err(
                "beta must be positive so that floor(n beta) is an index",
            )),
        }
    }

    /// `alpha = 1 / beta` for `beta` in `(0, 1)`, or an explicit `--alpha > 1`.
    pub fn bound_alpha(&self) -> Result<RealSpec, CliError> {
        let prec = Precision::with_max_digits(self.max_digits);
        if let Some(a) = &self.alpha {
            if a.cmp_int(1, &prec)? != std::cmp::Ordering::Greater {
                return Err(config_err("alpha must exceed 1"));
            }
            return Ok(a.clone());
        }
        let beta = self.positive_beta()?;
        if beta.cmp_int(1, &prec)? != std::cmp::Ordering::Less {
            return Err(config_err(
                "bounds need beta in (0, 1); for beta > 1 use alpha = beta / (beta + 1), \
                 see `verify-merge`",
            ));
        }
        Ok(beta.recip()?)
    }

    /// Rejects missing or contradictory options for the chosen command.
    pub fn validate(&self) -> Result<(), CliError> {
        match self.command {
            Command::Gen => {
                self.positive_beta()?;
                let bases = self.need(&self.bases, "bases")?;
                self.need(&self.n, "n")?;
                self.need_n()?;
                if self.format == Some(Format::Svg) && bases.dim() != 2 {
                    return Err(config_err("svg output needs exactly two bases"));
                }
            }
            Command::Figure1 => {
                if self.bases.as_ref().is_some_and(|b| b.dim() != 2) {
                    return Err(config_err("figure1 needs exactly two bases"));
                }
                if self.n == Some(0) {
                    return Err(config_err("n must be positive"));
                }
            }
            Command::Discrepancy => {
                if self.input.is_some() {
                    if self.beta.is_some() || self.n.is_some() || self.n_range.is_some() {
                        return Err(config_err("--input excludes --beta, --n and --n-range"));
                    }
                } else {
                    self.positive_beta()?;
                    self.need(&self.bases, "bases")?;
                    self.need_n()?;
                }
            }
            Command::Bounds => match self.need(&self.mode, "mode")? {
                BoundsMode::Prop1 | BoundsMode::Lemma1 => {
                    let bases = self.need(&self.bases, "bases")?;
                    self.need_n()?;
                    self.bound_alpha()?;
                    if let Some(j) = &self.j {
                        if self.mode == Some(BoundsMode::Prop1) {
                            return Err(config_err("--j applies to lemma1 only"));
                        }
                        if j.len() != bases.dim() {
                            return Err(config_err("--j needs one level per base"));
                        }
                    }
                }
                BoundsMode::Sl => {
                    self.need(&self.bases, "bases")?;
                    self.need(&self.l, "l")?;
                    if self.alpha.is_none() {
                        self.need(&self.beta, "beta")?;
                    }
                }
            },
            Command::Sweep => {
                self.positive_beta()?;
                self.need(&self.bases, "bases")?;
                let r = self.need(&self.n_range, "n-range")?;
                if r[0] < 2 {
                    return Err(config_err("sweep N values must be at least 2"));
                }
            }
            Command::Cf => {
                if self.alpha.is_none() {
                    self.need(&self.beta, "beta")?;
                }
            }
            Command::Ostrowski => {
                if self.alpha.is_none() {
                    self.need(&self.beta, "beta")?;
                }
                self.need(&self.n, "n")?;
                self.need_n()?;
            }
            Command::VerifyMerge => {
                self.positive_beta()?;
                self.need(&self.n, "n")?;
                self.need_n()?;
            }
        }
        Ok(())
    }
}
