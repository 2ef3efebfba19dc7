//! Command-line front end for `halton-subseq`: flag and config-file
//! handling, the CSV and SVG formats, and the command implementations.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod svg;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use clap::Parser;

use crate::commands::{run, Report};
use crate::config::{parse_pairs, BoundsMode, Command, Format, RunConfig};
use crate::error::CliError;

/// Subsequences of Halton sequences indexed by floor(n beta), with exact
/// discrepancy and bound checks.
#[derive(Debug, Parser)]
#[command(name = "halton-subseq", version)]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// `key = value` file; flags override its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// `p/q`, `(a+b*sqrt(d))/c`, `sqrt(d)`, `pi`, `e` or `<decimal>~digits=D`.
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    /// Pairwise coprime bases, comma separated.
    #[arg(long)]
    pub bases: Option<String>,
    /// Point count; accepts `2^k`.
    #[arg(long)]
    pub n: Option<String>,
    /// `2^a..2^b` or a comma list of N values.
    #[arg(long)]
    pub n_range: Option<String>,
    /// Output file, or directory for `figure1`; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Exact rationals instead of decimal floats.
    #[arg(long)]
    pub exact: bool,
    /// Integer or `<m>e<k>`.
    #[arg(long)]
    pub work_budget: Option<String>,
    /// Precision cap in decimal digits.
    #[arg(long, env = "HALTON_SUBSEQ_MAX_DIGITS")]
    pub max_digits: Option<u32>,
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long, value_enum)]
    pub mode: Option<BoundsMode>,
    /// Level for `bounds --mode sl`.
    #[arg(long)]
    pub l: Option<u32>,
    /// Level tuple for `bounds --mode lemma1`, comma separated.
    #[arg(long)]
    pub j: Option<String>,
    /// Number of partial quotients for `cf`.
    #[arg(long)]
    pub k: Option<usize>,
    /// Point set CSV with columns `x1..xs` for `discrepancy`.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

fn name<T: clap::ValueEnum>(v: T) -> String {
    v.to_possible_value()
        .expect("no skipped variants")
        .get_name()
        .to_string()
}

impl Cli {
    /// Config-file pairs overlaid with the flags that were given.
    pub fn pairs(&self) -> Result<BTreeMap<String, String>, CliError> {
        let mut pairs = match &self.config {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
                parse_pairs(&text)?
            }
            None => BTreeMap::new(),
        };
        let mut set = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                pairs.insert(k.to_string(), v);
            }
        };
        let path = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string());
        set("command", Some(name(self.command)));
        set("beta", self.beta.clone());
        set("alpha", self.alpha.clone());
        set("bases", self.bases.clone());
        set("n", self.n.clone());
        set("n-range", self.n_range.clone());
        set("out", path(&self.out));
        set("format", self.format.map(name));
        set("exact", self.exact.then(|| "true".to_string()));
        set("work-budget", self.work_budget.clone());
        set("max-digits", self.max_digits.map(|d| d.to_string()));
        set("threads", self.threads.map(|t| t.to_string()));
        set("mode", self.mode.map(name));
        set("l", self.l.map(|l| l.to_string()));
        set("j", self.j.clone());
        set("k", self.k.map(|k| k.to_string()));
        set("input", path(&self.input));
        Ok(pairs)
    }

    pub fn run_config(&self) -> Result<RunConfig, CliError> {
        RunConfig::from_pairs(&self.pairs()?)
    }
}

fn write_outputs(report: &Report) -> Result<(), CliError> {
    for out in &report.outputs {
        match &out.path {
            Some(p) => {
                if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                    std::fs::create_dir_all(dir)?;
                }
                std::fs::write(p, &out.bytes)?;
            }
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(&out.bytes)?;
                stdout.flush()?;
            }
        }
    }
    Ok(())
}

/// Runs the command and returns the process exit code.
pub fn execute(cli: &Cli) -> u8 {
    let result = cli.run_config().and_then(|cfg| {
        let report = run(&cfg)?;
        write_outputs(&report)?;
        match report.failure {
            Some(msg) => Err(CliError::Failed(msg)),
            None => Ok(()),
        }
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("halton-subseq: {e}");
            e.exit_code()
        }
    }
}
