use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use bb84_keyrate::dense::{
    compute_fixture, dense_mixture_entropy, dense_rate, format_fixture, MAX_DENSE_M, ORACLE_GRID,
};
use bb84_keyrate::schur::mixture_entropy_report;
use bb84_keyrate::{
    find_threshold, key_rate, optimize_q, sweep, upper_bound_rate, Error, ProcessedQubitState,
    RateParams, ThresholdOptions, ThresholdResult,
};
use clap::{Args, Parser, Subcommand};

use crate::output::{Cell, Format, Table};
use crate::ranges::{parse_block_lengths, parse_floats};

/// Largest deviation `verify` accepts between the fast path and the dense oracle.
pub const VERIFY_TOL: f64 = 1e-9;

const THRESHOLD_COLUMNS: [&str; 5] = ["m", "q", "p_threshold", "bracket_width", "evaluations"];

/// BB84 key rates with repetition-code syndrome announcement and noisy preprocessing.
///
/// Lists accept `a,b,c`, `a,b,...,z` (continue with the last step up to z) and
/// `start:stop:step` (start inclusive, stop exclusive).
#[derive(Debug, Parser)]
#[command(name = "bb84-keyrate", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Write results to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Worker threads (defaults to all cores).
    #[arg(long, global = true, env = "BB84_KEYRATE_THREADS")]
    pub threads: Option<usize>,

    /// Print per-irrep diagnostics to stderr.
    #[arg(short, long, global = true)]
    pub verbose: bool,
}

#[derive(Debug, Args, Clone, Copy)]
pub struct BracketArgs {
    #[arg(long, default_value_t = 0.05)]
    pub p_lo: f64,
    #[arg(long, default_value_t = 0.16)]
    pub p_hi: f64,
    #[arg(long, default_value_t = 1e-5)]
    pub tol: f64,
}

impl From<BracketArgs> for ThresholdOptions {
    fn from(b: BracketArgs) -> Self {
        ThresholdOptions {
            p_lo: b.p_lo,
            p_hi: b.p_hi,
            tol: b.tol,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Key rate and its three entropy terms at one point.
    Rate {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        q: f64,
    },
    /// Bit error rate where the key rate crosses zero.
    Threshold {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        q: f64,
        #[command(flatten)]
        bracket: BracketArgs,
    },
    /// Best threshold over a grid of added-noise rates.
    Optimize {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value = "0:0.5:0.01")]
        q: String,
        #[command(flatten)]
        bracket: BracketArgs,
    },
    /// Thresholds over every (m, q) pair.
    Sweep {
        #[arg(long)]
        m: String,
        #[arg(long, default_value = "0:0.5:0.01")]
        q: String,
        #[command(flatten)]
        bracket: BracketArgs,
    },
    /// Upper bound H(1/2 - 2p(1-p)) - H(2p(1-p)) over a range of p.
    Upperbound {
        #[arg(long, default_value = "0:0.16:0.002")]
        p: String,
    },
    /// Compare the fast evaluation against dense matrices for m = 1..=m-max.
    Verify {
        #[arg(long, default_value_t = 8)]
        m_max: usize,
        /// Rewrite the dense-oracle fixture file.
        #[arg(long)]
        regen_fixtures: bool,
        #[arg(long, default_value = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/fixtures/dense_oracle.txt"))]
        fixture: PathBuf,
    },
}

#[derive(Debug)]
pub struct AppError {
    pub code: u8,
    pub message: String,
}

impl AppError {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for AppError {
    fn from(e: Error) -> Self {
        let code = match &e {
            e if e.is_invalid_input() => 2,
            Error::Bracket { .. } | Error::Unresolved { .. } => 4,
            Error::Io(_) => 1,
            _ => 3,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        Self {
            code: 1,
            message: e.to_string(),
        }
    }
}

fn threshold_row(t: &ThresholdResult) -> Vec<Cell> {
    vec![
        t.m.into(),
        t.q.into(),
        t.p_threshold.into(),
        t.bracket_width.into(),
        t.evaluations.into(),
    ]
}

pub fn run(cli: Cli) -> Result<ExitCode, AppError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(AppError::usage("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| AppError::usage(e.to_string()))?;
    }

    let mut exit = ExitCode::SUCCESS;
    let table = match cli.command {
        Command::Rate { m, p, q } => {
            let params = RateParams::new(m, p, q)?;
            let r = key_rate(&params)?;
            if cli.verbose {
                print_blocks(m, &params.state())?;
            }
            let mut t = Table::new(&[
                "m",
                "p",
                "q",
                "p_tilde",
                "reconciliation",
                "single_copy_entropy",
                "mixture_entropy",
                "eve_information",
                "rate",
            ]);
            t.push(vec![
                m.into(),
                p.into(),
                q.into(),
                params.p_tilde.into(),
                r.reconciliation.into(),
                r.single_copy_entropy.into(),
                r.mixture_entropy.into(),
                r.eve_information.into(),
                r.reported_rate().into(),
            ]);
            t
        }
        Command::Threshold { m, q, bracket } => {
            let res = find_threshold(m, q, &bracket.into())?;
            let mut t = Table::new(&THRESHOLD_COLUMNS);
            t.push(threshold_row(&res));
            t
        }
        Command::Optimize { m, q, bracket } => {
            let grid = parse_floats(&q).map_err(AppError::usage)?;
            let best = optimize_q(m, &grid, &bracket.into())?;
            let mut t = Table::new(&THRESHOLD_COLUMNS);
            t.push(threshold_row(&best.threshold));
            t
        }
        Command::Sweep { m, q, bracket } => {
            let ms = parse_block_lengths(&m).map_err(AppError::usage)?;
            let qs = parse_floats(&q).map_err(AppError::usage)?;
            let mut t = Table::new(&THRESHOLD_COLUMNS);
            for row in sweep(&ms, &qs, &bracket.into()) {
                match row.outcome {
                    Ok(res) => t.push(threshold_row(&res)),
                    Err(e) => {
                        if e.is_invalid_input() {
                            return Err(e.into());
                        }
                        eprintln!("warning: m = {}, q = {}: {e}", row.m, row.q);
                        t.push(vec![
                            row.m.into(),
                            row.q.into(),
                            Cell::Missing,
                            Cell::Missing,
                            Cell::Missing,
                        ]);
                    }
                }
            }
            t
        }
        Command::Upperbound { p } => {
            let ps = parse_floats(&p).map_err(AppError::usage)?;
            let mut t = Table::new(&["p", "upper_bound"]);
            for p in ps {
                t.push(vec![p.into(), upper_bound_rate(p)?.into()]);
            }
            t
        }
        Command::Verify {
            m_max,
            regen_fixtures,
            fixture,
        } => {
            if m_max == 0 || m_max > MAX_DENSE_M {
                return Err(AppError::usage(format!(
                    "--m-max must be in 1..={MAX_DENSE_M}, got {m_max}"
                )));
            }
            let (t, max_dev) = verify(m_max)?;
            if max_dev <= VERIFY_TOL {
                eprintln!("max deviation {max_dev:.3e} <= {VERIFY_TOL:e}");
            } else {
                eprintln!("max deviation {max_dev:.3e} exceeds {VERIFY_TOL:e}");
                exit = ExitCode::from(5);
            }
            if regen_fixtures {
                let records = compute_fixture(m_max)?;
                fs::write(&fixture, format_fixture(&records))?;
                eprintln!("wrote {} records to {}", records.len(), fixture.display());
            }
            t
        }
    };

    let text = table.render(cli.format);
    match &cli.out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(exit)
}

fn verify(m_max: usize) -> Result<(Table, f64), AppError> {
    let mut t = Table::new(&[
        "m",
        "p",
        "q",
        "dense_entropy",
        "schur_entropy",
        "dense_rate",
        "schur_rate",
        "deviation",
    ]);
    let mut max_dev = 0.0f64;
    for m in 1..=m_max {
        for &(p, q) in &ORACLE_GRID {
            let state = ProcessedQubitState::new(p, q)?;
            let de = dense_mixture_entropy(m, &state)?;
            let dr = dense_rate(m, p, q)?;
            let fast = key_rate(&RateParams::new(m, p, q)?)?;
            let dev = (de - fast.mixture_entropy)
                .abs()
                .max((dr - fast.rate).abs());
            max_dev = max_dev.max(dev);
            t.push(vec![
                m.into(),
                p.into(),
                q.into(),
                de.into(),
                fast.mixture_entropy.into(),
                dr.into(),
                fast.rate.into(),
                dev.into(),
            ]);
        }
    }
    Ok((t, max_dev))
}

fn print_blocks(m: usize, state: &ProcessedQubitState) -> Result<(), AppError> {
    let rep = mixture_entropy_report(m, state)?;
    eprintln!(
        "m = {m}: {} irreps, {} evaluated, total trace {:.3e} off one, skipped bound {:.3e} bits",
        rep.blocks.len(),
        rep.blocks.iter().filter(|b| !b.skipped).count(),
        rep.total_trace - 1.0,
        rep.skipped_bound,
    );
    eprintln!("{:>6} {:>14} {:>14} {:>14}", "2j", "ln g", "mass", "bits");
    for b in rep.blocks.iter().filter(|b| !b.skipped) {
        eprintln!(
            "{:>6} {:>14.6} {:>14.6e} {:>14.6e}",
            b.two_j, b.log_multiplicity, b.mass, b.contribution
        );
    }
    Ok(())
}
