//! Key-rate assembly, the known upper bound, and threshold searches.

use rayon::prelude::*;

use crate::error::{check_range, Error, Result};
use crate::model::{effective_bit_error, entropy_rho_pq, h2, RateParams};
use crate::repcode::reconciliation_term;
use crate::schur::mixture_entropy;

/// Rates smaller than this in magnitude are printed as zero.
pub const REPORT_ZERO: f64 = 1e-14;

/// Smallest `1 - I(A;BB')` at a threshold that is accepted as resolved. At a
/// root the two information deficits are equal, and the Schur evaluation of
/// `I(A;E)` is accurate to roughly `1e-12` absolute.
pub const MIN_RESOLVED_DEFICIT: f64 = 1e-10;

/// One evaluation of the rate and its ingredients, all in bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateResult {
    pub params: RateParams,
    /// `I(A;BB')` for one `m`-block.
    pub reconciliation: f64,
    /// `S(ρ_{p,q})`
    pub single_copy_entropy: f64,
    /// `S(½ρ^⊗m + ½ Z^⊗m ρ^⊗m Z^⊗m)`
    pub mixture_entropy: f64,
    /// `I(A;E)` = mixture entropy − `m S(ρ_{p,q})`.
    pub eve_information: f64,
    /// `(reconciliation − eve_information) / m`, unclamped.
    pub rate: f64,
}

impl RateResult {
    pub fn reported_rate(&self) -> f64 {
        if self.rate.abs() < REPORT_ZERO {
            0.0
        } else {
            self.rate
        }
    }
}

pub fn key_rate(params: &RateParams) -> Result<RateResult> {
    let m = params.m;
    let state = params.state();
    let reconciliation = reconciliation_term(m, params.p_tilde)?;
    let single_copy_entropy = entropy_rho_pq(&state);
    let mixture = mixture_entropy(m, &state)?;
    let eve_information = mixture - m as f64 * single_copy_entropy;
    Ok(RateResult {
        params: *params,
        reconciliation,
        single_copy_entropy,
        mixture_entropy: mixture,
        eve_information,
        rate: (reconciliation - eve_information) / m as f64,
    })
}

fn rate_at(m: usize, p: f64, q: f64) -> Result<f64> {
    Ok(key_rate(&RateParams::new(m, p, q)?)?.rate)
}

/// `H(1/2 - 2p(1-p)) - H(2p(1-p))`, the best known upper bound on the BB84 rate.
pub fn upper_bound_rate(p: f64) -> Result<f64> {
    check_range("p", p, 0.0, 0.5, true, "[0, 1/2]")?;
    let x = 2.0 * p * (1.0 - p);
    Ok(h2(0.5 - x) - h2(x))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdOptions {
    pub p_lo: f64,
    pub p_hi: f64,
    pub tol: f64,
}

impl Default for ThresholdOptions {
    fn default() -> Self {
        Self {
            p_lo: 0.05,
            p_hi: 0.16,
            tol: 1e-5,
        }
    }
}

/// Bit error rate at which the key rate changes sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdResult {
    pub m: usize,
    pub q: f64,
    /// Midpoint of the final bracket.
    pub p_threshold: f64,
    pub bracket_width: f64,
    pub evaluations: usize,
}

/// Bisection on the sign of the key rate; positive on the left end, nonpositive
/// on the right.
///
/// Fails with [`Error::Unresolved`] when the root lies where both information
/// terms round to one bit (large `m` with little added noise).
pub fn find_threshold(m: usize, q: f64, opts: &ThresholdOptions) -> Result<ThresholdResult> {
    let ThresholdOptions { p_lo, p_hi, tol } = *opts;
    if !(p_lo < p_hi) {
        return Err(Error::Domain {
            name: "p_lo",
            value: p_lo,
            range: "below p_hi",
        });
    }
    if !(tol > 0.0) {
        return Err(Error::Domain {
            name: "tol",
            value: tol,
            range: "(0, inf)",
        });
    }
    let rate_lo = rate_at(m, p_lo, q)?;
    let rate_hi = rate_at(m, p_hi, q)?;
    let mut evaluations = 2;
    if !(rate_lo > 0.0 && rate_hi <= 0.0) {
        return Err(Error::Bracket {
            m,
            q,
            p_lo,
            p_hi,
            rate_lo,
            rate_hi,
        });
    }
    let (mut lo, mut hi) = (p_lo, p_hi);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        evaluations += 1;
        if rate_at(m, mid, q)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let p_threshold = 0.5 * (lo + hi);
    let deficit = 1.0 - reconciliation_term(m, effective_bit_error(p_threshold, q))?;
    if !(deficit >= MIN_RESOLVED_DEFICIT) {
        return Err(Error::Unresolved {
            m,
            q,
            p: p_threshold,
            deficit,
            floor: MIN_RESOLVED_DEFICIT,
        });
    }
    Ok(ThresholdResult {
        m,
        q,
        p_threshold,
        bracket_width: hi - lo,
        evaluations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QOptimum {
    pub q: f64,
    pub threshold: ThresholdResult,
}

/// Grid point with the largest threshold; ties go to the smaller `q`.
///
/// Grid points with no sign change inside the bracket, or with a root below
/// numerical resolution, are passed over; any other failure is returned.
pub fn optimize_q(m: usize, q_grid: &[f64], opts: &ThresholdOptions) -> Result<QOptimum> {
    if q_grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let results: Vec<Result<ThresholdResult>> = q_grid
        .par_iter()
        .map(|&q| find_threshold(m, q, opts))
        .collect();
    let mut best: Option<QOptimum> = None;
    let mut first_skipped = None;
    for res in results {
        let t = match res {
            Ok(t) => t,
            Err(e @ (Error::Bracket { .. } | Error::Unresolved { .. })) => {
                first_skipped.get_or_insert(e);
                continue;
            }
            Err(e) => return Err(e),
        };
        let better = match &best {
            None => true,
            Some(b) => {
                t.p_threshold > b.threshold.p_threshold
                    || (t.p_threshold == b.threshold.p_threshold && t.q < b.q)
            }
        };
        if better {
            best = Some(QOptimum {
                q: t.q,
                threshold: t,
            });
        }
    }
    best.ok_or_else(|| first_skipped.expect("non-empty grid with no result"))
}

#[derive(Debug)]
pub struct SweepRow {
    pub m: usize,
    pub q: f64,
    pub outcome: Result<ThresholdResult>,
}

/// Thresholds over the Cartesian product of `m_list` and `q_grid`, rows sorted by
/// `(m, q)`. A failing row keeps its error and does not stop the sweep.
pub fn sweep(m_list: &[usize], q_grid: &[f64], opts: &ThresholdOptions) -> Vec<SweepRow> {
    let mut cells: Vec<(usize, f64)> = m_list
        .iter()
        .flat_map(|&m| q_grid.iter().map(move |&q| (m, q)))
        .collect();
    cells.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
    cells
        .into_par_iter()
        .map(|(m, q)| SweepRow {
            m,
            q,
            outcome: find_threshold(m, q, opts),
        })
        .collect()
}

/// `start, start+step, …` strictly below `stop` (with a small tolerance so a
/// stop that lands on the grid is excluded).
pub fn grid(start: f64, stop: f64, step: f64) -> Vec<f64> {
    if !(step > 0.0) || !(stop > start) {
        return Vec::new();
    }
    let n = ((stop - start) / step - 1e-9).ceil().max(0.0) as usize;
    (0..n).map(|i| start + i as f64 * step).collect()
}
