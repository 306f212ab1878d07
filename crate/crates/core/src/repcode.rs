//! Logical-error / syndrome statistics of the `m`-bit repetition code.
//!
//! With stabilisers `Z₁Z₂, …, Z₁Z_m`, an i.i.d. bit-error pattern `x` with flip
//! probability `pe` produces the logical bit `u = x₁` and syndrome
//! `s_j = x₁ ⊕ x_{j+1}`. One specific `(u, s)` with `|s| = w` has probability
//!
//! ```text
//! u = 1:  pe^(m-w) (1-pe)^w
//! u = 0:  pe^w (1-pe)^(m-w)
//! ```
//!
//! and there are `C(m-1, w)` syndrome strings of weight `w`, so everything is
//! collapsed onto `m` weight classes and kept in the log domain.

use std::collections::BTreeMap;
use std::f64::consts::LN_2;

use crate::error::{check_range, Error, Result};
use crate::logspace::{ln_binomial, logaddexp, logsumexp, mul_ln};

/// Largest block length [`syndrome_enumeration_oracle`] will enumerate.
pub const MAX_ENUMERATION_M: usize = 16;

fn joint_log_unchecked(m: usize, ln_pe: f64, ln_qe: f64, u: bool, w: usize) -> f64 {
    let (flips, keeps) = if u { (m - w, w) } else { (w, m - w) };
    mul_ln(flips as f64, ln_pe) + mul_ln(keeps as f64, ln_qe)
}

fn check_pe(pe: f64) -> Result<()> {
    check_range("pe", pe, 0.0, 1.0, true, "[0, 1]")
}

/// Log-probability of logical error `u` together with one particular syndrome
/// string of weight `w`.
pub fn syndrome_joint_log(m: usize, pe: f64, u: bool, w: usize) -> Result<f64> {
    if m == 0 {
        return Err(Error::ZeroBlockLength);
    }
    if w >= m {
        return Err(Error::SyndromeWeight { m, weight: w });
    }
    check_pe(pe)?;
    Ok(joint_log_unchecked(m, pe.ln(), (-pe).ln_1p(), u, w))
}

/// `I(A;BB')` per key bit: `1 - Σ_s P(s) H(P(u|s))`.
pub fn reconciliation_term(m: usize, pe: f64) -> Result<f64> {
    Ok(SyndromeStats::new(m, pe)?.reconciliation())
}

/// Weight-collapsed table of `ln P(u, s)` for one `(m, pe)`.
#[derive(Debug, Clone)]
pub struct SyndromeStats {
    m: usize,
    pe: f64,
    /// `log_joint[u][w]`, probability of a single string of weight `w`.
    log_joint: [Vec<f64>; 2],
    /// `ln C(m-1, w)`
    log_multiplicity: Vec<f64>,
}

impl SyndromeStats {
    pub fn new(m: usize, pe: f64) -> Result<Self> {
        if m == 0 {
            return Err(Error::ZeroBlockLength);
        }
        check_pe(pe)?;
        let (ln_pe, ln_qe) = (pe.ln(), (-pe).ln_1p());
        let row = |u| {
            (0..m)
                .map(|w| joint_log_unchecked(m, ln_pe, ln_qe, u, w))
                .collect::<Vec<_>>()
        };
        Ok(Self {
            m,
            pe,
            log_joint: [row(false), row(true)],
            log_multiplicity: (0..m).map(|w| ln_binomial(m - 1, w)).collect(),
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn pe(&self) -> f64 {
        self.pe
    }

    pub fn log_joint(&self, u: bool, w: usize) -> f64 {
        self.log_joint[u as usize][w]
    }

    pub fn log_multiplicity(&self, w: usize) -> f64 {
        self.log_multiplicity[w]
    }

    /// `ln P(s)` for one syndrome string of weight `w`.
    pub fn log_syndrome(&self, w: usize) -> f64 {
        logaddexp(self.log_joint[0][w], self.log_joint[1][w])
    }

    /// Log of the total probability over all `(u, s)`; zero up to rounding.
    pub fn log_total(&self) -> f64 {
        let terms: Vec<f64> = (0..self.m)
            .flat_map(|w| {
                let lm = self.log_multiplicity[w];
                [self.log_joint[0][w] + lm, self.log_joint[1][w] + lm]
            })
            .collect();
        logsumexp(&terms)
    }

    /// `H(P(u | s))` in bits for a syndrome of weight `w`.
    pub fn posterior_entropy(&self, w: usize) -> f64 {
        let norm = self.log_syndrome(w);
        if norm == f64::NEG_INFINITY {
            return 0.0;
        }
        let nats: f64 = self
            .log_joint
            .iter()
            .map(|row| {
                let lp = row[w] - norm;
                if lp == f64::NEG_INFINITY {
                    0.0
                } else {
                    -lp.exp() * lp
                }
            })
            .sum();
        nats / LN_2
    }

    /// `1 - Σ_w C(m-1,w) P(w) H(P(u|w))`, summed in increasing `w`.
    pub fn reconciliation(&self) -> f64 {
        let mut conditional = 0.0;
        for w in 0..self.m {
            let log_class = self.log_multiplicity[w] + self.log_syndrome(w);
            if log_class == f64::NEG_INFINITY {
                continue;
            }
            conditional += log_class.exp() * self.posterior_entropy(w);
        }
        1.0 - conditional
    }
}

/// Exhaustive `(u, s)` distribution of the repetition code, built by walking all
/// `2^m` error strings. Syndromes are packed with `s_j` in bit `j-1`.
#[derive(Debug, Clone)]
pub struct EnumeratedSyndromes {
    pub m: usize,
    pub pe: f64,
    pub probabilities: BTreeMap<(bool, u32), f64>,
}

impl EnumeratedSyndromes {
    pub fn probability(&self, u: bool, syndrome: u32) -> f64 {
        self.probabilities
            .get(&(u, syndrome))
            .copied()
            .unwrap_or(0.0)
    }

    /// Summed probability of all strings with logical bit `u` and syndrome weight `w`.
    pub fn class_probability(&self, u: bool, w: usize) -> f64 {
        self.probabilities
            .iter()
            .filter(|((uu, s), _)| *uu == u && s.count_ones() as usize == w)
            .map(|(_, p)| p)
            .sum()
    }

    /// `1 - Σ_s P(s) H(P(u|s))` over explicit syndrome strings.
    pub fn reconciliation(&self) -> f64 {
        let n_syndromes = 1u32 << (self.m - 1);
        let mut conditional = 0.0;
        for s in 0..n_syndromes {
            let p0 = self.probability(false, s);
            let p1 = self.probability(true, s);
            let ps = p0 + p1;
            if ps > 0.0 {
                conditional += ps * crate::model::h2(p1 / ps);
            }
        }
        1.0 - conditional
    }
}

/// Brute-force reference for the weight-collapsed statistics.
pub fn syndrome_enumeration_oracle(m: usize, pe: f64) -> Result<EnumeratedSyndromes> {
    if m == 0 {
        return Err(Error::ZeroBlockLength);
    }
    if m > MAX_ENUMERATION_M {
        return Err(Error::SizeGuard {
            what: "syndrome enumeration",
            m,
            max: MAX_ENUMERATION_M,
        });
    }
    check_pe(pe)?;
    let mut probabilities = BTreeMap::new();
    for pattern in 0u32..(1 << m) {
        let bit = |i: usize| (pattern >> i) & 1 == 1;
        let prob: f64 = (0..m).map(|i| if bit(i) { pe } else { 1.0 - pe }).product();
        let u = bit(0);
        let syndrome = (1..m).fold(0u32, |acc, j| acc | (((u ^ bit(j)) as u32) << (j - 1)));
        *probabilities.entry((u, syndrome)).or_insert(0.0) += prob;
    }
    Ok(EnumeratedSyndromes {
        m,
        pe,
        probabilities,
    })
}
