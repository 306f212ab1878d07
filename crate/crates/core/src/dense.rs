//! Brute-force reference values for small block lengths.
//!
//! Everything here is built from explicit `2^m × 2^m` matrices and explicit
//! enumeration of error strings, with no use of the weight collapse or the irrep
//! decomposition. The fast paths are checked against it.

use std::fmt::Write as _;

use nalgebra::{DMatrix, Matrix2};

pub use crate::repcode::syndrome_enumeration_oracle;

use crate::error::{Error, Result};
use crate::model::{ProcessedQubitState, RateParams};

/// Largest `m` accepted by the dense routines (4096 × 4096 matrices).
pub const MAX_DENSE_M: usize = 12;

/// `(p, q)` pairs covered by the oracle comparison suite.
pub const ORACLE_GRID: [(f64, f64); 12] = [
    (0.05, 0.0),
    (0.05, 0.2),
    (0.05, 0.32),
    (0.05, 0.5),
    (0.12, 0.0),
    (0.12, 0.2),
    (0.12, 0.32),
    (0.12, 0.5),
    (0.25, 0.0),
    (0.25, 0.2),
    (0.25, 0.32),
    (0.25, 0.5),
];

fn guard(m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::ZeroBlockLength);
    }
    if m > MAX_DENSE_M {
        return Err(Error::SizeGuard {
            what: "dense oracle",
            m,
            max: MAX_DENSE_M,
        });
    }
    Ok(())
}

fn entropy_bits(eigenvalues: impl IntoIterator<Item = f64>) -> f64 {
    eigenvalues
        .into_iter()
        .filter(|&v| v > 0.0)
        .map(|v| -v * v.log2())
        .sum()
}

/// A real symmetric density matrix on `m` qubits.
#[derive(Debug, Clone)]
pub struct DenseState {
    pub m: usize,
    pub matrix: DMatrix<f64>,
}

impl DenseState {
    /// `ρ^⊗m` by repeated Kronecker products.
    pub fn product(m: usize, state: &ProcessedQubitState) -> Result<Self> {
        guard(m)?;
        let a = state.matrix();
        let single = DMatrix::from_row_slice(2, 2, &[a[0][0], a[0][1], a[1][0], a[1][1]]);
        let mut matrix = single.clone();
        for _ in 1..m {
            matrix = matrix.kronecker(&single);
        }
        Ok(Self { m, matrix })
    }

    /// `½ρ^⊗m + ½ Z^⊗m ρ^⊗m Z^⊗m`.
    pub fn mirrored_mixture(m: usize, state: &ProcessedQubitState) -> Result<Self> {
        let product = Self::product(m, state)?;
        let n = product.matrix.nrows();
        let sign = |i: usize| if i.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        let matrix = DMatrix::from_fn(n, n, |i, j| {
            let v = product.matrix[(i, j)];
            0.5 * (v + sign(i) * sign(j) * v)
        });
        Ok(Self { m, matrix })
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace()
    }

    pub fn asymmetry(&self) -> f64 {
        (&self.matrix - self.matrix.transpose()).amax()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.matrix
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect()
    }

    /// Von Neumann entropy in bits.
    pub fn entropy(&self) -> f64 {
        entropy_bits(self.eigenvalues())
    }
}

/// Mixture entropy from the explicit matrix.
pub fn dense_mixture_entropy(m: usize, state: &ProcessedQubitState) -> Result<f64> {
    Ok(DenseState::mirrored_mixture(m, state)?.entropy())
}

/// The full rate assembled from dense and enumerated pieces only.
pub fn dense_rate(m: usize, p: f64, q: f64) -> Result<f64> {
    guard(m)?;
    let params = RateParams::new(m, p, q)?;
    let state = params.state();
    let reconciliation = syndrome_enumeration_oracle(m, params.p_tilde)?.reconciliation();
    let a = state.matrix();
    let single = entropy_bits(
        Matrix2::new(a[0][0], a[0][1], a[1][0], a[1][1])
            .symmetric_eigenvalues()
            .iter()
            .copied(),
    );
    let mixture = dense_mixture_entropy(m, &state)?;
    Ok((reconciliation + m as f64 * single - mixture) / m as f64)
}

/// One oracle evaluation as stored in the fixture file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixtureRecord {
    pub m: usize,
    pub p: f64,
    pub q: f64,
    pub entropy: f64,
    pub rate: f64,
}

pub const FIXTURE_VERSION: u32 = 1;

/// Evaluate the oracle for `m = 1..=m_max` over [`ORACLE_GRID`].
pub fn compute_fixture(m_max: usize) -> Result<Vec<FixtureRecord>> {
    guard(m_max)?;
    let mut out = Vec::new();
    for m in 1..=m_max {
        for &(p, q) in &ORACLE_GRID {
            let state = ProcessedQubitState::new(p, q)?;
            out.push(FixtureRecord {
                m,
                p,
                q,
                entropy: dense_mixture_entropy(m, &state)?,
                rate: dense_rate(m, p, q)?,
            });
        }
    }
    Ok(out)
}

/// Plain-text records `m p q entropy rate`, floats with 17 significant digits.
pub fn format_fixture(records: &[FixtureRecord]) -> String {
    let mut s =
        format!("# bb84-keyrate dense oracle fixture v{FIXTURE_VERSION}\n# m p q entropy rate\n");
    for r in records {
        writeln!(
            s,
            "{} {:.16e} {:.16e} {:.16e} {:.16e}",
            r.m, r.p, r.q, r.entropy, r.rate
        )
        .unwrap();
    }
    s
}

pub fn parse_fixture(text: &str) -> Result<Vec<FixtureRecord>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |detail: String| Error::Fixture {
            line: i + 1,
            detail,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 5 {
            return Err(bad(format!("expected 5 fields, found {}", fields.len())));
        }
        let float = |s: &str| s.parse::<f64>().map_err(|e| bad(format!("{s:?}: {e}")));
        out.push(FixtureRecord {
            m: fields[0]
                .parse()
                .map_err(|e| bad(format!("{:?}: {e}", fields[0])))?,
            p: float(fields[1])?,
            q: float(fields[2])?,
            entropy: float(fields[3])?,
            rate: float(fields[4])?,
        });
    }
    Ok(out)
}
