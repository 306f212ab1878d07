use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A scalar parameter fell outside its admissible interval.
    #[error("{name} = {value} is outside {range}")]
    Domain {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("block length m must be at least 1")]
    ZeroBlockLength,

    #[error("syndrome weight {weight} out of range for m = {m} (expected 0..={max})", max = .m - 1)]
    SyndromeWeight { m: usize, weight: usize },

    #[error("2j = {two_j} is not a valid irrep label for m = {m}")]
    IrrepLabel { m: usize, two_j: usize },

    #[error("{what} limited to m <= {max}, got m = {m}")]
    SizeGuard {
        what: &'static str,
        m: usize,
        max: usize,
    },

    /// Spectral failure inside one irrep block of the Schur evaluation.
    #[error("eigen-decomposition diagnostic at m = {m}, 2j = {two_j}: {detail}")]
    Eigen {
        m: usize,
        two_j: usize,
        detail: String,
    },

    #[error("normalisation check failed for m = {m}: total trace {trace} deviates from 1")]
    Normalisation { m: usize, trace: f64 },

    #[error(
        "no sign change of the key rate for m = {m}, q = {q} on [{p_lo}, {p_hi}] \
         (rate {rate_lo:.3e} at p_lo, {rate_hi:.3e} at p_hi)"
    )]
    Bracket {
        m: usize,
        q: f64,
        p_lo: f64,
        p_hi: f64,
        rate_lo: f64,
        rate_hi: f64,
    },

    /// Both information terms are within rounding of one bit near the root, so
    /// the sign of the rate there carries no information.
    #[error(
        "threshold for m = {m}, q = {q} is not numerically resolved: reconciliation \
         deficit {deficit:.3e} at p = {p} is below {floor:e}"
    )]
    Unresolved {
        m: usize,
        q: f64,
        p: f64,
        deficit: f64,
        floor: f64,
    },

    #[error("empty grid")]
    EmptyGrid,

    #[error("fixture line {line}: {detail}")]
    Fixture { line: usize, detail: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by invalid caller input rather than numerics.
    pub fn is_invalid_input(&self) -> bool {
        matches!(
            self,
            Error::Domain { .. }
                | Error::ZeroBlockLength
                | Error::SyndromeWeight { .. }
                | Error::IrrepLabel { .. }
                | Error::SizeGuard { .. }
                | Error::EmptyGrid
        )
    }
}

pub(crate) fn check_range(
    name: &'static str,
    value: f64,
    lo: f64,
    hi: f64,
    hi_inclusive: bool,
    range: &'static str,
) -> Result<()> {
    let ok = value >= lo
        && if hi_inclusive {
            value <= hi
        } else {
            value < hi
        };
    if ok {
        Ok(())
    } else {
        Err(Error::Domain { name, value, range })
    }
}
