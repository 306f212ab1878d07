//! Single-pair states and the scalar entropy helpers used by the rate formula.

use std::f64::consts::LN_2;

use crate::error::{check_range, Error, Result};

/// Binary entropy in bits, `-x log2 x - (1-x) log2 (1-x)` with `0 log 0 = 0`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    check_range("x", x, 0.0, 1.0, true, "[0, 1]")?;
    Ok(h2(x))
}

/// Unchecked binary entropy for internal callers that already validated `x`.
pub(crate) fn h2(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    -(x * x.ln() + (1.0 - x) * (-x).ln_1p()) / LN_2
}

/// Bit-flip probability after Alice's added noise: `p(1-q) + q(1-p)`.
pub fn effective_bit_error(p: f64, q: f64) -> f64 {
    p * (1.0 - q) + q * (1.0 - p)
}

/// Von Neumann entropy of `ρ_{p,q}` in bits.
pub fn entropy_rho_pq(state: &ProcessedQubitState) -> f64 {
    h2(state.lambda_minus())
}

/// Bell-diagonal single-pair state consistent with bit and phase error rate `p`.
///
/// Weights are `(1+t-2p, p-t, p-t, t)` on `(Φ⁺, Φ⁻, Ψ⁺, Ψ⁻)`. The rate formula is
/// evaluated at the worst case `t = p²`, where bit and phase errors are independent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellDiagonalState {
    p: f64,
    t: f64,
}

impl BellDiagonalState {
    pub fn new(p: f64, t: f64) -> Result<Self> {
        check_range("p", p, 0.0, 0.5, false, "[0, 1/2)")?;
        if !(0.0..=p).contains(&t) {
            return Err(Error::Domain {
                name: "t",
                value: t,
                range: "[0, p]",
            });
        }
        Ok(Self { p, t })
    }

    /// The independent-noise member of the family, which maximises Eve's information.
    pub fn worst_case(p: f64) -> Result<Self> {
        Self::new(p, p * p)
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// Weights on `[Φ⁺, Φ⁻, Ψ⁺, Ψ⁻]`.
    pub fn weights(&self) -> [f64; 4] {
        let (p, t) = (self.p, self.t);
        [1.0 + t - 2.0 * p, p - t, p - t, t]
    }

    /// Probability of bit error `x` and phase error `z` on one pair.
    ///
    /// `X` maps Φ⁺ to Ψ⁺ and `Z` maps Φ⁺ to Φ⁻, so `Ψ⁻` carries both.
    pub fn error_probability(&self, x: bool, z: bool) -> f64 {
        let w = self.weights();
        match (x, z) {
            (false, false) => w[0],
            (false, true) => w[1],
            (true, false) => w[2],
            (true, true) => w[3],
        }
    }

    pub fn bit_error_rate(&self) -> f64 {
        self.error_probability(true, false) + self.error_probability(true, true)
    }

    pub fn phase_error_rate(&self) -> f64 {
        self.error_probability(false, true) + self.error_probability(true, true)
    }
}

/// `ρ_{p,q} = (1-q)|φ₊⟩⟨φ₊| + q|φ₋⟩⟨φ₋|` with `|φ±⟩ = √(1-p)|0⟩ ± √p|1⟩`.
///
/// The state is real, with Bloch vector `(x, 0, z)`:
/// `x = 2(1-2q)√(p(1-p))`, `z = 1-2p`. Conjugating by `Z` sends `x` to `-x`,
/// which is the same as replacing `q` by `1-q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProcessedQubitState {
    p: f64,
    q: f64,
    bloch_x: f64,
    bloch_z: f64,
    r: f64,
    lambda_minus: f64,
}

impl ProcessedQubitState {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        check_range("p", p, 0.0, 1.0, true, "[0, 1]")?;
        check_range("q", q, 0.0, 1.0, true, "[0, 1]")?;
        let bloch_x = 2.0 * (1.0 - 2.0 * q) * (p * (1.0 - p)).sqrt();
        let bloch_z = 1.0 - 2.0 * p;
        let r = bloch_x.hypot(bloch_z).min(1.0);
        // 1 - r² = 16 p(1-p) q(1-q) exactly; avoids cancellation for nearly pure states.
        let lambda_minus = 8.0 * p * (1.0 - p) * q * (1.0 - q) / (1.0 + r);
        Ok(Self {
            p,
            q,
            bloch_x,
            bloch_z,
            r,
            lambda_minus,
        })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn bloch_x(&self) -> f64 {
        self.bloch_x
    }

    pub fn bloch_z(&self) -> f64 {
        self.bloch_z
    }

    /// Bloch vector length.
    pub fn r(&self) -> f64 {
        self.r
    }

    /// Polar angle of the Bloch vector measured from +z towards +x.
    pub fn theta(&self) -> f64 {
        self.bloch_x.atan2(self.bloch_z)
    }

    pub fn lambda_plus(&self) -> f64 {
        1.0 - self.lambda_minus
    }

    pub fn lambda_minus(&self) -> f64 {
        self.lambda_minus
    }

    /// The state after conjugation by `Z`.
    pub fn z_mirror(&self) -> Self {
        Self {
            q: 1.0 - self.q,
            bloch_x: -self.bloch_x,
            ..*self
        }
    }

    /// Density matrix in the computational basis.
    pub fn matrix(&self) -> [[f64; 2]; 2] {
        let (p, q) = (self.p, self.q);
        let off = (1.0 - 2.0 * q) * (p * (1.0 - p)).sqrt();
        [[1.0 - p, off], [off, p]]
    }
}

/// Block length, channel error rate and added-noise rate for one rate evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateParams {
    pub m: usize,
    pub p: f64,
    pub q: f64,
    /// `p(1-q) + q(1-p)`
    pub p_tilde: f64,
}

impl RateParams {
    pub fn new(m: usize, p: f64, q: f64) -> Result<Self> {
        if m == 0 {
            return Err(Error::ZeroBlockLength);
        }
        check_range("p", p, 0.0, 0.5, false, "[0, 1/2)")?;
        check_range("q", q, 0.0, 0.5, true, "[0, 1/2]")?;
        Ok(Self {
            m,
            p,
            q,
            p_tilde: effective_bit_error(p, q),
        })
    }

    pub fn state(&self) -> ProcessedQubitState {
        ProcessedQubitState::new(self.p, self.q).expect("rate params are in range")
    }
}
