//! Secret-key rates for BB84 with one-way post-processing, where Alice adds
//! independent bit-flip noise and then announces the syndrome of an `m`-bit
//! repetition code before ordinary error correction and privacy amplification.
//!
//! The rate per channel use is
//!
//! ```text
//! r = (1/m) * [ I(A;BB') - I(A;E) ]
//! I(A;BB') = 1 - sum_s P(s) H(P(u|s))
//! I(A;E)   = S(½ρ^⊗m + ½ Z^⊗m ρ^⊗m Z^⊗m) - m S(ρ)
//! ```
//!
//! with `ρ = ρ_{p,q}` the single-qubit state Eve is left correlated with.
//! The reconciliation term is evaluated exactly in the log domain after
//! collapsing syndromes by weight ([`repcode`]). Eve's term is evaluated by
//! block-diagonalising the permutation-invariant mixture into SU(2) irreps
//! ([`schur`]), which keeps block lengths of several hundred tractable.
//! [`dense`] holds a brute-force oracle for small blocks.
//!
//! ```
//! use bb84_keyrate::{key_rate, RateParams};
//!
//! let r = key_rate(&RateParams::new(1, 0.05, 0.0).unwrap()).unwrap();
//! assert!((r.rate - 0.4272).abs() < 1e-4);
//! ```

pub mod dense;
pub mod error;
pub mod keyrate;
mod logspace;
pub mod model;
pub mod repcode;
pub mod schur;

pub use error::{Error, Result};
pub use keyrate::{
    find_threshold, key_rate, optimize_q, sweep, upper_bound_rate, QOptimum, RateResult, SweepRow,
    ThresholdOptions, ThresholdResult,
};
pub use model::{
    binary_entropy, effective_bit_error, entropy_rho_pq, BellDiagonalState, ProcessedQubitState,
    RateParams,
};
pub use repcode::{reconciliation_term, syndrome_joint_log, SyndromeStats};
pub use schur::{irrep_multiplicity, mixture_entropy, product_block_eigenvalues};
