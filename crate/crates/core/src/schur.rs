//! Entropy of `½ρ^⊗m + ½ Z^⊗m ρ^⊗m Z^⊗m` through the SU(2) irrep decomposition.
//!
//! Under Schur–Weyl duality `(C²)^⊗m = ⊕_j V_j ⊗ M_j`, where `V_j` is the spin-`j`
//! irrep (dimension `2j+1`) and `M_j` the permutation multiplicity space of
//! dimension `g(j, m)`. Both `ρ^⊗m` and its `Z`-mirror act as `A_j ⊗ 1` on each
//! sector, so the entropy is a sum over `j` of `g(j,m)` copies of the spectrum of
//! one `(2j+1)`-dimensional block.
//!
//! Writing `ρ = R(θ) diag(λ₊, λ₋) R(θ)ᵀ`, the block of `ρ^⊗m` is
//! `R_j(θ) D_j R_j(θ)ᵀ` with `D_j = diag(λ₊^{m/2+k} λ₋^{m/2-k})` and `R_j` the spin-`j`
//! representation of a `y` rotation (a real Wigner small-d matrix). The mirror
//! uses `-θ`. Since `d_j(-θ) = P d_j(θ) P` with `P = diag((-1)^(j-k))`, the mixed
//! block is `M` with its odd-offset entries removed, which splits into two
//! independent halves.
//!
//! All labels are carried as integers `two_j = 2j`; half-integer spins never
//! appear as floats.

use std::collections::HashMap;
use std::f64::consts::LN_2;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::logspace::{ln_binomial, mul_ln};
use crate::model::ProcessedQubitState;

/// Blocks whose entropy contribution is provably below this many bits are skipped.
pub const SKIP_BOUND_BITS: f64 = 1e-18;

/// Negative eigenvalues of a scaled block down to this value are clipped to zero.
pub const EIGEN_CLIP_TOL: f64 = 1e-12;

/// Allowed deviation of the summed block traces from one.
pub const TRACE_TOL: f64 = 1e-9;

fn check_label(m: usize, two_j: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::ZeroBlockLength);
    }
    if two_j > m || (m - two_j) % 2 != 0 {
        return Err(Error::IrrepLabel { m, two_j });
    }
    Ok(())
}

/// Irrep labels `2j` occurring in `m` qubits, in descending order.
pub fn irrep_labels(m: usize) -> impl Iterator<Item = usize> {
    (0..=m / 2).map(move |a| m - 2 * a)
}

/// `ln g(j, m)` with `g(j, m) = C(m, m/2-j) - C(m, m/2-j-1)`.
pub fn irrep_multiplicity(m: usize, two_j: usize) -> Result<f64> {
    check_label(m, two_j)?;
    let a = (m - two_j) / 2;
    // C(m, a-1) / C(m, a) = a / (m - a + 1)
    let ratio = a as f64 / (m - a + 1) as f64;
    Ok(ln_binomial(m, a) + (-ratio).ln_1p())
}

/// Log of the unnormalised diagonal of the spin-`j` block of `ρ^⊗m` in its own
/// eigenbasis, ordered from `k = +j` down to `k = -j`: `ln(λ₊^{m/2+k} λ₋^{m/2-k})`.
pub fn product_block_eigenvalues(
    m: usize,
    two_j: usize,
    lambda_plus: f64,
    lambda_minus: f64,
) -> Result<Vec<f64>> {
    check_label(m, two_j)?;
    if !(lambda_plus >= lambda_minus && lambda_minus >= 0.0)
        || (lambda_plus + lambda_minus - 1.0).abs() > 1e-12
    {
        return Err(Error::Domain {
            name: "lambda_plus",
            value: lambda_plus,
            range: "[1/2, 1] with lambda_plus + lambda_minus = 1",
        });
    }
    Ok(block_log_diagonal(
        m,
        two_j,
        lambda_plus.ln(),
        lambda_minus.ln(),
    ))
}

fn block_log_diagonal(m: usize, two_j: usize, ln_plus: f64, ln_minus: f64) -> Vec<f64> {
    let top = (m + two_j) / 2;
    let bottom = (m - two_j) / 2;
    (0..=two_j)
        .map(|a| mul_ln((top - a) as f64, ln_plus) + mul_ln((bottom + a) as f64, ln_minus))
        .collect()
}

/// `J_x` for spin `two_j / 2` in the `J_z` basis ordered `k = j, j-1, …, -j`.
fn spin_jx(two_j: usize) -> DMatrix<f64> {
    let dim = two_j + 1;
    let mut jx = DMatrix::zeros(dim, dim);
    for a in 0..two_j {
        let v = 0.5 * (((a + 1) * (two_j - a)) as f64).sqrt();
        jx[(a, a + 1)] = v;
        jx[(a + 1, a)] = v;
    }
    jx
}

/// Eigenvectors of `J_x` for spin `two_j / 2`, columns ordered by eigenvalue
/// `k = -j, …, j`. These do not depend on the rotation angle and are computed
/// once per dimension for the life of the process.
fn jx_eigenvectors(two_j: usize) -> Arc<DMatrix<f64>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<DMatrix<f64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().expect("cache lock").get(&two_j) {
        return Arc::clone(v);
    }
    let eig = SymmetricEigen::new(spin_jx(two_j));
    // Eigenvalues of J_x are exactly -j..=j with unit gaps; sort columns by them.
    let mut order: Vec<(i64, usize)> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(n, &ev)| ((2.0 * ev).round() as i64, n))
        .collect();
    order.sort_unstable();
    let dim = two_j + 1;
    let mut sorted = DMatrix::zeros(dim, dim);
    for (col, &(_, n)) in order.iter().enumerate() {
        sorted.set_column(col, &eig.eigenvectors.column(n));
    }
    let v = Arc::new(sorted);
    cache
        .lock()
        .expect("cache lock")
        .insert(two_j, Arc::clone(&v));
    v
}

/// Wigner small-d matrix `d^j_{k'k}(θ) = ⟨j k'| exp(-iθJ_y) |j k⟩`, rows and
/// columns ordered from `k = +j` down.
///
/// Built from the eigenvectors of `J_x`, which are well separated (unit gaps):
/// `exp(-iθJ_y) = S⁻¹ exp(-iθJ_x) S` with `S = diag(i^(j+k))`, and the phases
/// select the cosine part on even offsets and the sine part on odd offsets.
pub fn wigner_small_d(two_j: usize, theta: f64) -> DMatrix<f64> {
    let dim = two_j + 1;
    if dim == 1 {
        return DMatrix::from_element(1, 1, 1.0);
    }
    let vectors = jx_eigenvectors(two_j);
    // C = V cos(θΛ) Vᵀ is only needed between rows of equal parity and
    // S = V sin(θΛ) Vᵀ only between rows of opposite parity.
    let (even, odd) = parity_indices(dim);
    let v_even = vectors.select_rows(even.iter());
    let v_odd = vectors.select_rows(odd.iter());
    let scaled = |rows: &DMatrix<f64>, f: fn(f64) -> f64| {
        let mut out = rows.clone();
        for n in 0..dim {
            let k = n as f64 - 0.5 * two_j as f64;
            out.column_mut(n).scale_mut(f(theta * k));
        }
        out
    };
    let c_even = scaled(&v_even, f64::cos) * v_even.transpose();
    let c_odd = scaled(&v_odd, f64::cos) * v_odd.transpose();
    let s_cross = scaled(&v_even, f64::sin) * v_odd.transpose();
    DMatrix::from_fn(dim, dim, |a, b| {
        let sign = if (a + 4 - b % 4) % 4 < 2 { 1.0 } else { -1.0 };
        sign * match (a % 2, b % 2) {
            (0, 0) => c_even[(a / 2, b / 2)],
            (1, 1) => c_odd[(a / 2, b / 2)],
            (0, _) => s_cross[(a / 2, b / 2)],
            _ => s_cross[(b / 2, a / 2)],
        }
    })
}

fn parity_indices(dim: usize) -> (Vec<usize>, Vec<usize>) {
    ((0..dim).step_by(2).collect(), (1..dim).step_by(2).collect())
}

/// Rotation matrices `d^j(θ)` for the irreps of one evaluation, built once per `(m, θ)`.
#[derive(Debug, Clone)]
pub struct RotationCache {
    theta: f64,
    /// Indexed by `two_j`; `None` for labels that were not requested.
    matrices: Vec<Option<DMatrix<f64>>>,
}

impl RotationCache {
    /// Every irrep label of `m` qubits.
    pub fn new(m: usize, theta: f64) -> Self {
        let labels: Vec<usize> = irrep_labels(m).collect();
        Self::for_labels(theta, &labels)
    }

    pub fn for_labels(theta: f64, labels: &[usize]) -> Self {
        let max = labels.iter().copied().max().unwrap_or(0);
        let built: Vec<(usize, DMatrix<f64>)> = labels
            .par_iter()
            .map(|&two_j| (two_j, wigner_small_d(two_j, theta)))
            .collect();
        let mut matrices = vec![None; max + 1];
        for (two_j, d) in built {
            matrices[two_j] = Some(d);
        }
        Self { theta, matrices }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn get(&self, two_j: usize) -> Option<&DMatrix<f64>> {
        self.matrices.get(two_j).and_then(Option::as_ref)
    }

    pub fn labels(&self) -> impl Iterator<Item = usize> + '_ {
        self.matrices
            .iter()
            .enumerate()
            .filter_map(|(two_j, d)| d.as_ref().map(|_| two_j))
    }
}

/// One spin-`j` sector of the mirrored mixture.
///
/// The sector contributes `exp(log_multiplicity)` identical copies of
/// `exp(log_scale) * matrix`.
#[derive(Debug, Clone)]
pub struct SpinBlock {
    pub m: usize,
    pub two_j: usize,
    pub log_multiplicity: f64,
    pub log_scale: f64,
    pub matrix: DMatrix<f64>,
}

/// Log-domain weights of one sector, available before any rotation is done.
#[derive(Debug, Clone)]
struct BlockWeights {
    two_j: usize,
    log_multiplicity: f64,
    log_scale: f64,
    diagonal: Vec<f64>,
}

impl BlockWeights {
    fn new(m: usize, two_j: usize, state: &ProcessedQubitState) -> Result<Self> {
        let log_multiplicity = irrep_multiplicity(m, two_j)?;
        let logs = block_log_diagonal(
            m,
            two_j,
            state.lambda_plus().ln(),
            state.lambda_minus().ln(),
        );
        let log_scale = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let diagonal = if log_scale == f64::NEG_INFINITY {
            vec![0.0; logs.len()]
        } else {
            logs.iter().map(|l| (l - log_scale).exp()).collect()
        };
        Ok(Self {
            two_j,
            log_multiplicity,
            log_scale,
            diagonal,
        })
    }

    /// Total probability carried by all copies of this sector.
    fn mass(&self) -> f64 {
        if self.log_scale == f64::NEG_INFINITY {
            return 0.0;
        }
        (self.log_multiplicity + self.log_scale).exp() * self.diagonal.iter().sum::<f64>()
    }

    /// Upper bound on the sector's entropy contribution in bits.
    fn entropy_bound(&self) -> f64 {
        let mass = self.mass();
        if mass == 0.0 {
            return 0.0;
        }
        mass * (self.log_scale.abs() + (self.diagonal.len() as f64).ln()) / LN_2
    }
}

impl SpinBlock {
    /// Assemble the scaled sector `½(R D Rᵀ + Rᵀ D R)`.
    pub fn build(
        m: usize,
        two_j: usize,
        state: &ProcessedQubitState,
        rotation: &DMatrix<f64>,
    ) -> Result<Self> {
        let weights = BlockWeights::new(m, two_j, state)?;
        Ok(Self::from_weights(m, weights, rotation))
    }

    fn from_weights(m: usize, weights: BlockWeights, rotation: &DMatrix<f64>) -> Self {
        let dim = weights.two_j + 1;
        assert_eq!(
            rotation.nrows(),
            dim,
            "rotation does not match 2j = {}",
            weights.two_j
        );
        let roots: Vec<f64> = weights.diagonal.iter().map(|d| d.sqrt()).collect();
        let mut matrix = DMatrix::zeros(dim, dim);
        let (even, odd) = parity_indices(dim);
        for idx in [even, odd] {
            if idx.is_empty() {
                continue;
            }
            let mut half = rotation.select_rows(idx.iter());
            for (mut col, r) in half.column_iter_mut().zip(&roots) {
                col.scale_mut(*r);
            }
            let sub = &half * half.transpose();
            for (r, &a) in idx.iter().enumerate() {
                for (c, &b) in idx.iter().enumerate() {
                    matrix[(a, b)] = sub[(r, c)];
                }
            }
        }
        Self {
            m,
            two_j: weights.two_j,
            log_multiplicity: weights.log_multiplicity,
            log_scale: weights.log_scale,
            matrix,
        }
    }

    pub fn dim(&self) -> usize {
        self.two_j + 1
    }

    /// `g · exp(log_scale) · tr(matrix)`.
    pub fn mass(&self) -> f64 {
        if self.log_scale == f64::NEG_INFINITY {
            return 0.0;
        }
        (self.log_multiplicity + self.log_scale).exp() * self.matrix.trace()
    }

    /// Eigenvalues of the scaled block, clipped at zero.
    ///
    /// The block only couples indices of equal parity, so the two halves are
    /// diagonalised separately.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(self.dim());
        for parity in 0..2 {
            let idx: Vec<usize> = (parity..self.dim()).step_by(2).collect();
            if idx.is_empty() {
                continue;
            }
            let sub = DMatrix::from_fn(idx.len(), idx.len(), |r, c| self.matrix[(idx[r], idx[c])]);
            let eigenvalues = sub.symmetric_eigenvalues();
            for &v in eigenvalues.iter() {
                if !v.is_finite() || v < -EIGEN_CLIP_TOL {
                    return Err(Error::Eigen {
                        m: self.m,
                        two_j: self.two_j,
                        detail: format!("eigenvalue {v:e} below clipping tolerance"),
                    });
                }
                out.push(v.max(0.0));
            }
        }
        Ok(out)
    }

    /// Entropy contributed by all `g` copies of this sector, in bits.
    pub fn entropy_contribution(&self) -> Result<f64> {
        if self.log_scale == f64::NEG_INFINITY {
            return Ok(0.0);
        }
        let nats: f64 = self
            .eigenvalues()?
            .into_iter()
            .filter(|&v| v > 0.0)
            .map(|v| -v * (self.log_scale + v.ln()))
            .sum();
        Ok((self.log_multiplicity + self.log_scale).exp() * nats / LN_2)
    }
}

/// Per-sector record of one mixture-entropy evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockDiagnostic {
    pub two_j: usize,
    pub log_multiplicity: f64,
    pub log_scale: f64,
    /// Probability mass carried by the sector.
    pub mass: f64,
    /// Entropy contributed in bits; zero for skipped sectors.
    pub contribution: f64,
    pub skipped: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixtureEntropy {
    pub m: usize,
    /// Entropy in bits.
    pub entropy: f64,
    /// Summed sector traces before any skipping.
    pub total_trace: f64,
    /// Sum of the entropy bounds of skipped sectors, in bits.
    pub skipped_bound: f64,
    /// Sectors in descending `2j`.
    pub blocks: Vec<BlockDiagnostic>,
}

/// Entropy in bits of `½ρ^⊗m + ½ Z^⊗m ρ^⊗m Z^⊗m`.
pub fn mixture_entropy(m: usize, state: &ProcessedQubitState) -> Result<f64> {
    Ok(mixture_entropy_report(m, state)?.entropy)
}

/// [`mixture_entropy`] with per-sector diagnostics.
///
/// Sectors are evaluated in parallel and reduced sequentially in descending
/// `2j`, so the result does not depend on the thread count.
pub fn mixture_entropy_report(m: usize, state: &ProcessedQubitState) -> Result<MixtureEntropy> {
    if m == 0 {
        return Err(Error::ZeroBlockLength);
    }
    let weights = irrep_labels(m)
        .map(|two_j| BlockWeights::new(m, two_j, state))
        .collect::<Result<Vec<_>>>()?;

    let total_trace: f64 = weights.iter().map(BlockWeights::mass).sum();
    if !((total_trace - 1.0).abs() <= TRACE_TOL) {
        return Err(Error::Normalisation {
            m,
            trace: total_trace,
        });
    }

    let kept: Vec<usize> = weights
        .iter()
        .filter(|w| w.entropy_bound() >= SKIP_BOUND_BITS)
        .map(|w| w.two_j)
        .collect();
    let rotations = RotationCache::for_labels(state.theta(), &kept);

    let blocks = weights
        .into_par_iter()
        .map(|w| {
            let mass = w.mass();
            let mut diag = BlockDiagnostic {
                two_j: w.two_j,
                log_multiplicity: w.log_multiplicity,
                log_scale: w.log_scale,
                mass,
                contribution: 0.0,
                skipped: true,
            };
            if let Some(rotation) = rotations.get(w.two_j) {
                let block = SpinBlock::from_weights(m, w, rotation);
                diag.contribution = block.entropy_contribution()?;
                diag.skipped = false;
            }
            Ok(diag)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut entropy = 0.0;
    let mut skipped_bound = 0.0;
    for b in &blocks {
        if b.skipped {
            if b.mass > 0.0 {
                skipped_bound += b.mass * (b.log_scale.abs() + ((b.two_j + 1) as f64).ln()) / LN_2;
            }
        } else {
            entropy += b.contribution;
        }
    }
    Ok(MixtureEntropy {
        m,
        entropy,
        total_trace,
        skipped_bound,
        blocks,
    })
}

/// Spectrum of `ρ^⊗m` with multiplicities, assembled from the irrep diagonals.
/// Intended for small `m` cross-checks; the output has `2^m` entries.
pub fn product_spectrum(m: usize, state: &ProcessedQubitState) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for two_j in irrep_labels(m) {
        let g = irrep_multiplicity(m, two_j)?.exp().round() as usize;
        let logs = product_block_eigenvalues(m, two_j, state.lambda_plus(), state.lambda_minus())?;
        for _ in 0..g {
            out.extend(logs.iter().map(|l| l.exp()));
        }
    }
    Ok(out)
}

#[doc(hidden)]
pub fn block_direct_form(block: &SpinBlock, state: &ProcessedQubitState) -> DMatrix<f64> {
    // ½(R D Rᵀ + Rᵀ D R) without the parity shortcut; used by tests.
    let r = wigner_small_d(block.two_j, state.theta());
    let logs = block_log_diagonal(
        block.m,
        block.two_j,
        state.lambda_plus().ln(),
        state.lambda_minus().ln(),
    );
    let d = DMatrix::from_diagonal(&DVector::from_iterator(
        logs.len(),
        logs.iter().map(|l| (l - block.log_scale).exp()),
    ));
    (&r * &d * r.transpose() + r.transpose() * &d * &r) * 0.5
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::h2;

    fn multiplicity(m: usize, two_j: usize) -> f64 {
        irrep_multiplicity(m, two_j).unwrap().exp()
    }

    #[test]
    fn small_multiplicities() {
        assert!((multiplicity(2, 2) - 1.0).abs() < 1e-12);
        assert!((multiplicity(2, 0) - 1.0).abs() < 1e-12);
        assert!((multiplicity(3, 3) - 1.0).abs() < 1e-12);
        assert!((multiplicity(3, 1) - 2.0).abs() < 1e-12);
        assert!((multiplicity(4, 2) - 3.0).abs() < 1e-12);
        assert!((multiplicity(4, 0) - 2.0).abs() < 1e-12);
        assert!(matches!(
            irrep_multiplicity(4, 1),
            Err(Error::IrrepLabel { .. })
        ));
        assert!(matches!(
            irrep_multiplicity(4, 6),
            Err(Error::IrrepLabel { .. })
        ));
    }

    #[test]
    fn dimension_count_in_log_space() {
        for m in 1..=400 {
            let terms: Vec<f64> = irrep_labels(m)
                .map(|t| irrep_multiplicity(m, t).unwrap() + ((t + 1) as f64).ln())
                .collect();
            let total = crate::logspace::logsumexp(&terms);
            let expected = m as f64 * std::f64::consts::LN_2;
            assert!(
                (total - expected).abs() < 1e-12 * expected.max(1.0),
                "m={m}"
            );
        }
    }

    #[test]
    fn single_copy_block() {
        let logs = product_block_eigenvalues(1, 1, 0.7, 0.3).unwrap();
        assert!((logs[0].exp() - 0.7).abs() < 1e-15);
        assert!((logs[1].exp() - 0.3).abs() < 1e-15);
        assert!(product_block_eigenvalues(1, 1, 0.3, 0.7).is_err());
    }

    #[test]
    fn product_trace_identity() {
        for m in [1, 2, 7, 50, 400] {
            let (lp, lm) = (0.83, 0.17);
            let mut terms = Vec::new();
            for t in irrep_labels(m) {
                let g = irrep_multiplicity(m, t).unwrap();
                for l in product_block_eigenvalues(m, t, lp, lm).unwrap() {
                    terms.push(g + l);
                }
            }
            assert!(crate::logspace::logsumexp(&terms).abs() < 1e-10, "m={m}");
        }
    }

    #[test]
    fn wigner_d_spin_half() {
        let th = 0.7;
        let d = wigner_small_d(1, th);
        let (s, c) = (th / 2.0).sin_cos();
        assert!((d[(0, 0)] - c).abs() < 1e-15);
        assert!((d[(0, 1)] + s).abs() < 1e-15);
        assert!((d[(1, 0)] - s).abs() < 1e-15);
        assert!((d[(1, 1)] - c).abs() < 1e-15);
    }

    #[test]
    fn wigner_d_spin_one_closed_form() {
        let th = 1.1f64;
        let d = wigner_small_d(2, th);
        let (s, c) = th.sin_cos();
        let r2 = std::f64::consts::SQRT_2;
        let expected = [
            [(1.0 + c) / 2.0, -s / r2, (1.0 - c) / 2.0],
            [s / r2, c, -s / r2],
            [(1.0 - c) / 2.0, s / r2, (1.0 + c) / 2.0],
        ];
        for a in 0..3 {
            for b in 0..3 {
                assert!((d[(a, b)] - expected[a][b]).abs() < 1e-14, "({a},{b})");
            }
        }
    }

    #[test]
    fn rotations_orthogonal_and_reversible() {
        let th = 0.6113;
        let cache = RotationCache::new(400, th);
        let back = RotationCache::for_labels(-th, &[0, 2, 100, 250, 400]);
        for two_j in cache.labels() {
            let r = cache.get(two_j).unwrap();
            let dev = (r * r.transpose() - DMatrix::identity(two_j + 1, two_j + 1)).amax();
            assert!(dev < 1e-12, "2j={two_j}: {dev:e}");
            if let Some(rb) = back.get(two_j) {
                assert!((rb - r.transpose()).amax() < 1e-12, "2j={two_j}");
            }
        }
    }

    #[test]
    fn parity_shortcut_matches_direct_form() {
        let state = ProcessedQubitState::new(0.12, 0.3).unwrap();
        for (m, two_j) in [(7, 3), (8, 8), (30, 10), (31, 21)] {
            let r = wigner_small_d(two_j, state.theta());
            let block = SpinBlock::build(m, two_j, &state, &r).unwrap();
            let direct = block_direct_form(&block, &state);
            assert!((&block.matrix - &direct).amax() < 1e-13, "m={m} 2j={two_j}");
            assert!((&block.matrix - block.matrix.transpose()).amax() < 1e-13);
        }
    }

    #[test]
    fn one_qubit_entropy_is_binary() {
        for p in [0.02, 0.11, 0.3] {
            let s = ProcessedQubitState::new(p, 0.0).unwrap();
            let e = mixture_entropy(1, &s).unwrap();
            assert!((e - h2(p)).abs() < 1e-12, "p={p}");
        }
    }

    #[test]
    fn diagonal_case_is_additive() {
        for m in [1, 5, 50, 400] {
            let s = ProcessedQubitState::new(0.12, 0.5).unwrap();
            let e = mixture_entropy(m, &s).unwrap();
            assert!(
                (e - m as f64 * h2(0.12)).abs() < 1e-9 * m as f64,
                "m={m}: {e}"
            );
        }
    }

    #[test]
    fn reflection_invariance() {
        let s = ProcessedQubitState::new(0.1, 0.25).unwrap();
        for m in [3, 12, 60] {
            let a = mixture_entropy(m, &s).unwrap();
            let b = mixture_entropy(m, &s.z_mirror()).unwrap();
            assert!((a - b).abs() < 1e-11, "m={m}");
        }
    }

    #[test]
    fn report_is_ordered_and_normalised() {
        let s = ProcessedQubitState::new(0.129, 0.32).unwrap();
        let rep = mixture_entropy_report(200, &s).unwrap();
        assert!((rep.total_trace - 1.0).abs() < TRACE_TOL);
        assert!(rep.blocks.windows(2).all(|w| w[0].two_j > w[1].two_j));
        assert!(rep.blocks.iter().any(|b| b.skipped));
        assert!(rep.skipped_bound < 1e-15);
    }
}
