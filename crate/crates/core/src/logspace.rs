//! Log-domain helpers shared by the combinatorial modules.

use std::f64::consts::PI;

/// `ln(sum(exp(xs)))` with the maximum factored out. Summation runs left to right.
pub(crate) fn logsumexp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    let s: f64 = xs.iter().map(|&x| (x - max).exp()).sum();
    max + s.ln()
}

pub(crate) fn logaddexp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// `n * ln(x)` with `0 * ln(0) = 0`.
#[inline]
pub(crate) fn mul_ln(n: f64, ln_x: f64) -> f64 {
    if n == 0.0 {
        0.0
    } else {
        n * ln_x
    }
}

/// `ln n! - ln(√(2πn) (n/e)^n)`, the Stirling remainder.
fn stirling_remainder(n: usize) -> f64 {
    let x = n as f64;
    if n < 16 {
        let factorial: f64 = (1..=n).map(|k| k as f64).product();
        return factorial.ln() - (x + 0.5) * x.ln() + x - 0.5 * (2.0 * PI).ln();
    }
    let x2 = x * x;
    (1.0 / 12.0 - (1.0 / 360.0 - (1.0 / 1260.0 - 1.0 / (1680.0 * x2)) / x2) / x2) / x
}

/// `ln C(n, k)` for `k <= n`, accurate to a few ulps of the result.
///
/// Exact integer arithmetic for small `n`; otherwise the Stirling main terms
/// are combined as `k ln(n/k) + (n-k) ln(n/(n-k))` so no large logarithms cancel.
pub(crate) fn ln_binomial(n: usize, k: usize) -> f64 {
    debug_assert!(k <= n);
    let k = k.min(n - k);
    if k == 0 {
        return 0.0;
    }
    if n <= 60 {
        let mut c: u128 = 1;
        for i in 0..k {
            c = c * (n - i) as u128 / (i + 1) as u128;
        }
        return (c as f64).ln();
    }
    let (nf, kf, rf) = (n as f64, k as f64, (n - k) as f64);
    0.5 * (nf / (2.0 * PI * kf * rf)).ln()
        + kf * (nf / kf).ln()
        + rf * (kf / rf).ln_1p()
        + stirling_remainder(n)
        - stirling_remainder(k)
        - stirling_remainder(n - k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn logsumexp_handles_underflow() {
        let xs = [-1000.0, -1000.0];
        assert!((logsumexp(&xs) - (-1000.0 + 2f64.ln())).abs() < 1e-12);
        assert_eq!(logsumexp(&[f64::NEG_INFINITY; 3]), f64::NEG_INFINITY);
        assert!((logaddexp(-1000.0, -1000.0) - logsumexp(&xs)).abs() < 1e-12);
    }

    #[test]
    fn binomials_match_small_exact_values() {
        assert!((ln_binomial(10, 3).exp() - 120.0).abs() < 1e-9);
        assert_eq!(ln_binomial(7, 0), 0.0);
        // Cross-check against the multiplicative formula summed in log space.
        for (n, k) in [
            (61, 1),
            (61, 30),
            (100, 3),
            (400, 200),
            (400, 399),
            (1000, 17),
        ] {
            let direct: f64 = (0..k)
                .map(|i| (((n - i) as f64) / ((i + 1) as f64)).ln())
                .sum();
            assert!((ln_binomial(n, k) - direct).abs() < 1e-11, "C({n},{k})");
        }
        assert!((ln_binomial(60, 30) - 118264581564861424f64.ln()).abs() < 1e-14);
    }
}
