//! Exact finite-sample laws used to check the simulation path.

/// Exact CDF of `n (2 - R)`, `R` the range of `n` i.i.d. uniforms on
/// `[-1, 1]`.
///
/// With `x = 1 - t/(2n)`, `P(R/2 ≤ x) = n x^(n-1) - (n-1) x^n`, so the CDF is
/// `1 - x^(n-1) (n - (n-1) x)` for `t ∈ [0, 2n]`.
pub fn segment_range_cdf(n: u64, t: f64) -> f64 {
    if n == 0 || !(t > 0.0) {
        return 0.0;
    }
    let nf = n as f64;
    if t >= 2.0 * nf {
        return 1.0;
    }
    let ln_x = libm::log1p(-t / (2.0 * nf));
    let x = libm::exp(ln_x);
    let below = libm::exp((nf - 1.0) * ln_x) * (nf - (nf - 1.0) * x);
    (1.0 - below).clamp(0.0, 1.0)
}
