use alloc::vec::Vec;
use core::f64::consts::PI;

use super::special::ZETA_2;
use super::LimitError;

/// Truncation used when the zeta segment family is expanded into a finite
/// product.
pub const DEFAULT_ZETA_TRUNCATION: usize = 10_000;

const SINH_SERIES_CUTOFF: f64 = 1e-4;

/// Limiting distribution of `n^(2/γ) (2 - diam)`.
#[derive(Debug, Clone, PartialEq)]
pub enum LimitLaw {
    /// `1 - exp(-σ₀ t^γ / 2)`.
    Continuous { gamma: f64, sigma0: f64 },
    /// Mass `p_i` on the i-th diameter: `1 - e^(-t/2) ∏ (1 + t p_i / 2)`, `γ = 2`.
    Segments { probs: Vec<f64> },
    /// Countably many diameters with `p_i = 1 / (ζ(2) i²)`, in closed form
    /// `1 - e^(-t/2) sinh(y)/y` with `y = π √(t / (2ζ(2)))`.
    SegmentsZeta,
}

impl LimitLaw {
    pub fn continuous(gamma: f64, sigma0: f64) -> Result<Self, LimitError> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(LimitError::Domain("gamma must be positive"));
        }
        if !(sigma0 > 0.0 && sigma0.is_finite()) {
            return Err(LimitError::Domain("sigma0 must be positive"));
        }
        Ok(Self::Continuous { gamma, sigma0 })
    }

    /// Probabilities may sum to less than one (a truncated infinite family).
    pub fn segments(probs: Vec<f64>) -> Result<Self, LimitError> {
        if probs.is_empty() {
            return Err(LimitError::Domain("at least one segment is required"));
        }
        if probs.iter().any(|p| !(*p >= 0.0) || !p.is_finite()) {
            return Err(LimitError::Domain("segment probabilities must be nonnegative"));
        }
        if probs.iter().sum::<f64>() > 1.0 + 1e-12 {
            return Err(LimitError::Domain("segment probabilities exceed 1"));
        }
        Ok(Self::Segments { probs })
    }

    /// The first `terms` factors of the zeta family.
    pub fn zeta_segments_truncated(terms: usize) -> Result<Self, LimitError> {
        Self::segments((1..=terms).map(zeta_segment_prob).collect())
    }

    /// Exponent `γ` of the normalisation `n^(2/γ)`.
    pub fn gamma(&self) -> f64 {
        match self {
            Self::Continuous { gamma, .. } => *gamma,
            Self::Segments { .. } | Self::SegmentsZeta => 2.0,
        }
    }

    pub fn cdf(&self, t: f64) -> Result<f64, LimitError> {
        limit_cdf(self, t)
    }

    /// Smallest `t` with `cdf(t) ≥ p`, for `p ∈ [0, 1)`.
    pub fn quantile(&self, p: f64) -> Result<f64, LimitError> {
        if !(0.0..1.0).contains(&p) {
            return Err(LimitError::Domain("quantile requires p in [0, 1)"));
        }
        if p == 0.0 {
            return Ok(0.0);
        }
        if let Self::Continuous { gamma, sigma0 } = self {
            return Ok(libm::pow(-2.0 * libm::log1p(-p) / sigma0, 1.0 / gamma));
        }
        let mut hi = 1.0;
        while self.cdf(hi)? < p {
            hi *= 2.0;
        }
        let mut lo = 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.cdf(mid)? < p {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-15 * hi {
                break;
            }
        }
        Ok(hi)
    }
}

/// `p_i = 1 / (ζ(2) i²)`, `i ≥ 1`.
pub fn zeta_segment_prob(i: usize) -> f64 {
    let i = i as f64;
    1.0 / (ZETA_2 * i * i)
}

/// Upper bound on `|cdf_∞(t) - cdf_K(t)|` when the zeta family is cut after
/// `terms` factors: the dropped factors multiply the survival function by
/// at most `exp(t/2 Σ_{i>K} p_i) ≤ exp(t / (2 ζ(2) K))`.
pub fn zeta_truncation_tail(t: f64, terms: usize) -> f64 {
    let survival = 1.0 - limit_cdf(&LimitLaw::SegmentsZeta, t.max(0.0)).unwrap_or(0.0);
    survival * libm::expm1(t.max(0.0) / (2.0 * ZETA_2 * terms.max(1) as f64))
}

pub fn limit_cdf(law: &LimitLaw, t: f64) -> Result<f64, LimitError> {
    if !(t >= 0.0) {
        return Err(LimitError::Domain("limit cdf requires t >= 0"));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let ln_survival = match law {
        LimitLaw::Continuous { gamma, sigma0 } => -0.5 * sigma0 * libm::pow(t, *gamma),
        LimitLaw::Segments { probs } => -0.5 * t + probs.iter().map(|p| libm::log1p(0.5 * t * p)).sum::<f64>(),
        LimitLaw::SegmentsZeta => -0.5 * t + ln_sinhc(PI * libm::sqrt(t / (2.0 * ZETA_2))),
    };
    Ok((-libm::expm1(ln_survival)).clamp(0.0, 1.0))
}

/// `ln(sinh(y) / y)` for `y ≥ 0`.
fn ln_sinhc(y: f64) -> f64 {
    if y < SINH_SERIES_CUTOFF {
        let y2 = y * y;
        return libm::log1p(y2 / 6.0 + y2 * y2 / 120.0);
    }
    // sinh y = e^y (1 - e^{-2y}) / 2
    y + libm::log1p(-libm::exp(-2.0 * y)) - core::f64::consts::LN_2 - libm::log(y)
}

/// Bounds on the limit law of the uniform disk, `n^(4/5)` scaling:
/// `(1 - exp(-4 t^(5/2) / (3^(5/2) π)), 1 - exp(-4 t^(5/2) / π))`.
pub fn aprs_envelope(t: f64) -> (f64, f64) {
    if !(t > 0.0) {
        return (0.0, 0.0);
    }
    let t52 = libm::pow(t, 2.5);
    let lower = -libm::expm1(-4.0 * t52 / (libm::pow(3.0, 2.5) * PI));
    let upper = -libm::expm1(-4.0 * t52 / PI);
    (lower, upper)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn disk() -> LimitLaw {
        LimitLaw::continuous(2.5, 32.0 / (15.0 * PI)).unwrap()
    }

    #[test]
    fn zero_at_origin() {
        for law in [disk(), LimitLaw::segments(vec![0.3, 0.7]).unwrap(), LimitLaw::SegmentsZeta] {
            assert_eq!(law.cdf(0.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn uniform_disk_at_one() {
        assert_abs_diff_eq!(disk().cdf(1.0).unwrap(), 0.287_895_454_842_502, epsilon = 1e-12);
    }

    #[test]
    fn single_segment_at_two() {
        let law = LimitLaw::segments(vec![1.0]).unwrap();
        assert_abs_diff_eq!(law.cdf(2.0).unwrap(), 0.264_241_117_657_115, epsilon = 1e-12);
    }

    #[test]
    fn zeta_closed_form_simplifies() {
        for &t in &[1e-12, 1e-9, 1e-3, 0.5, 1.0, 3.0, 10.0, 50.0] {
            let y = libm::sqrt(3.0 * t);
            let direct = 1.0 - libm::exp(-0.5 * t) * libm::sinh(y) / y;
            assert_abs_diff_eq!(LimitLaw::SegmentsZeta.cdf(t).unwrap(), direct, epsilon = 1e-12);
        }
    }

    #[test]
    fn zeta_large_t_does_not_overflow() {
        let v = LimitLaw::SegmentsZeta.cdf(1e7).unwrap();
        assert_eq!(v, 1.0);
    }

    #[test]
    fn negative_t_rejected() {
        assert!(disk().cdf(-1.0).is_err());
        assert!(LimitLaw::SegmentsZeta.cdf(f64::NAN).is_err());
    }

    #[test]
    fn quantile_inverts_cdf() {
        let laws = [disk(), LimitLaw::segments(vec![0.5, 0.5]).unwrap(), LimitLaw::SegmentsZeta];
        for law in &laws {
            for &p in &[0.01, 0.3, 0.5, 0.9, 0.999] {
                let t = law.quantile(p).unwrap();
                assert_abs_diff_eq!(law.cdf(t).unwrap(), p, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn envelope_brackets_uniform_disk() {
        for k in 1..=50 {
            let t = 0.1 * k as f64;
            let (lo, hi) = aprs_envelope(t);
            let f = disk().cdf(t).unwrap();
            assert!(lo < hi);
            assert!(lo <= f && f <= hi, "t = {t}: {lo} {f} {hi}");
        }
        assert_eq!(aprs_envelope(0.0), (0.0, 0.0));
        let (lo, hi) = aprs_envelope(1e-8);
        assert!(lo < 1e-18 && hi < 1e-18);
    }

    #[test]
    fn segment_validation() {
        assert!(LimitLaw::segments(vec![]).is_err());
        assert!(LimitLaw::segments(vec![0.7, 0.7]).is_err());
        assert!(LimitLaw::segments(vec![-0.1, 1.1]).is_err());
        assert!(LimitLaw::continuous(0.0, 1.0).is_err());
        assert!(LimitLaw::continuous(1.0, 0.0).is_err());
    }

    #[test]
    fn zeta_probabilities_sum_to_one() {
        let total: f64 = (1..=1_000_000).map(zeta_segment_prob).sum();
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-6);
    }
}
