//! Limit laws of the scaled diameter deficit and their constants.
//!
//! For a spherically symmetric law whose radial deficit `η = 1 - ‖ξ‖`
//! satisfies `P(η ≤ s) ~ a s^α`, the deficit exponent is
//! `γ = (d-1)/2 + 2α` and the scale `σ₀` is `a² c` times a Beta-function
//! factor, where `c` is [`zeta_tail_constant`]. Sectors, angular densities on
//! the circle and segment mixtures each have their own `σ₀` or product form.

mod law;
pub mod special;

use core::f64::consts::PI;

use thiserror::Error;

use crate::sampler::{CircleDensity, DistributionSpec, Family};

pub use law::{aprs_envelope, limit_cdf, zeta_truncation_tail, LimitLaw, DEFAULT_ZETA_TRUNCATION};
pub use special::{log_gamma, regularized_beta, ZETA_2};

use special::ln_gamma_unchecked;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LimitError {
    #[error("domain error: {0}")]
    Domain(&'static str),
}

/// Quadrature nodes for [`sigma0_circle_density`].
pub const CIRCLE_QUADRATURE_NODES: usize = 4096;

/// `γ = (d-1)/2 + 2α`; the scaled deficit is `n^(2/γ) (2 - diam)`.
pub fn gamma_exponent(d: u32, alpha: f64) -> f64 {
    0.5 * (d as f64 - 1.0) + 2.0 * alpha
}

/// `2^(d-1) Γ(d/2) / ((d-1) √π Γ((d-1)/2))`, the ratio between the tail of
/// `‖ξ₁ - ξ₂‖` near 2 and `E[(s - η₁ - η₂)^((d-1)/2); η₁ + η₂ ≤ s]`.
pub fn zeta_tail_constant(d: u32) -> Result<f64, LimitError> {
    if d < 2 {
        return Err(LimitError::Domain("dimension must be at least 2"));
    }
    let d = d as f64;
    let ln = (d - 1.0) * core::f64::consts::LN_2 + ln_gamma_unchecked(0.5 * d)
        - libm::log(d - 1.0)
        - 0.5 * libm::log(PI)
        - ln_gamma_unchecked(0.5 * (d - 1.0));
    Ok(libm::exp(ln))
}

/// `σ₀` of a spherically symmetric law.
///
/// With `boundary_atom` the radial deficit has an atom `a = P(η = 0)` and
/// `σ₀ = a² c`. Otherwise `P(η ≤ s) ~ a s^α` with `α > 0` and
/// `σ₀ = a² c α² Γ(α)² Γ((d+1)/2) / Γ(2α + (d+1)/2)`.
pub fn sigma0_spherical(d: u32, alpha: f64, a: f64, boundary_atom: bool) -> Result<f64, LimitError> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(LimitError::Domain("radial constant a must be positive"));
    }
    let c = zeta_tail_constant(d)?;
    if boundary_atom {
        return Ok(a * a * c);
    }
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(LimitError::Domain("alpha must be positive without a boundary atom"));
    }
    let h = 0.5 * (d as f64 + 1.0);
    let ln_factor = 2.0 * libm::log(alpha) + 2.0 * ln_gamma_unchecked(alpha) + ln_gamma_unchecked(h)
        - ln_gamma_unchecked(2.0 * alpha + h);
    Ok(a * a * c * libm::exp(ln_factor))
}

/// Fraction of `S^(d-1)` within geodesic angle `cap_angle` of a pole,
/// `½ I_{sin²θ}((d-1)/2, ½)` for `θ ≤ π/2`.
pub fn cap_fraction(d: u32, cap_angle: f64) -> Result<f64, LimitError> {
    if d < 2 {
        return Err(LimitError::Domain("dimension must be at least 2"));
    }
    if !(cap_angle > 0.0 && cap_angle <= PI) {
        return Err(LimitError::Domain("cap angle must lie in (0, π]"));
    }
    if cap_angle == PI {
        return Ok(1.0);
    }
    let s = libm::sin(cap_angle);
    let half = 0.5 * regularized_beta(s * s, 0.5 * (d as f64 - 1.0), 0.5)?;
    Ok(if cap_angle <= 0.5 * PI { half } else { 1.0 - half })
}

/// Fraction of the sphere covered by a cap and its antipodal copy.
pub fn double_cap_fraction(d: u32, cap_angle: f64) -> Result<f64, LimitError> {
    Ok((2.0 * cap_fraction(d, cap_angle)?).min(1.0))
}

/// `σ₀` of a spherically symmetric base law restricted to the double cone
/// over `A ∪ (-A)`, `A` a cap of angle `cap_angle`.
///
/// Near-antipodal pairs of the base law keep their rate on `A ∪ (-A)` while
/// the restricted law is renormalised by the cone's mass `q`, so the scale
/// is `base_sigma0 / q`.
pub fn sigma0_sector(base_sigma0: f64, d: u32, cap_angle: f64) -> Result<f64, LimitError> {
    if !(base_sigma0 > 0.0) {
        return Err(LimitError::Domain("base sigma0 must be positive"));
    }
    Ok(base_sigma0 / double_cap_fraction(d, cap_angle)?)
}

/// `4 ∫₀^{2π} f(u) f(u+π) du` by the periodic trapezoidal rule on
/// [`CIRCLE_QUADRATURE_NODES`] nodes.
pub fn sigma0_circle_density<F: Fn(f64) -> f64>(density: F) -> Result<f64, LimitError> {
    let n = CIRCLE_QUADRATURE_NODES;
    let h = 2.0 * PI / n as f64;
    let mut values = alloc::vec::Vec::with_capacity(n);
    for k in 0..n {
        let v = density(k as f64 * h);
        if !(v >= 0.0) || !v.is_finite() {
            return Err(LimitError::Domain("density must be finite and nonnegative"));
        }
        values.push(v);
    }
    let half = n / 2;
    let sum: f64 = (0..n).map(|k| values[k] * values[(k + half) % n]).sum();
    Ok(4.0 * h * sum)
}

/// The limit law of the scaled deficit for a sampler family, when one is
/// known. Returns `None` when the directional scale vanishes (for instance
/// a circle density supported on a half-circle) or the dimension is 1.
pub fn law_for(spec: &DistributionSpec) -> Result<Option<LimitLaw>, LimitError> {
    let d = spec.dim() as u32;
    if d < 2 && !matches!(spec.family(), Family::SegmentMixture { .. }) {
        return Ok(None);
    }
    Ok(match spec.family() {
        Family::SegmentMixture { probs, .. } => Some(LimitLaw::segments(probs.clone())?),
        Family::CircleDensity(density) => circle_law(density)?,
        _ => {
            let (gamma, sigma0) = spherical_constants(spec)?;
            Some(LimitLaw::continuous(gamma, sigma0)?)
        }
    })
}

fn circle_law(density: &CircleDensity) -> Result<Option<LimitLaw>, LimitError> {
    let sigma0 = sigma0_circle_density(|u| density.eval(u))?;
    if sigma0 <= 0.0 {
        return Ok(None);
    }
    Ok(Some(LimitLaw::continuous(0.5, sigma0)?))
}

/// `(γ, σ₀)` for the spherically symmetric families and sectors over them.
fn spherical_constants(spec: &DistributionSpec) -> Result<(f64, f64), LimitError> {
    let d = spec.dim() as u32;
    match spec.family() {
        // P(η ≤ s) = 1 - (1-s)^d ~ d s
        Family::UniformBall { .. } => Ok((gamma_exponent(d, 1.0), sigma0_spherical(d, 1.0, d as f64, false)?)),
        Family::UniformSphere { .. } => Ok((gamma_exponent(d, 0.0), sigma0_spherical(d, 0.0, 1.0, true)?)),
        Family::RadialPower { alpha, atom, .. } => {
            if *atom > 0.0 {
                Ok((gamma_exponent(d, 0.0), sigma0_spherical(d, 0.0, *atom, true)?))
            } else {
                Ok((gamma_exponent(d, *alpha), sigma0_spherical(d, *alpha, 1.0, false)?))
            }
        }
        Family::Sector { base, cap_angle, .. } => {
            let (gamma, base_sigma0) = spherical_constants(base)?;
            Ok((gamma, sigma0_sector(base_sigma0, d, *cap_angle)?))
        }
        Family::SegmentMixture { .. } | Family::CircleDensity(_) => {
            Err(LimitError::Domain("family is not spherically symmetric"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn gamma_exponent_values() {
        assert_eq!(gamma_exponent(2, 1.0), 2.5);
        assert_eq!(2.0 / gamma_exponent(2, 1.0), 0.8);
        assert_eq!(gamma_exponent(4, 1.0), 3.5);
        assert_eq!(gamma_exponent(3, 0.0), 1.0);
    }

    #[test]
    fn zeta_tail_constant_values() {
        assert_abs_diff_eq!(zeta_tail_constant(2).unwrap(), 2.0 / PI, epsilon = 1e-14);
        assert_abs_diff_eq!(zeta_tail_constant(3).unwrap(), 1.0, epsilon = 1e-14);
        assert!(zeta_tail_constant(1).is_err());
    }

    #[test]
    fn sigma0_uniform_disk() {
        let s = sigma0_spherical(2, 1.0, 2.0, false).unwrap();
        assert_abs_diff_eq!(s, 32.0 / (15.0 * PI), epsilon = 1e-14);
        assert_abs_diff_eq!(0.5 * s, 16.0 / (15.0 * PI), epsilon = 1e-14);
    }

    #[test]
    fn sigma0_boundary_atom_is_scaled_zeta_constant() {
        for d in 2..=10 {
            let c = zeta_tail_constant(d).unwrap();
            assert_abs_diff_eq!(sigma0_spherical(d, 0.0, 1.0, true).unwrap(), c, epsilon = 1e-14);
            assert_abs_diff_eq!(sigma0_spherical(d, 0.0, 0.5, true).unwrap(), 0.25 * c, epsilon = 1e-14);
        }
    }

    #[test]
    fn sigma0_degenerate_branch_rejected() {
        assert!(sigma0_spherical(3, 0.0, 1.0, false).is_err());
        assert!(sigma0_spherical(3, 1.0, 0.0, false).is_err());
    }

    #[test]
    fn cap_fractions() {
        assert_eq!(cap_fraction(4, PI).unwrap(), 1.0);
        assert_abs_diff_eq!(cap_fraction(2, 0.5 * PI).unwrap(), 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(cap_fraction(3, PI / 3.0).unwrap(), 0.25, epsilon = 1e-14);
        // circle: arc of half-angle θ covers θ/π
        assert_abs_diff_eq!(cap_fraction(2, 0.3).unwrap(), 0.3 / PI, epsilon = 1e-14);
        // S²: (1 - cos θ)/2, also past the equator
        assert_abs_diff_eq!(cap_fraction(3, 2.0).unwrap(), 0.5 * (1.0 - libm::cos(2.0)), epsilon = 1e-13);
        assert!(cap_fraction(3, 0.0).is_err());
    }

    #[test]
    fn sector_sigma0() {
        let base = sigma0_spherical(3, 1.0, 3.0, false).unwrap();
        assert_abs_diff_eq!(sigma0_sector(base, 3, PI).unwrap(), base, epsilon = 1e-14);
        // half-disk cone over A ∪ -A is the whole disk
        assert_abs_diff_eq!(sigma0_sector(base, 2, 0.5 * PI).unwrap(), base, epsilon = 1e-13);
        // cap of angle π/3 on S² plus its mirror covers half the sphere
        assert_abs_diff_eq!(sigma0_sector(base, 3, PI / 3.0).unwrap(), 2.0 * base, epsilon = 1e-13);
    }

    #[test]
    fn circle_density_sigma0() {
        let uniform = sigma0_circle_density(|_| 1.0 / (2.0 * PI)).unwrap();
        assert_abs_diff_eq!(uniform, 2.0 / PI, epsilon = 1e-10);
        let half = sigma0_circle_density(|u| 0.5 * libm::sin(u).max(0.0)).unwrap();
        assert_abs_diff_eq!(half, 0.0, epsilon = 1e-15);
        let cosine = sigma0_circle_density(|u| (1.0 + libm::cos(u)) / (2.0 * PI)).unwrap();
        assert_abs_diff_eq!(cosine, 1.0 / PI, epsilon = 1e-10);
        assert!(sigma0_circle_density(libm::cos).is_err());
    }
}
