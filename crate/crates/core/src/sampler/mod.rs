//! Point distributions on the unit ball and the binomial and Poisson
//! processes built from them.

mod density;
mod rng;

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};
use thiserror::Error;

use crate::geom::{GeomError, Point, PointCloud};
use crate::limits::double_cap_fraction;

pub use density::{AngularDensity, CircleDensity, CosineTerm};
pub use rng::{derive_seed, mix64, RngHandle};

/// Smallest acceptance rate allowed for sector rejection sampling.
pub const MIN_SECTOR_ACCEPTANCE: f64 = 1e-6;
const UNIT_TOLERANCE: f64 = 1e-9;
const PROB_SUM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecError {
    #[error("invalid dimension {0}")]
    InvalidDimension(usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("probabilities must be nonnegative and sum to 1 (sum = {0})")]
    BadProbabilities(f64),
    #[error("sector too thin for rejection sampling (acceptance {0:e})")]
    SectorTooThin(f64),
    #[error("intensity must be positive")]
    InvalidIntensity,
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// The distribution families of the sample points.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    UniformBall { d: usize },
    UniformSphere { d: usize },
    /// Uniform direction and radial deficit `η = 1 - ‖ξ‖` with
    /// `P(η = 0) = atom` and, on the remaining mass, `P(η ≤ s) = s^alpha`.
    RadialPower { d: usize, alpha: f64, atom: f64 },
    /// A spherically symmetric base law conditioned on the double cone
    /// `{t x : x ∈ A ∪ (-A), t ∈ [0, 1]}`, `A` the cap of half-angle
    /// `cap_angle` around `cap_center`.
    Sector {
        base: Box<DistributionSpec>,
        cap_center: Vec<f64>,
        cap_angle: f64,
    },
    /// Uniform on the diameter `[-x_i, x_i]` with probability `p_i`.
    SegmentMixture { directions: Vec<Vec<f64>>, probs: Vec<f64> },
    /// Points on the unit circle with angular density `f`.
    CircleDensity(CircleDensity),
}

/// A validated [`Family`] with precomputed sampling data.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionSpec {
    family: Family,
    dim: usize,
    plan: Plan,
}

#[derive(Debug, Clone, PartialEq)]
enum Plan {
    Direct,
    /// Accept when `|⟨x, c⟩| ≥ ‖x‖ min_abs_cos`; `None` accepts everything.
    Sector { min_abs_cos: Option<f64> },
    Segments { cumulative: Vec<f64> },
}

impl DistributionSpec {
    pub fn new(family: Family) -> Result<Self, SpecError> {
        let (family, dim, plan) = match family {
            Family::UniformBall { d } | Family::UniformSphere { d } => {
                check_dim(d)?;
                (family, d, Plan::Direct)
            }
            Family::RadialPower { d, alpha, atom } => {
                check_dim(d)?;
                if !(0.0..=1.0).contains(&atom) {
                    return Err(SpecError::InvalidParameter("atom must lie in [0, 1]"));
                }
                if !(alpha >= 0.0) || !alpha.is_finite() {
                    return Err(SpecError::InvalidParameter("alpha must be finite and nonnegative"));
                }
                if atom < 1.0 && alpha == 0.0 {
                    return Err(SpecError::InvalidParameter("alpha must be positive unless atom = 1"));
                }
                (family, d, Plan::Direct)
            }
            Family::Sector { base, cap_center, cap_angle } => {
                let d = base.dim();
                if !base.is_spherically_symmetric() {
                    return Err(SpecError::InvalidParameter("sector base must be spherically symmetric"));
                }
                let cap_center = unit_vector(cap_center, d)?;
                if !(cap_angle > 0.0 && cap_angle <= PI) {
                    return Err(SpecError::InvalidParameter("cap angle must lie in (0, π]"));
                }
                if d < 2 {
                    return Err(SpecError::InvalidDimension(d));
                }
                let acceptance = double_cap_fraction(d as u32, cap_angle)
                    .map_err(|_| SpecError::InvalidParameter("cap angle must lie in (0, π]"))?;
                if acceptance < MIN_SECTOR_ACCEPTANCE {
                    return Err(SpecError::SectorTooThin(acceptance));
                }
                let min_abs_cos = (cap_angle < 0.5 * PI).then(|| libm::cos(cap_angle));
                (
                    Family::Sector { base, cap_center, cap_angle },
                    d,
                    Plan::Sector { min_abs_cos },
                )
            }
            Family::SegmentMixture { directions, probs } => {
                let d = directions.first().map_or(0, Vec::len);
                check_dim(d)?;
                if directions.len() != probs.len() {
                    return Err(SpecError::InvalidParameter("one probability per direction is required"));
                }
                let directions = directions
                    .into_iter()
                    .map(|x| unit_vector(x, d))
                    .collect::<Result<Vec<_>, _>>()?;
                for (i, a) in directions.iter().enumerate() {
                    for b in &directions[i + 1..] {
                        let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
                        if dot.abs() > 1.0 - 1e-12 {
                            return Err(SpecError::InvalidParameter("segment directions must span distinct lines"));
                        }
                    }
                }
                let sum: f64 = probs.iter().sum();
                if probs.iter().any(|p| !(*p >= 0.0)) || (sum - 1.0).abs() > PROB_SUM_TOLERANCE {
                    return Err(SpecError::BadProbabilities(sum));
                }
                let mut acc = 0.0;
                let cumulative = probs
                    .iter()
                    .map(|p| {
                        acc += p;
                        acc
                    })
                    .collect();
                (
                    Family::SegmentMixture { directions, probs },
                    d,
                    Plan::Segments { cumulative },
                )
            }
            Family::CircleDensity(density) => (Family::CircleDensity(density), 2, Plan::Direct),
        };
        Ok(Self { family, dim, plan })
    }

    pub fn uniform_ball(d: usize) -> Result<Self, SpecError> {
        Self::new(Family::UniformBall { d })
    }

    pub fn uniform_sphere(d: usize) -> Result<Self, SpecError> {
        Self::new(Family::UniformSphere { d })
    }

    pub fn radial_power(d: usize, alpha: f64, atom: f64) -> Result<Self, SpecError> {
        Self::new(Family::RadialPower { d, alpha, atom })
    }

    pub fn sector(base: DistributionSpec, cap_center: Vec<f64>, cap_angle: f64) -> Result<Self, SpecError> {
        Self::new(Family::Sector {
            base: Box::new(base),
            cap_center,
            cap_angle,
        })
    }

    pub fn segments(directions: Vec<Vec<f64>>, probs: Vec<f64>) -> Result<Self, SpecError> {
        Self::new(Family::SegmentMixture { directions, probs })
    }

    pub fn circle(density: CircleDensity) -> Result<Self, SpecError> {
        Self::new(Family::CircleDensity(density))
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_spherically_symmetric(&self) -> bool {
        matches!(
            self.family,
            Family::UniformBall { .. } | Family::UniformSphere { .. } | Family::RadialPower { .. }
        )
    }

    pub fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        let mut buf = vec![0.0; self.dim];
        self.fill(rng, &mut buf);
        Point::new(buf).expect("samplers produce finite coordinates")
    }

    /// Appends `count` i.i.d. points to `cloud`.
    pub fn sample_into<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        count: usize,
        cloud: &mut PointCloud,
    ) -> Result<(), SpecError> {
        if cloud.dim() != self.dim {
            return Err(SpecError::DimensionMismatch {
                expected: self.dim,
                got: cloud.dim(),
            });
        }
        let mut buf = vec![0.0; self.dim];
        for _ in 0..count {
            let eta = self.fill(rng, &mut buf);
            cloud.push_with_radial_deficit(&buf, eta)?;
        }
        Ok(())
    }

    /// Writes one point into `out` and returns its radial deficit `1 - ‖x‖`
    /// as drawn, before coordinate rounding.
    fn fill<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) -> f64 {
        match (&self.family, &self.plan) {
            (Family::UniformBall { d }, _) => {
                uniform_direction(rng, out);
                let r = libm::pow(rng.random::<f64>(), 1.0 / *d as f64);
                out.iter_mut().for_each(|x| *x *= r);
                1.0 - r
            }
            (Family::UniformSphere { .. }, _) => {
                uniform_direction(rng, out);
                0.0
            }
            (Family::RadialPower { alpha, atom, .. }, _) => {
                uniform_direction(rng, out);
                let eta = if *atom > 0.0 && rng.random::<f64>() < *atom {
                    0.0
                } else {
                    libm::pow(rng.random::<f64>(), 1.0 / alpha)
                };
                let r = 1.0 - eta;
                out.iter_mut().for_each(|x| *x *= r);
                eta
            }
            (Family::Sector { base, cap_center, .. }, Plan::Sector { min_abs_cos }) => loop {
                let eta = base.fill(rng, out);
                let Some(min_abs_cos) = min_abs_cos else { break eta };
                let dot: f64 = out.iter().zip(cap_center).map(|(x, c)| x * c).sum();
                let norm = libm::sqrt(out.iter().map(|x| x * x).sum());
                if dot.abs() >= norm * min_abs_cos {
                    break eta;
                }
            },
            (Family::SegmentMixture { directions, .. }, Plan::Segments { cumulative }) => {
                let u = rng.random::<f64>();
                let i = cumulative.partition_point(|&c| c <= u).min(directions.len() - 1);
                let t = 2.0 * rng.random::<f64>() - 1.0;
                out.iter_mut().zip(&directions[i]).for_each(|(o, x)| *o = t * x);
                1.0 - t.abs()
            }
            (Family::CircleDensity(density), _) => {
                let theta = loop {
                    let theta = 2.0 * PI * rng.random::<f64>();
                    if rng.random::<f64>() * density.sup_bound() <= density.eval(theta) {
                        break theta;
                    }
                };
                out[0] = libm::cos(theta);
                out[1] = libm::sin(theta);
                0.0
            }
            _ => unreachable!("plan always matches family"),
        }
    }
}

/// Exactly `n` i.i.d. points.
pub fn sample_binomial_process<R: Rng + ?Sized>(
    spec: &DistributionSpec,
    n: usize,
    rng: &mut R,
) -> Result<PointCloud, SpecError> {
    if n == 0 {
        return Err(SpecError::InvalidIntensity);
    }
    let mut cloud = PointCloud::with_capacity(spec.dim(), n)?;
    spec.sample_into(rng, n, &mut cloud)?;
    Ok(cloud)
}

/// `N ~ Poisson(n_mean)` i.i.d. points; the result may be empty.
pub fn sample_poisson_process<R: Rng + ?Sized>(
    spec: &DistributionSpec,
    n_mean: f64,
    rng: &mut R,
) -> Result<PointCloud, SpecError> {
    let count = poisson_count(n_mean, rng)?;
    let mut cloud = PointCloud::with_capacity(spec.dim(), count)?;
    spec.sample_into(rng, count, &mut cloud)?;
    Ok(cloud)
}

pub fn poisson_count<R: Rng + ?Sized>(n_mean: f64, rng: &mut R) -> Result<usize, SpecError> {
    if !(n_mean > 0.0) || !n_mean.is_finite() {
        return Err(SpecError::InvalidIntensity);
    }
    let poisson = Poisson::new(n_mean).map_err(|_| SpecError::InvalidIntensity)?;
    Ok(poisson.sample(rng) as usize)
}

/// Normalised standard Gaussian vector.
fn uniform_direction<R: Rng + ?Sized>(rng: &mut R, out: &mut [f64]) {
    loop {
        for x in out.iter_mut() {
            *x = StandardNormal.sample(rng);
        }
        let norm = libm::sqrt(out.iter().map(|x| x * x).sum());
        if norm > 0.0 {
            out.iter_mut().for_each(|x| *x /= norm);
            return;
        }
    }
}

fn check_dim(d: usize) -> Result<(), SpecError> {
    if d == 0 {
        Err(SpecError::InvalidDimension(d))
    } else {
        Ok(())
    }
}

fn unit_vector(v: Vec<f64>, d: usize) -> Result<Vec<f64>, SpecError> {
    if v.len() != d {
        return Err(SpecError::DimensionMismatch { expected: d, got: v.len() });
    }
    let norm = libm::sqrt(v.iter().map(|x| x * x).sum());
    if !((norm - 1.0).abs() <= UNIT_TOLERANCE) {
        return Err(SpecError::InvalidParameter("direction vectors must have unit norm"));
    }
    Ok(v.into_iter().map(|x| x / norm).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_points_have_unit_norm() {
        let spec = DistributionSpec::uniform_sphere(4).unwrap();
        let mut rng = RngHandle::from_seed(3);
        for _ in 0..1000 {
            assert!((spec.sample_point(&mut rng).norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_specs() {
        assert_eq!(DistributionSpec::uniform_ball(0), Err(SpecError::InvalidDimension(0)));
        assert!(DistributionSpec::radial_power(3, 0.0, 0.0).is_err());
        assert!(DistributionSpec::radial_power(3, 1.0, 1.5).is_err());
        assert!(DistributionSpec::radial_power(3, 0.0, 1.0).is_ok());
        assert!(matches!(
            DistributionSpec::segments(vec![vec![1.0, 0.0], vec![0.0, 1.0]], vec![0.5, 0.6]),
            Err(SpecError::BadProbabilities(_))
        ));
        assert!(DistributionSpec::segments(vec![vec![1.0, 0.0], vec![-1.0, 0.0]], vec![0.5, 0.5]).is_err());
        assert!(DistributionSpec::segments(vec![vec![2.0, 0.0]], vec![1.0]).is_err());
        let ball = DistributionSpec::uniform_ball(3).unwrap();
        assert!(DistributionSpec::sector(ball.clone(), vec![1.0, 0.0], 0.3).is_err());
        let seg = DistributionSpec::segments(vec![vec![1.0, 0.0, 0.0]], vec![1.0]).unwrap();
        assert!(DistributionSpec::sector(seg, vec![1.0, 0.0, 0.0], 0.3).is_err());
    }

    #[test]
    fn thin_sector_is_refused() {
        let ball = DistributionSpec::uniform_ball(3).unwrap();
        // acceptance (1 - cos θ) ≈ θ²/2 = 5e-7
        let err = DistributionSpec::sector(ball.clone(), vec![0.0, 0.0, 1.0], 1e-3).unwrap_err();
        assert!(matches!(err, SpecError::SectorTooThin(_)));
        assert!(DistributionSpec::sector(ball, vec![0.0, 0.0, 1.0], 0.01).is_ok());
    }

    #[test]
    fn binomial_needs_points() {
        let spec = DistributionSpec::uniform_ball(2).unwrap();
        let mut rng = RngHandle::from_seed(1);
        assert_eq!(sample_binomial_process(&spec, 0, &mut rng), Err(SpecError::InvalidIntensity));
        assert_eq!(sample_binomial_process(&spec, 1, &mut rng).unwrap().len(), 1);
        assert!(sample_poisson_process(&spec, 0.0, &mut rng).is_err());
    }
}
