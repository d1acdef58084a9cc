use alloc::vec::Vec;
use core::f64::consts::PI;

use super::SpecError;
use crate::limits::CIRCLE_QUADRATURE_NODES;

const NORMALISATION_TOLERANCE: f64 = 1e-8;

/// One term `a cos(k u - φ)` of a cosine mixture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CosineTerm {
    pub harmonic: u32,
    pub amplitude: f64,
    pub phase: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum AngularDensity {
    Uniform,
    /// `f(u) = (1 + Σ a_j cos(k_j u - φ_j)) / (2π)`.
    CosineMix(Vec<CosineTerm>),
}

/// Density of the angle of a point on the unit circle, with a bound used
/// for rejection sampling.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleDensity {
    kind: AngularDensity,
    sup_bound: f64,
}

impl CircleDensity {
    pub fn uniform() -> Self {
        Self {
            kind: AngularDensity::Uniform,
            sup_bound: 1.0 / (2.0 * PI),
        }
    }

    pub fn cosine_mix(terms: Vec<CosineTerm>) -> Result<Self, SpecError> {
        if terms.iter().any(|t| t.harmonic == 0) {
            return Err(SpecError::InvalidParameter("cosine harmonics must be at least 1"));
        }
        if terms.iter().any(|t| !t.amplitude.is_finite() || !t.phase.is_finite()) {
            return Err(SpecError::InvalidParameter("cosine terms must be finite"));
        }
        let sup_bound = (1.0 + terms.iter().map(|t| t.amplitude.abs()).sum::<f64>()) / (2.0 * PI);
        let density = Self {
            kind: AngularDensity::CosineMix(terms),
            sup_bound,
        };
        density.check_normalised()?;
        Ok(density)
    }

    pub fn new(kind: AngularDensity) -> Result<Self, SpecError> {
        match kind {
            AngularDensity::Uniform => Ok(Self::uniform()),
            AngularDensity::CosineMix(terms) => Self::cosine_mix(terms),
        }
    }

    pub fn kind(&self) -> &AngularDensity {
        &self.kind
    }

    pub fn sup_bound(&self) -> f64 {
        self.sup_bound
    }

    pub fn eval(&self, u: f64) -> f64 {
        match &self.kind {
            AngularDensity::Uniform => 1.0 / (2.0 * PI),
            AngularDensity::CosineMix(terms) => {
                let s: f64 = terms
                    .iter()
                    .map(|t| t.amplitude * libm::cos(t.harmonic as f64 * u - t.phase))
                    .sum();
                (1.0 + s) / (2.0 * PI)
            }
        }
    }

    fn check_normalised(&self) -> Result<(), SpecError> {
        let n = CIRCLE_QUADRATURE_NODES;
        let h = 2.0 * PI / n as f64;
        let mut total = 0.0;
        for k in 0..n {
            let v = self.eval(k as f64 * h);
            if v < 0.0 {
                return Err(SpecError::InvalidParameter("circle density is negative"));
            }
            total += v * h;
        }
        if (total - 1.0).abs() > NORMALISATION_TOLERANCE {
            return Err(SpecError::InvalidParameter("circle density does not integrate to 1"));
        }
        Ok(())
    }
}
