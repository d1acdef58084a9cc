//! JSON form of a [`DistributionSpec`].
//!
//! ```json
//! {"family": "sector", "d": 3, "cap_center": [0, 0, 1], "cap_angle": 0.5,
//!  "base": {"family": "radial-power", "d": 3, "alpha": 2}}
//! ```

use std::path::Path;

use diamlab_core::sampler::{AngularDensity, CircleDensity, CosineTerm};
use diamlab_core::{DistributionSpec, Family, SpecError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpecJsonError {
    #[error("{0}")]
    Missing(String),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("spec json: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("reading {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyName {
    UniformBall,
    #[serde(alias = "uniform-sphere")]
    #[value(alias = "uniform-sphere")]
    Sphere,
    RadialPower,
    Sector,
    Segments,
    Circle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum DensityKind {
    Uniform,
    #[value(name = "cosine_mix", alias = "cosine-mix")]
    CosineMix,
}

/// Angular density on the circle; `params` rows are `[harmonic, amplitude, phase]`
/// for `f(u) = (1 + Σ a cos(k u - φ)) / (2π)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityJson {
    pub kind: DensityKind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub params: Vec<[f64; 3]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecJson {
    pub family: FamilyName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atom: Option<f64>,
    /// Base law of a sector; a uniform ball when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<Box<SpecJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap_center: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap_angle: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub directions: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probs: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<DensityJson>,
}

fn need<T: Clone>(field: &Option<T>, family: &str, name: &str) -> Result<T, SpecJsonError> {
    field
        .clone()
        .ok_or_else(|| SpecJsonError::Missing(format!("family {family} requires {name}")))
}

impl SpecJson {
    pub fn empty(family: FamilyName) -> Self {
        Self {
            family,
            d: None,
            alpha: None,
            atom: None,
            base: None,
            cap_center: None,
            cap_angle: None,
            directions: None,
            probs: None,
            density: None,
        }
    }

    pub fn from_json_str(text: &str) -> Result<Self, SpecJsonError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Inline JSON when `arg` starts with `{`, otherwise a file path.
    pub fn from_arg(arg: &str) -> Result<Self, SpecJsonError> {
        if arg.trim_start().starts_with('{') {
            return Self::from_json_str(arg);
        }
        let text = std::fs::read_to_string(Path::new(arg)).map_err(|source| SpecJsonError::Io {
            path: arg.to_string(),
            source,
        })?;
        Self::from_json_str(&text)
    }

    pub fn build(&self) -> Result<DistributionSpec, SpecJsonError> {
        let spec = match self.family {
            FamilyName::UniformBall => DistributionSpec::uniform_ball(need(&self.d, "uniform-ball", "d")?)?,
            FamilyName::Sphere => DistributionSpec::uniform_sphere(need(&self.d, "sphere", "d")?)?,
            FamilyName::RadialPower => DistributionSpec::radial_power(
                need(&self.d, "radial-power", "d")?,
                self.alpha.unwrap_or(0.0),
                self.atom.unwrap_or(0.0),
            )?,
            FamilyName::Sector => {
                let base = match &self.base {
                    Some(base) => {
                        let mut base = (**base).clone();
                        base.d = base.d.or(self.d);
                        base.build()?
                    }
                    None => DistributionSpec::uniform_ball(need(&self.d, "sector", "d or base")?)?,
                };
                if let Some(d) = self.d.filter(|&d| d != base.dim()) {
                    return Err(SpecJsonError::Invalid(format!(
                        "sector d = {d} but its base has dimension {}",
                        base.dim()
                    )));
                }
                DistributionSpec::sector(
                    base,
                    need(&self.cap_center, "sector", "cap_center")?,
                    need(&self.cap_angle, "sector", "cap_angle")?,
                )?
            }
            FamilyName::Segments => {
                let directions = need(&self.directions, "segments", "directions")?;
                let probs = match &self.probs {
                    Some(p) => p.clone(),
                    None => vec![1.0 / directions.len().max(1) as f64; directions.len()],
                };
                DistributionSpec::segments(directions, probs)?
            }
            FamilyName::Circle => {
                let density = match &self.density {
                    None => CircleDensity::uniform(),
                    Some(DensityJson { kind: DensityKind::Uniform, params }) if params.is_empty() => CircleDensity::uniform(),
                    Some(DensityJson { kind: DensityKind::Uniform, .. }) => {
                        return Err(SpecJsonError::Invalid("a uniform density takes no params".into()))
                    }
                    Some(DensityJson { kind: DensityKind::CosineMix, params }) => {
                        CircleDensity::cosine_mix(params.iter().map(cosine_term).collect::<Result<_, _>>()?)?
                    }
                };
                DistributionSpec::circle(density)?
            }
        };
        if let Some(d) = self.d.filter(|&d| d != spec.dim()) {
            return Err(SpecJsonError::Invalid(format!(
                "d = {d} does not match the family's dimension {}",
                spec.dim()
            )));
        }
        Ok(spec)
    }

    /// The fully resolved JSON form of a validated spec.
    pub fn from_spec(spec: &DistributionSpec) -> Self {
        let d = Some(spec.dim());
        match spec.family() {
            Family::UniformBall { .. } => Self { d, ..Self::empty(FamilyName::UniformBall) },
            Family::UniformSphere { .. } => Self { d, ..Self::empty(FamilyName::Sphere) },
            Family::RadialPower { alpha, atom, .. } => Self {
                d,
                alpha: Some(*alpha),
                atom: Some(*atom),
                ..Self::empty(FamilyName::RadialPower)
            },
            Family::Sector { base, cap_center, cap_angle } => Self {
                d,
                base: Some(Box::new(Self::from_spec(base))),
                cap_center: Some(cap_center.clone()),
                cap_angle: Some(*cap_angle),
                ..Self::empty(FamilyName::Sector)
            },
            Family::SegmentMixture { directions, probs } => Self {
                d,
                directions: Some(directions.clone()),
                probs: Some(probs.clone()),
                ..Self::empty(FamilyName::Segments)
            },
            Family::CircleDensity(density) => Self {
                d,
                density: Some(match density.kind() {
                    AngularDensity::Uniform => DensityJson {
                        kind: DensityKind::Uniform,
                        params: Vec::new(),
                    },
                    AngularDensity::CosineMix(terms) => DensityJson {
                        kind: DensityKind::CosineMix,
                        params: terms
                            .iter()
                            .map(|t| [t.harmonic as f64, t.amplitude, t.phase])
                            .collect(),
                    },
                }),
                ..Self::empty(FamilyName::Circle)
            },
        }
    }
}

fn cosine_term(row: &[f64; 3]) -> Result<CosineTerm, SpecJsonError> {
    let [k, amplitude, phase] = *row;
    if !(k >= 1.0 && k.fract() == 0.0 && k <= u32::MAX as f64) {
        return Err(SpecJsonError::Invalid(format!("harmonic {k} must be a positive integer")));
    }
    Ok(CosineTerm {
        harmonic: k as u32,
        amplitude,
        phase,
    })
}
