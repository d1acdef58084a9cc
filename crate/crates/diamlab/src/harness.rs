//! Monte Carlo runner for the scaled diameter deficit.
//!
//! Every replication draws from its own stream `h(seed, r)`, so results do
//! not depend on how replications are scheduled over threads.

use diamlab_core::geom::{farthest_pair, min_chord_deficit, scale_deficit, scaled_deficit, GeomError};
use diamlab_core::limits::LimitError;
use diamlab_core::sampler::{derive_seed, sample_binomial_process, sample_poisson_process, SpecError};
use diamlab_core::stats::{ks_distance, ks_two_sample, StatsError};
use diamlab_core::{DistributionSpec, EmpiricalCdf, LimitLaw, RngHandle};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

const POISSON_STREAM: u64 = 0x504F_4953_534F_4E00;
const BINOMIAL_STREAM: u64 = 0x4249_4E4F_4D49_414C;
const TABLE_STREAM: u64 = 0x5441_424C_4500_0000;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Limit(#[from] LimitError),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error("no replication produced at least two points")]
    NoUsableReplications,
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

impl HarnessError {
    /// Errors that come from numerics rather than from the configuration.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Self::Geom(_) | Self::Stats(_) | Self::NoUsableReplications)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Process {
    Poisson,
    Binomial,
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub spec: DistributionSpec,
    /// Poisson mean, or the exact point count of a binomial process.
    pub n: f64,
    pub process: Process,
    pub replications: usize,
    pub seed: u64,
    /// Deficits are scaled by `n^(2/gamma)`.
    pub gamma: f64,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.replications == 0 {
            return Err(HarnessError::Config("replications must be at least 1".into()));
        }
        if !(self.gamma > 0.0) || !self.gamma.is_finite() {
            return Err(HarnessError::Config("gamma must be positive".into()));
        }
        match self.process {
            Process::Poisson if !(self.n > 0.0) || !self.n.is_finite() => {
                Err(HarnessError::Config("Poisson mean must be positive".into()))
            }
            Process::Binomial if !(self.n >= 2.0 && self.n.fract() == 0.0 && self.n <= usize::MAX as f64) => {
                Err(HarnessError::Config("binomial n must be an integer >= 2".into()))
            }
            _ => Ok(()),
        }
    }

    pub fn with_n(&self, n: f64) -> Self {
        Self { n, ..self.clone() }
    }
}

/// Outcome of one replication.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Replication {
    pub index: usize,
    pub points: usize,
    /// `None` when fewer than two points were realised.
    pub diameter: Option<f64>,
    pub scaled_deficit: f64,
    pub degenerate: bool,
}

pub(crate) fn pool(threads: Option<usize>) -> Result<rayon::ThreadPool, HarnessError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads.filter(|&t| t > 0) {
        builder = builder.num_threads(t);
    }
    builder.build().map_err(|e| HarnessError::ThreadPool(e.to_string()))
}

fn replicate(config: &ExperimentConfig, index: usize) -> Result<Replication, HarnessError> {
    let mut rng = RngHandle::for_stream(config.seed, index as u64);
    let cloud = match config.process {
        Process::Poisson => sample_poisson_process(&config.spec, config.n, &mut rng)?,
        Process::Binomial => sample_binomial_process(&config.spec, config.n as usize, &mut rng)?,
    };
    if cloud.len() < 2 {
        return Ok(Replication {
            index,
            points: cloud.len(),
            diameter: None,
            scaled_deficit: scaled_deficit(0.0, config.n, config.gamma)?,
            degenerate: true,
        });
    }
    let diameter = farthest_pair(&cloud)?.diameter();
    let deficit = min_chord_deficit(&cloud)?.deficit;
    Ok(Replication {
        index,
        points: cloud.len(),
        diameter: Some(diameter),
        scaled_deficit: scale_deficit(deficit, config.n, config.gamma)?,
        degenerate: false,
    })
}

/// All replications in index order. `threads = None` uses every core.
pub fn run_replications(config: &ExperimentConfig, threads: Option<usize>) -> Result<Vec<Replication>, HarnessError> {
    config.validate()?;
    pool(threads)?.install(|| {
        (0..config.replications)
            .into_par_iter()
            .map(|r| replicate(config, r))
            .collect()
    })
}

pub fn ecdf_of(replications: &[Replication]) -> Result<EmpiricalCdf, HarnessError> {
    let degenerate = replications.iter().filter(|r| r.degenerate).count();
    if degenerate == replications.len() {
        return Err(HarnessError::NoUsableReplications);
    }
    let samples = replications.iter().map(|r| r.scaled_deficit).collect();
    Ok(EmpiricalCdf::from_samples(samples)?.with_degenerate(degenerate))
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<EmpiricalCdf, HarnessError> {
    run_experiment_with_threads(config, None)
}

pub fn run_experiment_with_threads(config: &ExperimentConfig, threads: Option<usize>) -> Result<EmpiricalCdf, HarnessError> {
    ecdf_of(&run_replications(config, threads)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TableRow {
    pub n: f64,
    pub ks: f64,
}

/// KS distance to `law` for each intensity in `n_list`; row `k` runs with
/// master seed `h(seed, k)`, so repeated intensities give independent rows.
pub fn convergence_table(
    config: &ExperimentConfig,
    n_list: &[f64],
    law: &LimitLaw,
    threads: Option<usize>,
) -> Result<Vec<TableRow>, HarnessError> {
    if n_list.len() < 2 {
        return Err(HarnessError::Config("n list needs at least two entries".into()));
    }
    if n_list.iter().any(|n| !(*n > 0.0) || !n.is_finite()) || n_list.windows(2).any(|w| w[0] > w[1]) {
        return Err(HarnessError::Config("n list must be positive and nondecreasing".into()));
    }
    n_list
        .iter()
        .enumerate()
        .map(|(k, &n)| {
            let row = ExperimentConfig {
                n,
                seed: derive_seed(config.seed, TABLE_STREAM + k as u64),
                ..config.clone()
            };
            let ecdf = run_experiment_with_threads(&row, threads)?;
            Ok(TableRow { n, ks: ks_distance(&ecdf, law) })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DepoissonisationReport {
    pub ks_poisson: f64,
    pub ks_binomial: f64,
    pub ks_cross: f64,
}

/// Runs the Poisson process of mean `n` and the binomial process with `n`
/// points on independent streams and compares both to `law` and to each
/// other.
pub fn depoissonisation_compare(
    spec: &DistributionSpec,
    n: usize,
    law: &LimitLaw,
    replications: usize,
    seed: u64,
    threads: Option<usize>,
) -> Result<DepoissonisationReport, HarnessError> {
    if n < 2 {
        return Err(HarnessError::Config("n must be at least 2".into()));
    }
    let base = ExperimentConfig {
        spec: spec.clone(),
        n: n as f64,
        process: Process::Poisson,
        replications,
        seed: derive_seed(seed, POISSON_STREAM),
        gamma: law.gamma(),
    };
    let poisson = run_experiment_with_threads(&base, threads)?;
    let binomial = run_experiment_with_threads(
        &ExperimentConfig {
            process: Process::Binomial,
            seed: derive_seed(seed, BINOMIAL_STREAM),
            ..base
        },
        threads,
    )?;
    Ok(DepoissonisationReport {
        ks_poisson: ks_distance(&poisson, law),
        ks_binomial: ks_distance(&binomial, law),
        ks_cross: ks_two_sample(&poisson, &binomial),
    })
}
