//! Self-checks run by `diamlab oracle`: the pruned diameter kernel against
//! brute force, and simulated segment ranges against their exact law.

use diamlab_core::geom::{diameter_bruteforce, diameter_pruned};
use diamlab_core::oracle::segment_range_cdf;
use diamlab_core::sampler::{derive_seed, CircleDensity, CosineTerm};
use diamlab_core::stats::{kolmogorov_band, ks_distance_with};
use diamlab_core::{sample_binomial_process, DistributionSpec, RngHandle};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::harness::{pool, run_experiment_with_threads, ExperimentConfig, HarnessError, Process};

pub const ORACLE_DIMS: [usize; 3] = [2, 3, 5];
pub const ORACLE_MAX_POINTS: usize = 2000;
const KOLMOGOROV_99: f64 = 1.63;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelOracleReport {
    pub passed: usize,
    pub total: usize,
    /// Case indices where the kernels disagree.
    pub mismatches: Vec<usize>,
}

impl KernelOracleReport {
    pub fn ok(&self) -> bool {
        self.passed == self.total
    }
}

/// The family used for oracle case `k`; cycles through every sampler family.
pub fn oracle_family(k: usize, d: usize) -> DistributionSpec {
    let axis = |i: usize| -> Vec<f64> { (0..d).map(|j| if j == i % d { 1.0 } else { 0.0 }).collect() };
    let spec = match k % 7 {
        0 => DistributionSpec::uniform_ball(d),
        1 => DistributionSpec::uniform_sphere(d),
        2 => DistributionSpec::radial_power(d, 0.5, 0.0),
        3 => DistributionSpec::radial_power(d, 2.0, 0.25),
        4 => DistributionSpec::sector(DistributionSpec::uniform_ball(d).expect("valid ball"), axis(1), 0.7),
        5 => {
            let dirs: Vec<Vec<f64>> = (0..d).map(axis).collect();
            let probs = vec![1.0 / d as f64; d];
            DistributionSpec::segments(dirs, probs)
        }
        _ if d == 2 => DistributionSpec::circle(
            CircleDensity::cosine_mix(vec![CosineTerm { harmonic: 1, amplitude: 0.8, phase: 0.0 }])
                .expect("valid density"),
        ),
        _ => DistributionSpec::uniform_sphere(d),
    };
    spec.expect("oracle families are valid")
}

/// Compares [`diameter_pruned`] with [`diameter_bruteforce`] on `cases`
/// random clouds with `d ∈ {2, 3, 5}` and between 1 and 2000 points.
pub fn kernel_oracle(cases: usize, seed: u64, threads: Option<usize>) -> Result<KernelOracleReport, HarnessError> {
    let outcomes: Vec<bool> = pool(threads)?.install(|| {
        (0..cases)
            .into_par_iter()
        .map(|k| -> Result<bool, HarnessError> {
            let mut rng = RngHandle::for_stream(seed, k as u64);
            let d = ORACLE_DIMS[rng.random_range(0..ORACLE_DIMS.len())];
            let n = rng.random_range(1..=ORACLE_MAX_POINTS);
            let cloud = sample_binomial_process(&oracle_family(k, d), n, &mut rng)?;
            Ok(diameter_pruned(&cloud)?.to_bits() == diameter_bruteforce(&cloud)?.to_bits())
        })
        .collect::<Result<_, _>>()
    })?;
    let mismatches: Vec<usize> = outcomes.iter().enumerate().filter(|(_, ok)| !**ok).map(|(k, _)| k).collect();
    Ok(KernelOracleReport {
        passed: cases - mismatches.len(),
        total: cases,
        mismatches,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SegmentOracleReport {
    pub n: usize,
    pub replications: usize,
    pub ks: f64,
    pub band: f64,
}

impl SegmentOracleReport {
    pub fn ok(&self) -> bool {
        self.ks <= self.band
    }
}

/// KS distance between simulated `n (2 - diam)` for `n` uniform points on
/// one diameter and the exact range law, against the 99 % Kolmogorov band.
pub fn segment_oracle(
    n: usize,
    replications: usize,
    seed: u64,
    threads: Option<usize>,
) -> Result<SegmentOracleReport, HarnessError> {
    let spec = DistributionSpec::segments(vec![vec![1.0, 0.0]], vec![1.0])?;
    let config = ExperimentConfig {
        spec,
        n: n as f64,
        process: Process::Binomial,
        replications,
        seed: derive_seed(seed, 0x5345_474D),
        gamma: 2.0,
    };
    let ecdf = run_experiment_with_threads(&config, threads)?;
    let ks = ks_distance_with(&ecdf, |t| segment_range_cdf(n as u64, t));
    Ok(SegmentOracleReport {
        n,
        replications,
        ks,
        band: kolmogorov_band(KOLMOGOROV_99, replications),
    })
}
