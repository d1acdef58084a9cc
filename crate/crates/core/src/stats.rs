//! Empirical CDFs and Kolmogorov–Smirnov distances.

use alloc::vec::Vec;

use thiserror::Error;

use crate::limits::LimitLaw;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error("empirical cdf needs at least one sample")]
    Empty,
    #[error("non-finite sample")]
    NonFinite,
}

/// Sorted samples with the right-continuous step CDF
/// `F̂(t) = #{x_i ≤ t} / n`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf {
    samples: Vec<f64>,
    degenerate: usize,
}

impl EmpiricalCdf {
    pub fn from_samples(mut samples: Vec<f64>) -> Result<Self, StatsError> {
        if samples.is_empty() {
            return Err(StatsError::Empty);
        }
        if samples.iter().any(|x| !x.is_finite()) {
            return Err(StatsError::NonFinite);
        }
        samples.sort_unstable_by(f64::total_cmp);
        Ok(Self { samples, degenerate: 0 })
    }

    /// Records how many samples came from degenerate replications.
    pub fn with_degenerate(mut self, count: usize) -> Self {
        self.degenerate = count;
        self
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn degenerate(&self) -> usize {
        self.degenerate
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.samples.partition_point(|&x| x <= t) as f64 / self.len() as f64
    }

    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.len() as f64
    }
}

/// One-sample KS statistic against a continuous or step reference CDF:
/// the largest of `|F̂(t_i) - F(t_i)|` and `|F̂(t_i⁻) - F(t_i)|` over the
/// distinct sample points.
pub fn ks_distance_with<F: Fn(f64) -> f64>(ecdf: &EmpiricalCdf, cdf: F) -> f64 {
    let xs = ecdf.samples();
    let n = xs.len() as f64;
    let mut worst = 0.0f64;
    let mut i = 0;
    while i < xs.len() {
        let t = xs[i];
        let mut j = i + 1;
        while j < xs.len() && xs[j] == t {
            j += 1;
        }
        let f = cdf(t);
        let below = i as f64 / n;
        let at = j as f64 / n;
        worst = worst.max((at - f).abs()).max((below - f).abs());
        i = j;
    }
    worst
}

pub fn ks_distance(ecdf: &EmpiricalCdf, law: &LimitLaw) -> f64 {
    ks_distance_with(ecdf, |t| law.cdf(t.max(0.0)).unwrap_or(0.0))
}

/// Two-sample KS statistic `sup_t |F̂_a(t) - F̂_b(t)|`.
pub fn ks_two_sample(a: &EmpiricalCdf, b: &EmpiricalCdf) -> f64 {
    let (xs, ys) = (a.samples(), b.samples());
    let (nx, ny) = (xs.len() as f64, ys.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut worst = 0.0f64;
    while i < xs.len() && j < ys.len() {
        let t = xs[i].min(ys[j]);
        while i < xs.len() && xs[i] <= t {
            i += 1;
        }
        while j < ys.len() && ys[j] <= t {
            j += 1;
        }
        worst = worst.max((i as f64 / nx - j as f64 / ny).abs());
    }
    worst
}

/// `c / √n`: the two-sided Kolmogorov band for `n` samples; `c = 1.63`
/// corresponds to 99 % and `c = 1.36` to 95 % confidence.
pub fn kolmogorov_band(c: f64, n: usize) -> f64 {
    c / libm::sqrt(n as f64)
}
