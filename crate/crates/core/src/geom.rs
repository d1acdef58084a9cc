//! Points, point clouds and the diameter of a finite point set.
//!
//! Two kernels compute the diameter. [`diameter_bruteforce`] scans every
//! unordered pair. [`diameter_pruned`] seeds a lower bound `d₀` with a few
//! farthest-point sweeps, discards every point that cannot be the endpoint
//! of a chord longer than `d₀`, and scans the survivors with an antipodal
//! window on the coordinate of largest spread. Both compare the same squared
//! distances, so they return the same `f64`.

use alloc::vec::Vec;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("empty point set")]
    EmptyPointSet,
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("diameter {0} is outside [0, 2] (impossible inside the unit ball)")]
    DiameterOutOfRange(f64),
    #[error("scaling requires n > 0 and gamma > 0 (got n = {n}, gamma = {gamma})")]
    InvalidScaling { n: f64, gamma: f64 },
}

/// Slack on diameters and norms when deciding that a point cannot matter.
const PRUNE_SLACK: f64 = 1e-9;
/// Relative slack on squared antipodal reach.
const REACH_SLACK_SQ: f64 = 1e-12;
/// Farthest-point sweeps used to seed the lower bound.
const SEED_SWEEPS: usize = 3;
/// Pairs this close (in squared distance) to the farthest one are
/// re-evaluated by [`min_chord_deficit`].
const REFINE_WINDOW_SQ: f64 = 1e-13;
/// Tolerance above 2 accepted by [`scaled_deficit`].
const DIAMETER_TOLERANCE: f64 = 1e-9;

/// A single point in `R^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self, GeomError> {
        if coords.is_empty() {
            return Err(GeomError::ZeroDimension);
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(GeomError::NonFinite);
        }
        Ok(Self(coords))
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn norm(&self) -> f64 {
        norm(&self.0)
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.0
    }
}

/// A finite list of points of a common dimension, stored row-major, with
/// the Euclidean norm of every point cached next to it.
///
/// Each point also carries its radial deficit `1 - ‖x‖`. Samplers that know
/// it exactly (a point drawn on the sphere has deficit 0, not the rounding
/// noise of its coordinates) record it with
/// [`PointCloud::push_with_radial_deficit`].
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    dim: usize,
    coords: Vec<f64>,
    norms: Vec<f64>,
    radial_deficits: Vec<f64>,
}

impl PointCloud {
    pub fn new(dim: usize) -> Result<Self, GeomError> {
        Self::with_capacity(dim, 0)
    }

    pub fn with_capacity(dim: usize, capacity: usize) -> Result<Self, GeomError> {
        if dim == 0 {
            return Err(GeomError::ZeroDimension);
        }
        Ok(Self {
            dim,
            coords: Vec::with_capacity(dim * capacity),
            norms: Vec::with_capacity(capacity),
            radial_deficits: Vec::with_capacity(capacity),
        })
    }

    pub fn from_points<I>(dim: usize, points: I) -> Result<Self, GeomError>
    where
        I: IntoIterator,
        I::Item: AsRef<[f64]>,
    {
        let mut cloud = Self::new(dim)?;
        for p in points {
            cloud.push(p.as_ref())?;
        }
        Ok(cloud)
    }

    pub fn push(&mut self, coords: &[f64]) -> Result<(), GeomError> {
        let n = norm(coords);
        self.push_checked(coords, n, 1.0 - n)
    }

    /// Pushes a point whose intended norm is `1 - radial_deficit`.
    pub fn push_with_radial_deficit(&mut self, coords: &[f64], radial_deficit: f64) -> Result<(), GeomError> {
        if !radial_deficit.is_finite() {
            return Err(GeomError::NonFinite);
        }
        self.push_checked(coords, norm(coords), radial_deficit)
    }

    fn push_checked(&mut self, coords: &[f64], norm: f64, radial_deficit: f64) -> Result<(), GeomError> {
        if coords.len() != self.dim {
            return Err(GeomError::DimensionMismatch {
                expected: self.dim,
                got: coords.len(),
            });
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(GeomError::NonFinite);
        }
        self.coords.extend_from_slice(coords);
        self.norms.push(norm);
        self.radial_deficits.push(radial_deficit);
        Ok(())
    }

    pub fn push_point(&mut self, point: &Point) -> Result<(), GeomError> {
        self.push(point.coords())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.norms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.norms.is_empty()
    }

    /// Coordinates of the `i`-th point.
    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    /// Cached norm of the `i`-th point.
    pub fn norm(&self, i: usize) -> f64 {
        self.norms[i]
    }

    /// `1 - ‖x_i‖`, exact when recorded by the sampler.
    pub fn radial_deficit(&self, i: usize) -> f64 {
        self.radial_deficits[i]
    }

    pub fn norms(&self) -> &[f64] {
        &self.norms
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    /// Largest cached norm, or 0 for an empty cloud.
    pub fn max_norm(&self) -> f64 {
        self.norms.iter().copied().fold(0.0, f64::max)
    }
}

/// Squared Euclidean distance. Every kernel goes through this function so
/// that their results agree bit for bit.
#[inline]
pub fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    libm::sqrt(a.iter().map(|x| x * x).sum())
}

/// Maximum over all unordered pairs. O(n²).
pub fn diameter_bruteforce(cloud: &PointCloud) -> Result<f64, GeomError> {
    if cloud.is_empty() {
        return Err(GeomError::EmptyPointSet);
    }
    let mut best = 0.0f64;
    for i in 0..cloud.len() {
        let p = cloud.point(i);
        for j in i + 1..cloud.len() {
            let d2 = dist_sq(p, cloud.point(j));
            if d2 > best {
                best = d2;
            }
        }
    }
    Ok(libm::sqrt(best))
}

/// Same value as [`diameter_bruteforce`], computed by [`farthest_pair`].
pub fn diameter_pruned(cloud: &PointCloud) -> Result<f64, GeomError> {
    farthest_pair(cloud).map(|p| p.diameter())
}

/// A farthest pair of a cloud, as found by [`farthest_pair`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FarthestPair {
    pub first: usize,
    pub second: usize,
    pub dist_sq: f64,
    /// Points left after norm pruning.
    pub candidates: usize,
}

impl FarthestPair {
    pub fn diameter(&self) -> f64 {
        libm::sqrt(self.dist_sq)
    }
}

/// Exact farthest pair with pruning.
///
/// A pair at distance at least `d₀` has `‖x‖ + ‖y‖ ≥ d₀`, so with `M` the
/// largest norm every point with `‖x‖ < d₀ - M` is dropped (inside the unit
/// ball this is the `‖x‖ < d₀ - 1` rule). For the survivors, the identity
/// `‖x+y‖² = 2‖x‖² + 2‖y‖² - ‖x-y‖²` bounds `|x_k + y_k|` on every axis, so
/// partners of `x` are looked up in a window around `-x_k` of the sorted
/// survivor coordinates. The window narrows as the incumbent improves.
pub fn farthest_pair(cloud: &PointCloud) -> Result<FarthestPair, GeomError> {
    let mut best = seed_pair(cloud)?;
    if cloud.len() == 1 {
        return Ok(best);
    }
    let index = AntipodalIndex::build(cloud, best.dist_sq);
    best.candidates = index.len();
    if index.len() < 2 {
        return Ok(best);
    }
    index.scan(cloud, best.dist_sq, |i, j, d2| {
        if d2 > best.dist_sq {
            best.first = i;
            best.second = j;
            best.dist_sq = d2;
        }
        best.dist_sq
    });
    Ok(best)
}

/// Smallest chord deficit `2 - ‖x - y‖` of a cloud, with its pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChordDeficit {
    pub first: usize,
    pub second: usize,
    pub deficit: f64,
}

/// `2 - ‖x_i - x_j‖` without cancellation, as
/// `(2(1-‖x‖²) + 2(1-‖y‖²) + ‖x+y‖²) / (2 + ‖x-y‖)` with `1 - ‖x‖²` taken
/// from the stored radial deficit. Near-antipodal pairs keep full relative
/// precision even when the deficit is a few ulps of 2.
pub fn chord_deficit(cloud: &PointCloud, i: usize, j: usize) -> f64 {
    let (x, y) = (cloud.point(i), cloud.point(j));
    let plus_sq: f64 = x.iter().zip(y).map(|(a, b)| (a + b) * (a + b)).sum();
    let (ex, ey) = (cloud.radial_deficit(i), cloud.radial_deficit(j));
    let gap = 2.0 * ex * (2.0 - ex) + 2.0 * ey * (2.0 - ey) + plus_sq;
    gap / (2.0 + libm::sqrt(dist_sq(x, y)))
}

/// Minimum of [`chord_deficit`] over all pairs.
///
/// The farthest pair by squared distance is found first; every pair within
/// a few ulps of it is then re-evaluated with [`chord_deficit`]. A singleton
/// has deficit 2.
pub fn min_chord_deficit(cloud: &PointCloud) -> Result<ChordDeficit, GeomError> {
    let far = farthest_pair(cloud)?;
    let mut best = ChordDeficit {
        first: far.first,
        second: far.second,
        deficit: 2.0,
    };
    if cloud.len() == 1 {
        return Ok(best);
    }
    let max_norm = cloud.max_norm();
    let threshold = far.dist_sq - REFINE_WINDOW_SQ * (1.0 + max_norm * max_norm);
    let index = AntipodalIndex::build(cloud, threshold);
    best.deficit = chord_deficit(cloud, far.first, far.second);
    index.scan(cloud, threshold, |i, j, d2| {
        if d2 >= threshold && i != j {
            let deficit = chord_deficit(cloud, i, j);
            if deficit < best.deficit {
                best = ChordDeficit { first: i, second: j, deficit };
            }
        }
        threshold
    });
    Ok(best)
}

/// Lower bound from a few farthest-point sweeps started at the point of
/// largest norm.
fn seed_pair(cloud: &PointCloud) -> Result<FarthestPair, GeomError> {
    let n = cloud.len();
    if n == 0 {
        return Err(GeomError::EmptyPointSet);
    }
    let anchor = argmax(cloud.norms().iter().copied());
    let mut best = FarthestPair {
        first: anchor,
        second: anchor,
        dist_sq: 0.0,
        candidates: n,
    };
    let mut from = anchor;
    for _ in 0..SEED_SWEEPS.min(n - 1) {
        let p = cloud.point(from);
        let far = argmax(cloud.points().map(|q| dist_sq(p, q)));
        let d2 = dist_sq(p, cloud.point(far));
        if d2 > best.dist_sq {
            best.first = from;
            best.second = far;
            best.dist_sq = d2;
        }
        if far == from {
            break;
        }
        from = far;
    }
    Ok(best)
}

/// Points that can still take part in a pair at squared distance
/// `bound_sq`, sorted along the axis of widest spread.
struct AntipodalIndex {
    order: Vec<usize>,
    keys: Vec<f64>,
    axis: usize,
    max_norm: f64,
}

impl AntipodalIndex {
    fn build(cloud: &PointCloud, bound_sq: f64) -> Self {
        let max_norm = cloud.max_norm();
        let cutoff = libm::sqrt(bound_sq.max(0.0)) - max_norm - PRUNE_SLACK * (1.0 + max_norm);
        let mut order: Vec<usize> = (0..cloud.len()).filter(|&i| cloud.norm(i) >= cutoff).collect();
        let axis = widest_axis(cloud, &order);
        order.sort_unstable_by(|&a, &b| cloud.point(a)[axis].total_cmp(&cloud.point(b)[axis]));
        let keys = order.iter().map(|&i| cloud.point(i)[axis]).collect();
        Self { order, keys, axis, max_norm }
    }

    fn len(&self) -> usize {
        self.order.len()
    }

    /// Calls `visit(i, j, ‖x_i - x_j‖²)` for every ordered pair of survivors
    /// that can reach squared distance `bound_sq`; `visit` returns the bound
    /// to use from then on.
    fn scan<F: FnMut(usize, usize, f64) -> f64>(&self, cloud: &PointCloud, mut bound_sq: f64, mut visit: F) {
        let scale = 1.0 + self.max_norm * self.max_norm;
        let max_sq = self.max_norm * self.max_norm;
        for &i in &self.order {
            let x = cloud.point(i);
            let nx = cloud.norm(i);
            let reach_sq = 2.0 * nx * nx + 2.0 * max_sq - bound_sq + REACH_SLACK_SQ * scale;
            if reach_sq < 0.0 {
                continue;
            }
            let reach = libm::sqrt(reach_sq) + PRUNE_SLACK * 1e-3 * scale;
            let lo = -x[self.axis] - reach;
            let hi = -x[self.axis] + reach;
            let start = self.keys.partition_point(|&v| v < lo);
            for (&key, &j) in self.keys[start..].iter().zip(&self.order[start..]) {
                if key > hi {
                    break;
                }
                bound_sq = visit(i, j, dist_sq(x, cloud.point(j)));
            }
        }
    }
}

/// `n^(2/γ) (2 - diam)`.
pub fn scaled_deficit(diam: f64, n: f64, gamma: f64) -> Result<f64, GeomError> {
    if !diam.is_finite() || !(0.0..=2.0 + DIAMETER_TOLERANCE).contains(&diam) {
        return Err(GeomError::DiameterOutOfRange(diam));
    }
    scale_deficit(2.0 - diam, n, gamma)
}

/// `n^(2/γ) deficit` for a deficit `2 - diam` computed directly, for example
/// by [`min_chord_deficit`]; negative round-off is clamped to 0.
pub fn scale_deficit(deficit: f64, n: f64, gamma: f64) -> Result<f64, GeomError> {
    if !deficit.is_finite() || !(-DIAMETER_TOLERANCE..=2.0).contains(&deficit) {
        return Err(GeomError::DiameterOutOfRange(2.0 - deficit));
    }
    if !(n > 0.0 && gamma > 0.0) || !n.is_finite() || !gamma.is_finite() {
        return Err(GeomError::InvalidScaling { n, gamma });
    }
    Ok(libm::pow(n, 2.0 / gamma) * deficit.max(0.0))
}

fn argmax(values: impl Iterator<Item = f64>) -> usize {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, v) in values.enumerate() {
        if v > best.1 {
            best = (i, v);
        }
    }
    best.0
}

fn widest_axis(cloud: &PointCloud, indices: &[usize]) -> usize {
    (0..cloud.dim())
        .map(|k| {
            let (lo, hi) = indices.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &i| {
                let v = cloud.point(i)[k];
                (lo.min(v), hi.max(v))
            });
            (k, hi - lo)
        })
        .fold((0, f64::NEG_INFINITY), |acc, (k, spread)| if spread > acc.1 { (k, spread) } else { acc })
        .0
}
