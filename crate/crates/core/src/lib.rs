//! Maximal interpoint distance of random samples in the unit ball.
//!
//! This crate is the allocation-only core of the laboratory: exact and
//! pruned farthest-pair kernels ([`geom`]), samplers for every supported
//! point distribution together with binomial and Poisson processes
//! ([`sampler`]), closed-form limit laws of the scaled diameter deficit
//! ([`limits`]) and the goodness-of-fit statistics used to compare the two
//! ([`stats`], [`oracle`]).
//!
//! The scaled deficit of a sample with diameter `D` drawn at intensity `n` is
//! `n^(2/γ) (2 - D)`; as `n` grows its law converges to
//! `1 - exp(-σ₀ t^γ / 2)` for continuous directional measures, or to a
//! product form when the distribution lives on finitely many diameters.
//!
//! The crate is `no_std` and needs only `alloc`.

#![cfg_attr(not(test), no_std)]
#![deny(rust_2018_idioms)]
// `!(x > 0.0)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod geom;
pub mod limits;
pub mod oracle;
pub mod sampler;
pub mod stats;

pub use geom::{
    diameter_bruteforce, diameter_pruned, farthest_pair, min_chord_deficit, scaled_deficit,
    FarthestPair, GeomError, Point, PointCloud,
};
pub use limits::{aprs_envelope, limit_cdf, LimitError, LimitLaw};
pub use sampler::{
    sample_binomial_process, sample_poisson_process, DistributionSpec, Family, RngHandle,
    SpecError,
};
pub use stats::{ks_distance, ks_two_sample, EmpiricalCdf};
