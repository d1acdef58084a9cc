use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Deterministic random stream identified by a 64-bit seed.
///
/// Backed by ChaCha8, whose output does not depend on the platform. A handle
/// is not meant to be shared between threads; derive one per job with
/// [`RngHandle::for_stream`].
#[derive(Debug, Clone)]
pub struct RngHandle {
    seed: u64,
    inner: ChaCha8Rng,
}

impl RngHandle {
    pub fn from_seed(seed: u64) -> Self {
        Self {
            seed,
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Handle for job `stream` of a run with master seed `master`.
    pub fn for_stream(master: u64, stream: u64) -> Self {
        Self::from_seed(derive_seed(master, stream))
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

impl RngCore for RngHandle {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

/// SplitMix64 finaliser.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `h(master, stream)`: a seed for one replication or sub-run.
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    mix64(master ^ mix64(stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn same_seed_same_stream() {
        let mut a = RngHandle::from_seed(42);
        let mut b = RngHandle::from_seed(42);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn derived_seeds_are_distinct() {
        let seeds: HashSet<u64> = (0..10_000).map(|r| derive_seed(7, r)).collect();
        assert_eq!(seeds.len(), 10_000);
        assert_ne!(derive_seed(7, 0), derive_seed(8, 0));
    }

    #[test]
    fn stream_is_frozen() {
        // guards against silent changes of the generator or seeding scheme
        let mut r = RngHandle::for_stream(1, 0);
        let first = r.next_u64();
        let mut again = RngHandle::from_seed(derive_seed(1, 0));
        assert_eq!(first, again.next_u64());
        assert_eq!(mix64(0), 0);
    }
}
