//! Seeded generation of random t-sparse set systems and derived random
//! objects.
//!
//! Every column is a uniformly random t-subset of `[m]`, drawn independently
//! per element. All randomness comes from ChaCha12 keyed by the caller's
//! 64-bit seed; per-trial streams use the cipher's stream parameter, so
//! parallel trials never share generator state and output is identical
//! across platforms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::set_system::SetSystem;

/// Parameters of the random t-sparse model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleConfig {
    pub n: usize,
    pub m: usize,
    pub t: usize,
    pub seed: u64,
}

/// ChaCha12 generator for `(seed, stream)`. Distinct streams under the same
/// seed are independent.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Samples a random t-sparse set system: each element's column is a uniform
/// t-subset of `[m]`, columns mutually independent. Deterministic per config.
pub fn sample_t_sparse(cfg: &SampleConfig) -> Result<SetSystem> {
    if cfg.t > cfg.m {
        return Err(Error::SparsityTooLarge { t: cfg.t, m: cfg.m });
    }
    let mut rng = stream_rng(cfg.seed, 0);
    let columns = (0..cfg.n)
        .map(|_| sample_t_subset(cfg.m, cfg.t, &mut rng))
        .collect();
    SetSystem::new(cfg.m, columns)
}

/// Uniform t-subset of `[m]` via partial Fisher-Yates, returned sorted.
pub fn sample_t_subset(m: usize, t: usize, rng: &mut impl Rng) -> Vec<usize> {
    // Swap-and-remember variant: only the touched prefix positions are kept,
    // in O(t) extra space.
    let mut swapped: std::collections::HashMap<usize, usize> = std::collections::HashMap::new();
    let mut picked = Vec::with_capacity(t);
    for k in 0..t {
        let j = rng.random_range(k..m);
        let vj = *swapped.get(&j).unwrap_or(&j);
        let vk = *swapped.get(&k).unwrap_or(&k);
        picked.push(vj);
        swapped.insert(j, vk);
    }
    picked.sort_unstable();
    picked
}

/// Bernoulli(p) element subset of `0..n`, deterministic per seed.
pub fn sample_subset(n: usize, p: f64, seed: u64) -> Vec<usize> {
    let mut rng = stream_rng(seed, 1);
    (0..n).filter(|_| rng.random::<f64>() < p).collect()
}
