use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Deterministic generator for a base seed.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent deterministic stream for one trial of a batch.
///
/// Streams for distinct `index` never overlap, so trials may run in any
/// order (or concurrently) without changing results.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
