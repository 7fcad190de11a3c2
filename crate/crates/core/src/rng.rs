//! Seeded random streams.
//!
//! Every stochastic operation takes an explicit stream. Independent
//! sub-streams are derived from `(master_seed, label, index)` so parallel
//! trials never share state and every run is reproducible from its seed.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};

/// The generator used throughout the crate.
pub type Stream = ChaCha20Rng;

/// Derives an independent stream for `(master_seed, label, index)`.
pub fn substream(master_seed: u64, label: &str, index: u64) -> Stream {
    let mut hasher = Sha256::new();
    hasher.update(master_seed.to_le_bytes());
    hasher.update((label.len() as u64).to_le_bytes());
    hasher.update(label.as_bytes());
    hasher.update(index.to_le_bytes());
    let digest = hasher.finalize();
    let mut seed = [0u8; 32];
    seed.copy_from_slice(&digest[..32]);
    ChaCha20Rng::from_seed(seed)
}

/// Derives a child seed, for APIs that take a plain `u64`.
pub fn derive_seed(master_seed: u64, label: &str, index: u64) -> u64 {
    use rand::RngCore;
    substream(master_seed, label, index).next_u64()
}
