//! Seeded randomness.
//!
//! Every random quantity in the crate is drawn from ChaCha8 (`rand_chacha`),
//! a counter-based generator. A 64-bit seed is expanded with
//! `SeedableRng::seed_from_u64` and each consumer reads its own 64-bit
//! stream, so two consumers sharing a seed never see overlapping output.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream ids. Changing any of these changes every generated experiment.
pub mod streams {
    pub const SIGNS: u64 = 1;
    pub const SAMPLE: u64 = 2;
    pub const FRAME: u64 = 3;
    pub const RANDSVD_LEFT: u64 = 4;
    pub const RANDSVD_RIGHT: u64 = 5;
    pub const POWER_START: u64 = 6;
    pub const TEST: u64 = 99;
}

/// Generator for `(seed, stream)`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// SplitMix64 finalizer; a bijection on `u64` used to combine seed parts.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Order-sensitive combination of seed parts: folds each part into the
/// running state with [`mix64`].
pub fn derive_seed(parts: &[u64]) -> u64 {
    parts
        .iter()
        .fold(0x005E_ED0F_C0FF_EE00_u64, |acc, &p| mix64(acc ^ mix64(p)))
}
