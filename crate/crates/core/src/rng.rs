//! Portable, seedable random number generation.
//!
//! Everything stochastic in this crate draws from ChaCha20 keyed by a
//! 64-bit seed, with independent streams selecting sub-generators (one per
//! mode, per run, ...). The uniform and normal transforms below are spelled
//! out rather than pulled from a distributions crate so the exact byte
//! stream -> sample mapping is documented and reproducible across
//! implementations.

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

/// ChaCha20 generator for `seed`, positioned on `stream`.
pub fn chacha(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform draw in `[0, 1)` from the top 53 bits of one `u64`.
pub fn uniform_01(rng: &mut ChaCha20Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform draw in `(0, 1]`; never returns 0 so it is safe under `ln`.
fn uniform_01_open_low(rng: &mut ChaCha20Rng) -> f64 {
    ((rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Standard normal draw via the basic Box-Muller transform:
/// `z = sqrt(-2 ln u1) * cos(2 pi u2)` with `u1 in (0,1]`, `u2 in [0,1)`.
///
/// One value per call (the sine companion is discarded) so the mapping
/// from generator output to samples stays one-to-two-words.
pub fn standard_normal(rng: &mut ChaCha20Rng) -> f64 {
    let u1 = uniform_01_open_low(rng);
    let u2 = uniform_01(rng);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Uniform draw in `(-a, a)`.
pub fn uniform_symmetric(rng: &mut ChaCha20Rng, a: f64) -> f64 {
    a * (2.0 * uniform_01(rng) - 1.0)
}

/// In-place Fisher-Yates shuffle. Index selection uses `next_u64() % k`,
/// which is deterministic and portable; the modulo bias is irrelevant at
/// the sample counts used here.
pub fn shuffle<T>(rng: &mut ChaCha20Rng, items: &mut [T]) {
    for i in (1..items.len()).rev() {
        let j = (rng.next_u64() % (i as u64 + 1)) as usize;
        items.swap(i, j);
    }
}
