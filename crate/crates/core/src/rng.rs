//! Deterministic random substreams. Every consumer of randomness derives its
//! own ChaCha stream from the master seed plus a few context words (trial
//! index, retry counter, purpose tag), so results never depend on the order
//! in which trials run or on how many threads consume them.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use num_complex::Complex64;

use crate::fmath;

/// Purpose tag for channel matrix draws.
pub const STREAM_CHANNEL: u64 = 0x4348414e;
/// Purpose tag for beamformer randomisation.
pub const STREAM_BEAMFORMER: u64 = 0x4245414d;
/// Purpose tag for availability state draws.
pub const STREAM_STATE: u64 = 0x53544154;

/// SplitMix64 finaliser; good avalanche for key derivation.
fn mix(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Independent ChaCha stream keyed by the master seed and context words.
pub fn substream(seed: u64, words: &[u64]) -> ChaCha8Rng {
    let mut s = mix(seed ^ 0xD6E8_FEB8_6659_FD93);
    for &w in words {
        s = mix(s ^ mix(w));
    }
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        s = mix(s);
        chunk.copy_from_slice(&s.to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

/// Circularly symmetric complex Gaussian with unit variance
/// (`E[|h|^2] = 1`), drawn by the polar Box-Muller method.
pub fn complex_gaussian<R: RngCore + ?Sized>(rng: &mut R) -> Complex64 {
    let u1: f64 = 1.0 - rng.gen::<f64>(); // (0, 1] so the log stays finite
    let u2: f64 = rng.gen();
    let r = fmath::sqrt(-fmath::ln(u1));
    let phi = 2.0 * core::f64::consts::PI * u2;
    Complex64::new(r * fmath::cos(phi), r * fmath::sin(phi))
}
