//! Counter-based deterministic random numbers.
//!
//! Sampling decisions must be reproducible from a seed alone, in any
//! implementation language and independent of iteration order. Draws are
//! therefore pure functions of `(seed, stream, counter)` rather than state
//! machines: stream `i` carries everything associated with row `i`, and the
//! counter indexes draws within a stream.
//!
//! Construction, exactly:
//!
//! ```text
//! mix64(z): z ^= z >> 30; z *= 0xBF58476D1CE4E5B9;
//!           z ^= z >> 27; z *= 0x94D049BB133111EB;
//!           z ^= z >> 31; return z            (all mod 2^64)
//! GOLDEN = 0x9E3779B97F4A7C15
//! draw_u64(seed, stream, counter) =
//!     mix64( mix64(seed + GOLDEN * (stream + 1)) + GOLDEN * (counter + 1) )
//! draw_f64 = (draw_u64 >> 11) * 2^-53        (uniform in [0, 1))
//! ```
//!
//! `mix64` is the SplitMix64 output permutation, which passes standard
//! statistical batteries; two applications decorrelate the stream and counter
//! lanes.

const GOLDEN: u64 = 0x9E3779B97F4A7C15;

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Draw `counter` from stream `stream` of the generator seeded with `seed`.
#[inline]
pub fn draw_u64(seed: u64, stream: u64, counter: u64) -> u64 {
    let base = mix64(seed.wrapping_add(GOLDEN.wrapping_mul(stream.wrapping_add(1))));
    mix64(base.wrapping_add(GOLDEN.wrapping_mul(counter.wrapping_add(1))))
}

/// Uniform draw in `[0, 1)` with 53 bits of precision.
#[inline]
pub fn draw_f64(seed: u64, stream: u64, counter: u64) -> f64 {
    const DEN: f64 = (1u64 << 53) as f64;
    (draw_u64(seed, stream, counter) >> 11) as f64 / DEN
}

/// Uniform draw in `[-scale, scale)`.
#[inline]
pub fn draw_symmetric(seed: u64, stream: u64, counter: u64, scale: f64) -> f64 {
    (2.0 * draw_f64(seed, stream, counter) - 1.0) * scale
}

/// Derives an independent child seed, e.g. one per solver iteration.
#[inline]
pub fn derive_seed(seed: u64, salt: u64) -> u64 {
    mix64(seed ^ mix64(salt.wrapping_add(GOLDEN)))
}
