//! Seeded, schedule-independent uniform sampling on the sphere.
//!
//! Sample `i` of a run is drawn from ChaCha stream `i / CHUNK` at offset
//! `i % CHUNK`, so a run can be split across threads in any way and still
//! reproduce the serial sequence exactly.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bloch::BlochVector;

/// Samples per independent RNG stream.
pub const CHUNK: usize = 1 << 14;

/// The RNG owning samples `[chunk * CHUNK, (chunk + 1) * CHUNK)`.
pub fn chunk_rng(seed: u64, chunk: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk as u64);
    rng
}

/// One uniform point: height uniform in `[-1, 1]`, azimuth uniform in `[0, 2π)`.
pub fn uniform_point<R: Rng + ?Sized>(rng: &mut R) -> BlochVector {
    let z: f64 = rng.random_range(-1.0..=1.0);
    let phi: f64 = rng.random_range(0.0..TAU);
    BlochVector::from_height_azimuth(z, phi)
}

/// Number of chunks needed for `count` samples.
pub fn chunk_count(count: usize) -> usize {
    count.div_ceil(CHUNK)
}

/// Samples belonging to `chunk` for a run of `count` samples.
pub fn chunk_points(seed: u64, chunk: usize, count: usize) -> impl Iterator<Item = BlochVector> {
    let start = chunk * CHUNK;
    let len = count.saturating_sub(start).min(CHUNK);
    let mut rng = chunk_rng(seed, chunk);
    (0..len).map(move |_| uniform_point(&mut rng))
}

/// `count` uniform points, identical to concatenating every chunk in order.
pub fn uniform_points(count: usize, seed: u64) -> Vec<BlochVector> {
    (0..chunk_count(count)).flat_map(|c| chunk_points(seed, c, count)).collect()
}
