//! Reproducible uniform sampling of points and point-pair distances.
//!
//! Every substream is a ChaCha8 keystream keyed by the 64-bit seed and
//! addressed by a 64-bit stream id, so `(seed, stream_id)` pins the sequence
//! on every platform. `sample_distances` splits its pairs into fixed chunks of
//! [`CHUNK_PAIRS`]; chunk `c` always reads substream `c`, which makes the
//! output independent of how many workers generate it.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metric::{l1, Distance, Point};

/// Pairs per independently-seeded chunk.
pub const CHUNK_PAIRS: usize = 1024;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SampleError {
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("pair count must be at least 1")]
    ZeroPairs,
    #[error("worker count must be at least 1")]
    ZeroWorkers,
    #[error("failed to build worker pool: {0}")]
    Pool(String),
}

/// Recipe for one Monte Carlo run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleSpec {
    dim: usize,
    num_pairs: usize,
    seed: u64,
}

impl SampleSpec {
    pub fn new(dim: usize, num_pairs: usize, seed: u64) -> Result<Self, SampleError> {
        if dim == 0 {
            return Err(SampleError::ZeroDimension);
        }
        if num_pairs == 0 {
            return Err(SampleError::ZeroPairs);
        }
        Ok(Self {
            dim,
            num_pairs,
            seed,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_pairs(&self) -> usize {
        self.num_pairs
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// An independent substream of uniform draws.
#[derive(Debug, Clone)]
pub struct RandomStream {
    rng: ChaCha8Rng,
    stream_id: u64,
}

/// Deterministic substream for `(seed, stream_id)`.
pub fn derive_stream(seed: u64, stream_id: u64) -> RandomStream {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream_id);
    RandomStream { rng, stream_id }
}

impl RandomStream {
    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform on `[0, 1)` with 53 random mantissa bits. One draw per call.
    #[inline]
    pub fn next_unit(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    fn fill_unit(&mut self, buf: &mut [f64]) {
        for x in buf {
            *x = self.next_unit();
        }
    }
}

/// A point with `dim` independent `[0, 1)` coordinates; consumes exactly `dim` draws.
///
/// # Panics
/// If `dim == 0`.
pub fn generate_point(stream: &mut RandomStream, dim: usize) -> Point {
    assert!(dim >= 1, "dimension must be at least 1");
    let mut coords = vec![0.0; dim];
    stream.fill_unit(&mut coords);
    Point::from_unit_draws(coords)
}

/// Mixes a base seed with a key into a new seed (SplitMix64 finalizer).
/// Used to give each experiment row its own seed family.
pub fn mix_seed(seed: u64, key: u64) -> u64 {
    let mut z = seed ^ key.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn fill_chunk(spec: &SampleSpec, chunk: usize, out: &mut [Distance]) {
    let mut stream = derive_stream(spec.seed, chunk as u64);
    let mut p = vec![0.0; spec.dim];
    let mut q = vec![0.0; spec.dim];
    for slot in out {
        // P's draws come before Q's within each pair
        stream.fill_unit(&mut p);
        stream.fill_unit(&mut q);
        *slot = Distance::new(l1(&p, &q));
    }
}

fn sample_into(spec: &SampleSpec, out: &mut [Distance]) {
    out.par_chunks_mut(CHUNK_PAIRS)
        .enumerate()
        .for_each(|(chunk, slots)| fill_chunk(spec, chunk, slots));
}

/// `spec.num_pairs` distances between fresh uniform pairs, using the global
/// rayon pool.
pub fn sample_distances(spec: &SampleSpec) -> Vec<Distance> {
    let mut out = vec![Distance::default(); spec.num_pairs];
    sample_into(spec, &mut out);
    out
}

/// Same output as [`sample_distances`], generated on a dedicated pool of `workers` threads.
pub fn sample_distances_with_workers(
    spec: &SampleSpec,
    workers: usize,
) -> Result<Vec<Distance>, SampleError> {
    if workers == 0 {
        return Err(SampleError::ZeroWorkers);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| SampleError::Pool(e.to_string()))?;
    let mut out = vec![Distance::default(); spec.num_pairs];
    pool.install(|| sample_into(spec, &mut out));
    Ok(out)
}

/// Sequential reference path: walks chunks in order on the calling thread.
pub fn sample_distances_sequential(spec: &SampleSpec) -> Vec<Distance> {
    let mut out = vec![Distance::default(); spec.num_pairs];
    for (chunk, slots) in out.chunks_mut(CHUNK_PAIRS).enumerate() {
        fill_chunk(spec, chunk, slots);
    }
    out
}
