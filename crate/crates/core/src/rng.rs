//! Deterministic, platform-independent random streams.
//!
//! A stream is identified by `(master_seed, stream_id)`. The ChaCha key is
//! the four SplitMix64 outputs following `master_seed` (little-endian), and
//! the ChaCha stream (nonce) is `stream_id`. The keystream is ChaCha with 8
//! rounds as implemented by `rand_chacha`, which is specified bit-for-bit
//! and independent of endianness and word size. Gaussian samples use the
//! ziggurat sampler of `rand_distr::StandardNormal`.

use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output function applied to `x + γ`.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Folds a sequence of words into one stream identifier:
/// `h₀ = 0`, `hₖ₊₁ = splitmix64(hₖ ^ partₖ)`.
pub fn derive_stream_id(parts: &[u64]) -> u64 {
    parts.iter().fold(0u64, |h, &p| splitmix64(h ^ p))
}

/// A seeded random stream owned by a single unit of work.
#[derive(Clone, Debug)]
pub struct RngStream {
    master_seed: u64,
    stream_id: u64,
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        let mut key = [0u8; 32];
        let mut state = master_seed;
        for chunk in key.chunks_exact_mut(8) {
            let word = splitmix64(state);
            state = state.wrapping_add(GOLDEN_GAMMA);
            chunk.copy_from_slice(&word.to_le_bytes());
        }
        let mut inner = ChaCha8Rng::from_seed(key);
        inner.set_stream(stream_id);
        RngStream {
            master_seed,
            stream_id,
            inner,
        }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Independent child stream; depends only on this stream's identity and
    /// `index`, never on how much of this stream has been consumed.
    pub fn substream(&self, index: u64) -> RngStream {
        RngStream::new(
            self.master_seed,
            derive_stream_id(&[self.stream_id, index]),
        )
    }

    #[inline]
    pub fn standard_normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.inner)
    }
}

impl RngCore for RngStream {
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

/// `count` i.i.d. draws from 𝒩(0, stddev²).
pub fn gaussian_stream(rng: &mut RngStream, count: usize, stddev: f64) -> Result<Vec<f64>> {
    if !(stddev > 0.0 && stddev.is_finite()) {
        return Err(Error::invalid(format!(
            "standard deviation must be positive and finite, got {stddev}"
        )));
    }
    Ok((0..count).map(|_| stddev * rng.standard_normal()).collect())
}
