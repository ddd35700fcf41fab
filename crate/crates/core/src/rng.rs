// SPDX-License-Identifier: Apache-2.0

//! Uniform random sources and the deterministic stream layout.
//!
//! Every sampler in the crate draws 64-bit words from a [`UniformSource`].
//! The mapping from words to variates is part of the stable contract:
//!
//! * open-interval uniforms take the top 53 bits of a word, `k = w >> 11`, and
//!   return `k * 2^-53`; a word with `k == 0` is rejected and the next word is
//!   drawn, so the result lies in `(0, 1)`,
//! * half-open uniforms on `[0, 1)` use the same `k * 2^-53` without rejection,
//! * bounded integers on `[0, bound)` use Lemire's multiply-and-reject method.
//!
//! Seeded streams are ChaCha8 keyed by the 64-bit seed, with the 64-bit ChaCha
//! stream id selecting an independent substream.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::distributions::UnitUniform;

const INV_2_53: f64 = 1.0 / (1u64 << 53) as f64;

/// A source of uniformly distributed 64-bit words.
pub trait UniformSource {
    fn next_word(&mut self) -> u64;

    fn fill_words(&mut self, out: &mut [u64]) {
        for w in out {
            *w = self.next_word();
        }
    }

    /// Uniform variate on the open interval `(0, 1)`.
    fn next_open01(&mut self) -> UnitUniform {
        loop {
            let k = self.next_word() >> 11;
            if k != 0 {
                return UnitUniform::new_unchecked(k as f64 * INV_2_53);
            }
        }
    }

    /// Uniform variate on `[0, 1)`.
    fn next_closed_open01(&mut self) -> f64 {
        (self.next_word() >> 11) as f64 * INV_2_53
    }

    /// Uniform integer on `[0, bound)`. `bound` must be non-zero.
    fn next_below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        let threshold = bound.wrapping_neg() % bound;
        loop {
            let m = (self.next_word() as u128) * (bound as u128);
            if (m as u64) >= threshold {
                return (m >> 64) as u64;
            }
        }
    }
}

impl<R: RngCore> UniformSource for R {
    fn next_word(&mut self) -> u64 {
        self.next_u64()
    }
}

/// The seeded generator used throughout the crate.
pub type StreamRng = ChaCha8Rng;

/// Generator for substream `stream` of `seed`.
pub fn substream(seed: u64, stream: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
