// SPDX-License-Identifier: Apache-2.0

//! Streaming XEB estimation for arbitrary qubit counts.
//!
//! Each sample is a rescaled probability drawn from one open uniform,
//! followed by an `n`-bit readout label drawn from the same stream. Sample
//! `i` belongs to block `i / BLOCK_SIZE`, and every block reads substream
//! `block` of the run seed, so results do not depend on how blocks are
//! distributed among workers. Per-block accumulators are combined with
//! [`merge_tree`] in block order.

mod accumulator;
mod bitstring;

pub use accumulator::{merge_tree, CompensatedSum, XebAccumulator, XebEstimate};
pub use bitstring::{sample_bitstring, sample_bitstring_capped, BitString, DEFAULT_MAX_BITS};

use rayon::prelude::*;

use crate::distributions::{sample_rescaled, SystemDims};
use crate::error::{Error, Result};
use crate::rng::{substream, StreamRng, UniformSource};

/// Samples per substream.
pub const BLOCK_SIZE: u64 = 1024;

/// One rescaled probability paired with a readout label.
#[derive(Debug, Clone, PartialEq)]
pub struct RescaledSample {
    pub rescaled: f64,
    pub bits: BitString,
}

/// Deterministic stream of [`RescaledSample`]s starting at a sample index.
pub struct RescaledStream {
    dims: SystemDims,
    seed: u64,
    index: u64,
    rng: StreamRng,
}

impl RescaledStream {
    pub fn new(dims: SystemDims, seed: u64) -> Self {
        Self::starting_at(dims, seed, 0)
    }

    /// Stream positioned at sample `index`.
    pub fn starting_at(dims: SystemDims, seed: u64, index: u64) -> Self {
        let mut rng = substream(seed, index / BLOCK_SIZE);
        let mut skip = BitString::zeros(dims.qubits());
        for _ in 0..index % BLOCK_SIZE {
            rng.next_open01();
            skip.fill_random(&mut rng);
        }
        RescaledStream {
            dims,
            seed,
            index,
            rng,
        }
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    /// Draws the next sample, writing its label into `bits`.
    pub fn next_into(&mut self, bits: &mut BitString) -> f64 {
        if self.index.is_multiple_of(BLOCK_SIZE) && self.index > 0 {
            self.rng = substream(self.seed, self.index / BLOCK_SIZE);
        }
        self.index += 1;
        let rescaled = sample_rescaled(self.rng.next_open01(), self.dims);
        bits.fill_random(&mut self.rng);
        rescaled
    }
}

impl Iterator for RescaledStream {
    type Item = RescaledSample;

    fn next(&mut self) -> Option<RescaledSample> {
        let mut bits = BitString::zeros(self.dims.qubits());
        let rescaled = self.next_into(&mut bits);
        Some(RescaledSample { rescaled, bits })
    }
}

fn accumulate_block(dims: SystemDims, seed: u64, block: u64, samples: u64) -> XebAccumulator {
    let start = block * BLOCK_SIZE;
    let end = (start + BLOCK_SIZE).min(samples);
    let mut stream = RescaledStream::starting_at(dims, seed, start);
    let mut bits = BitString::zeros(dims.qubits());
    let mut acc = XebAccumulator::new();
    for _ in start..end {
        acc.push(stream.next_into(&mut bits));
    }
    acc
}

/// Estimates the XEB fidelity of ideal sampling on `qubits` qubits from
/// `samples` draws.
///
/// Work is split into `partitions` contiguous ranges of blocks that run on
/// the current rayon pool. The result is identical for every partition count.
pub fn run_xeb(qubits: u64, samples: u64, seed: u64, partitions: usize) -> Result<XebEstimate> {
    if samples < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 samples, got {samples}"
        )));
    }
    if partitions == 0 {
        return Err(Error::InvalidArgument(
            "partitions must be at least 1".into(),
        ));
    }
    let dims = SystemDims::new(qubits)?;
    let blocks = samples.div_ceil(BLOCK_SIZE);
    let per_partition = blocks.div_ceil(partitions as u64).max(1);
    let ranges: Vec<(u64, u64)> = (0..blocks)
        .step_by(per_partition as usize)
        .map(|lo| (lo, (lo + per_partition).min(blocks)))
        .collect();
    let per_block: Vec<XebAccumulator> = ranges
        .into_par_iter()
        .flat_map_iter(|(lo, hi)| (lo..hi).map(move |b| accumulate_block(dims, seed, b, samples)))
        .collect();
    merge_tree(&per_block).estimate(dims)
}
