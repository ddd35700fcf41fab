// SPDX-License-Identifier: Apache-2.0

use crate::distributions::{theoretical_xeb, SystemDims};
use crate::error::{Error, Result};

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn merge(&mut self, other: &CompensatedSum) {
        self.add(other.sum);
        self.comp += other.comp;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Running sums of the rescaled probabilities' second and fourth powers.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct XebAccumulator {
    count: u64,
    sum_sq: CompensatedSum,
    sum_quad: CompensatedSum,
}

impl XebAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, rescaled: f64) {
        debug_assert!(rescaled >= 0.0);
        let sq = rescaled * rescaled;
        self.count += 1;
        self.sum_sq.add(sq);
        self.sum_quad.add(sq * sq);
    }

    /// Consuming form of [`push`](Self::push).
    pub fn accumulate(mut self, rescaled: f64) -> Self {
        self.push(rescaled);
        self
    }

    pub fn merge(&mut self, other: &XebAccumulator) {
        self.count += other.count;
        self.sum_sq.merge(&other.sum_sq);
        self.sum_quad.merge(&other.sum_quad);
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn sum_sq(&self) -> f64 {
        self.sum_sq.value()
    }

    pub fn sum_quad(&self) -> f64 {
        self.sum_quad.value()
    }

    pub fn estimate(&self, dims: SystemDims) -> Result<XebEstimate> {
        if self.count == 0 {
            return Err(Error::EmptyInput("estimate of an empty accumulator"));
        }
        let n = self.count as f64;
        let m2 = self.sum_sq() / n;
        let m4 = self.sum_quad() / n;
        Ok(XebEstimate {
            qubits: dims.qubits(),
            samples: self.count,
            f_xeb: m2 - 1.0,
            three_sigma: 3.0 * ((m4 - m2 * m2).max(0.0) / n).sqrt(),
            theoretical: theoretical_xeb(dims),
        })
    }
}

/// Merges accumulators in a fixed pairwise tree: each range is split at
/// `len / 2` and the two halves' results are merged left into right.
pub fn merge_tree(accs: &[XebAccumulator]) -> XebAccumulator {
    match accs.len() {
        0 => XebAccumulator::new(),
        1 => accs[0],
        len => {
            let (left, right) = accs.split_at(len / 2);
            let mut acc = merge_tree(left);
            acc.merge(&merge_tree(right));
            acc
        }
    }
}

/// XEB fidelity estimate with its 3-sigma statistical error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XebEstimate {
    pub qubits: u64,
    pub samples: u64,
    pub f_xeb: f64,
    pub three_sigma: f64,
    pub theoretical: f64,
}

impl XebEstimate {
    /// Whether `value` lies within `f_xeb ± three_sigma`.
    pub fn covers(&self, value: f64) -> bool {
        (self.f_xeb - value).abs() <= self.three_sigma
    }
}
