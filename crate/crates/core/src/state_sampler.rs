// SPDX-License-Identifier: Apache-2.0

//! Full random-state sampling for small systems.
//!
//! A state is produced in three passes over one stream, always in this
//! order: `D - 1` open uniforms for the stick-breaking of the probability
//! simplex, `D` half-open uniforms for the phases, and `D - 1` bounded draws
//! for a Fisher-Yates shuffle. Golden files depend on this order.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::distributions::SystemDims;
use crate::error::{Error, Result};
use crate::rng::UniformSource;

/// Default cap on the qubit count for full-state sampling (2^26 amplitudes).
pub const DEFAULT_MAX_FULL_STATE_QUBITS: u64 = 26;

/// Component probabilities of a state, in sampling order.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexState(Vec<f64>);

impl SimplexState {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

/// A sampled state: probabilities, one phase per basis index, and the
/// permutation assigning probabilities to basis indices.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomState {
    probs: SimplexState,
    phases: Vec<f64>,
    perm: Vec<usize>,
}

impl RandomState {
    /// Assembles a state from parts, checking the structural invariants.
    pub fn from_parts(probs: Vec<f64>, phases: Vec<f64>, perm: Vec<usize>) -> Result<Self> {
        let d = probs.len();
        if phases.len() != d || perm.len() != d {
            return Err(Error::InvalidArgument(
                "probabilities, phases and permutation must have equal length".into(),
            ));
        }
        if let Some(&p) = probs.iter().find(|p| !(**p >= 0.0 && **p <= 1.0)) {
            return Err(Error::Domain {
                value: p,
                domain: "[0, 1]",
            });
        }
        if let Some(&t) = phases.iter().find(|t| !(**t >= 0.0 && **t < TAU)) {
            return Err(Error::Domain {
                value: t,
                domain: "[0, 2pi)",
            });
        }
        let mut seen = vec![false; d];
        for &i in &perm {
            if i >= d || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidArgument("perm is not a permutation".into()));
            }
        }
        Ok(RandomState {
            probs: SimplexState(probs),
            phases,
            perm,
        })
    }

    pub fn probs(&self) -> &SimplexState {
        &self.probs
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    /// `perm()[b]` is the index into [`Self::probs`] assigned to basis index `b`.
    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    /// Probability of reading out basis index `b`.
    pub fn prob_at(&self, b: usize) -> f64 {
        self.probs.0[self.perm[b]]
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }
}

/// Complex amplitudes of a state in the computational basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Amplitudes(Vec<Complex64>);

impl Amplitudes {
    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|a| a.norm_sqr()).sum()
    }
}

/// Samples full states up to a configurable qubit count.
#[derive(Debug, Clone, Copy)]
pub struct StateSampler {
    max_qubits: u64,
}

impl Default for StateSampler {
    fn default() -> Self {
        StateSampler {
            max_qubits: DEFAULT_MAX_FULL_STATE_QUBITS,
        }
    }
}

impl StateSampler {
    pub fn with_max_qubits(max_qubits: u64) -> Self {
        StateSampler { max_qubits }
    }

    pub fn max_qubits(&self) -> u64 {
        self.max_qubits
    }

    fn dim(&self, dims: SystemDims) -> Result<usize> {
        let dim = dims
            .dim_exact()
            .filter(|_| dims.qubits() <= self.max_qubits)
            .and_then(|d| usize::try_from(d).ok());
        dim.ok_or(Error::Capacity {
            what: "full-state sampling",
            requested: dims.qubits(),
            cap: self.max_qubits,
        })
    }

    /// Stick-breaking draw of all `D` component probabilities.
    ///
    /// Step `k` splits off `p_k = r_(k-1) (1 - x_k^(1/(D-k)))`, where the
    /// remaining mass `r_k = prod_(l<=k) x_l^(1/(D-l))` is kept as a running
    /// product. The last component receives `r_(D-1)`.
    pub fn sample_probabilities<R: UniformSource + ?Sized>(
        &self,
        dims: SystemDims,
        rng: &mut R,
    ) -> Result<SimplexState> {
        let d = self.dim(dims)?;
        let mut probs = Vec::with_capacity(d);
        let mut remaining = 1.0f64;
        for k in 1..d {
            let t = rng.next_open01().get().ln() / (d - k) as f64;
            probs.push(-remaining * t.exp_m1());
            remaining *= t.exp();
        }
        probs.push(remaining);
        Ok(SimplexState(probs))
    }

    /// Probabilities, then phases, then a uniform permutation.
    pub fn sample_state<R: UniformSource + ?Sized>(
        &self,
        dims: SystemDims,
        rng: &mut R,
    ) -> Result<RandomState> {
        let probs = self.sample_probabilities(dims, rng)?;
        let d = probs.len();
        let phases = (0..d)
            .map(|_| {
                let theta = TAU * rng.next_closed_open01();
                if theta < TAU {
                    theta
                } else {
                    0.0
                }
            })
            .collect();
        let mut perm: Vec<usize> = (0..d).collect();
        for i in (1..d).rev() {
            let j = rng.next_below(i as u64 + 1) as usize;
            perm.swap(i, j);
        }
        Ok(RandomState {
            probs,
            phases,
            perm,
        })
    }
}

/// `v_b = sqrt(p_perm(b)) * exp(i theta_b)`.
pub fn state_amplitudes(state: &RandomState) -> Amplitudes {
    let amps = state
        .perm
        .iter()
        .zip(&state.phases)
        .map(|(&src, &theta)| Complex64::from_polar(state.probs.0[src].sqrt(), theta))
        .collect();
    Amplitudes(amps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;
    use crate::rng::testing::Replay;
    use approx::assert_relative_eq;

    fn dims(n: u64) -> SystemDims {
        SystemDims::new(n).unwrap()
    }

    #[test]
    fn two_level_split() {
        let mut rng = Replay::new(vec![Replay::word_for(0.3125)]);
        let probs = StateSampler::default()
            .sample_probabilities(dims(1), &mut rng)
            .unwrap();
        assert_relative_eq!(probs.as_slice()[0], 0.6875, max_relative = 1e-15);
        assert_relative_eq!(probs.as_slice()[1], 0.3125, max_relative = 1e-15);
    }

    #[test]
    fn stub_state_is_reproducible() {
        let words = vec![Replay::word_for(0.25), Replay::word_for(0.5), 0, u64::MAX];
        let a = StateSampler::default()
            .sample_state(dims(1), &mut Replay::new(words.clone()))
            .unwrap();
        let b = StateSampler::default()
            .sample_state(dims(1), &mut Replay::new(words))
            .unwrap();
        assert_eq!(a, b);
        assert_eq!(a.dim(), 2);
        assert_relative_eq!(
            a.probs().as_slice().iter().sum::<f64>(),
            1.0,
            max_relative = 1e-15
        );
        // open01 → 0.25; phases from 0.5 and 0; bounded draw from u64::MAX selects index 1.
        assert_relative_eq!(a.probs().as_slice()[0], 0.75, max_relative = 1e-15);
        assert_relative_eq!(a.phases()[0], std::f64::consts::PI, max_relative = 1e-15);
        assert_eq!(a.phases()[1], 0.0);
        assert_eq!(a.perm(), &[0, 1]);
    }

    #[test]
    fn capacity_cap() {
        let mut rng = substream(0, 0);
        let small = StateSampler::with_max_qubits(3);
        assert!(small.sample_probabilities(dims(3), &mut rng).is_ok());
        assert!(matches!(
            small.sample_probabilities(dims(4), &mut rng),
            Err(Error::Capacity {
                requested: 4,
                cap: 3,
                ..
            })
        ));
        assert!(StateSampler::default()
            .sample_state(dims(27), &mut rng)
            .is_err());
    }

    #[test]
    fn permutation_is_bijection() {
        let mut rng = substream(11, 0);
        for n in 1..=8 {
            for _ in 0..20 {
                let s = StateSampler::default()
                    .sample_state(dims(n), &mut rng)
                    .unwrap();
                let mut sorted = s.perm().to_vec();
                sorted.sort_unstable();
                assert_eq!(sorted, (0..s.dim()).collect::<Vec<_>>());
                assert!(s.phases().iter().all(|t| (0.0..TAU).contains(t)));
            }
        }
    }

    #[test]
    fn amplitudes_identity_no_phase() {
        let state = RandomState::from_parts(vec![0.25, 0.75], vec![0.0, 0.0], vec![0, 1]).unwrap();
        let amps = state_amplitudes(&state);
        assert_eq!(amps.as_slice()[0], Complex64::new(0.5, 0.0));
        assert_eq!(amps.as_slice()[1], Complex64::new(0.75f64.sqrt(), 0.0));
    }

    #[test]
    fn amplitudes_with_phase() {
        let state = RandomState::from_parts(
            vec![0.25, 0.75],
            vec![std::f64::consts::PI, 0.0],
            vec![0, 1],
        )
        .unwrap();
        let amps = state_amplitudes(&state);
        assert_relative_eq!(amps.as_slice()[0].re, -0.5, max_relative = 1e-15);
        assert!(amps.as_slice()[0].im.abs() < 1e-16);
        assert_relative_eq!(amps.as_slice()[1].re, 0.75f64.sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn amplitudes_follow_permutation() {
        let state = RandomState::from_parts(vec![0.25, 0.75], vec![0.0, 0.0], vec![1, 0]).unwrap();
        let amps = state_amplitudes(&state);
        assert_eq!(amps.as_slice()[0].re, 0.75f64.sqrt());
        assert_eq!(state.prob_at(1), 0.25);
    }

    #[test]
    fn from_parts_rejects_bad_input() {
        assert!(RandomState::from_parts(vec![1.0], vec![0.0], vec![1]).is_err());
        assert!(RandomState::from_parts(vec![0.5, 0.5], vec![0.0, 0.0], vec![0, 0]).is_err());
        assert!(RandomState::from_parts(vec![0.5, 0.5], vec![0.0, TAU], vec![0, 1]).is_err());
        assert!(RandomState::from_parts(vec![-0.5, 1.5], vec![0.0, 0.0], vec![0, 1]).is_err());
    }

    #[test]
    fn sums_and_norms_are_one() {
        let sampler = StateSampler::default();
        for n in 1..=14 {
            let mut rng = substream(n, 3);
            let s = sampler.sample_state(dims(n), &mut rng).unwrap();
            let sum: f64 = s.probs().as_slice().iter().sum();
            assert!((sum - 1.0).abs() < 1e-12, "n={n} sum={sum}");
            assert!(s.probs().as_slice().iter().all(|&p| p >= 0.0));
            assert!((state_amplitudes(&s).norm_sqr() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn same_seed_same_state() {
        let sampler = StateSampler::default();
        let a = sampler.sample_state(dims(6), &mut substream(5, 0)).unwrap();
        let b = sampler.sample_state(dims(6), &mut substream(5, 0)).unwrap();
        let c = sampler.sample_state(dims(6), &mut substream(6, 0)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
