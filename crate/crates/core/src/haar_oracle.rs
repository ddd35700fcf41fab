// SPDX-License-Identifier: Apache-2.0

//! Brute-force uniform states and Kolmogorov-Smirnov goodness-of-fit checks.
//!
//! A uniform point on the unit sphere of `C^D` is a vector of `2D` independent
//! standard normals divided by its norm. Normals come from the Box-Muller
//! transform: each amplitude consumes one open uniform `u1` and one half-open
//! uniform `u2`, and takes `r cos(2 pi u2)` as its real part and
//! `r sin(2 pi u2)` as its imaginary part with `r = sqrt(-2 ln u1)`.
//! Nothing here shares code with the analytic samplers, so agreement between
//! the two is evidence for both.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::distributions::{eval_component_cdf, SystemDims};
use crate::error::{Error, Result};
use crate::rng::{substream, UniformSource};
use crate::state_sampler::StateSampler;

/// Largest qubit count accepted by the oracle sampler.
pub const ORACLE_MAX_QUBITS: u64 = 20;

/// A unit vector of `C^D` sampled by normalizing Gaussians.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleState(Vec<Complex64>);

impl OracleState {
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.0
    }

    pub fn prob_at(&self, b: usize) -> f64 {
        self.0[b].norm_sqr()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|a| a.norm_sqr()).sum()
    }
}

fn standard_normal_pair<R: UniformSource + ?Sized>(rng: &mut R) -> Complex64 {
    let r = (-2.0 * rng.next_open01().get().ln()).sqrt();
    let theta = TAU * rng.next_closed_open01();
    Complex64::new(r * theta.cos(), r * theta.sin())
}

/// Uniform unit vector of dimension `dim >= 1`.
pub fn sample_oracle_vector<R: UniformSource + ?Sized>(
    dim: usize,
    rng: &mut R,
) -> Result<OracleState> {
    if dim == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    let mut v: Vec<Complex64> = (0..dim).map(|_| standard_normal_pair(rng)).collect();
    let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut v {
        *a /= norm;
    }
    Ok(OracleState(v))
}

/// Oracle sampler with a cap on the qubit count.
#[derive(Debug, Clone, Copy)]
pub struct OracleSampler {
    max_qubits: u64,
}

impl Default for OracleSampler {
    fn default() -> Self {
        OracleSampler {
            max_qubits: ORACLE_MAX_QUBITS,
        }
    }
}

impl OracleSampler {
    pub fn with_max_qubits(max_qubits: u64) -> Self {
        OracleSampler { max_qubits }
    }

    pub fn max_qubits(&self) -> u64 {
        self.max_qubits
    }

    pub fn sample_state<R: UniformSource + ?Sized>(
        &self,
        dims: SystemDims,
        rng: &mut R,
    ) -> Result<OracleState> {
        let dim = Some(dims.qubits())
            .filter(|&n| n <= self.max_qubits && n < usize::BITS as u64)
            .map(|n| 1usize << n);
        match dim {
            Some(d) => sample_oracle_vector(d, rng),
            None => Err(Error::Capacity {
                what: "oracle sampling",
                requested: dims.qubits(),
                cap: self.max_qubits,
            }),
        }
    }
}

/// Uniform state of an `n`-qubit system, `n <= ORACLE_MAX_QUBITS`.
pub fn sample_oracle_state<R: UniformSource + ?Sized>(
    dims: SystemDims,
    rng: &mut R,
) -> Result<OracleState> {
    OracleSampler::default().sample_state(dims, rng)
}

/// Outcome of a Kolmogorov-Smirnov test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsReport {
    pub statistic: f64,
    pub n_a: usize,
    /// Second sample size; `None` for the one-sample test.
    pub n_b: Option<usize>,
    pub alpha: f64,
    pub critical_value: f64,
    pub reject: bool,
}

/// Asymptotic Kolmogorov coefficient `c(alpha)`.
fn ks_coefficient(alpha: f64) -> Result<f64> {
    if alpha == 0.01 {
        Ok(1.628)
    } else if alpha == 0.05 {
        Ok(1.358)
    } else {
        Err(Error::InvalidArgument(format!(
            "alpha must be 0.05 or 0.01, got {alpha}"
        )))
    }
}

fn sorted(samples: &[f64]) -> Result<Vec<f64>> {
    if samples.iter().any(|s| s.is_nan()) {
        return Err(Error::InvalidArgument("samples contain NaN".into()));
    }
    let mut v = samples.to_vec();
    v.sort_unstable_by(f64::total_cmp);
    Ok(v)
}

/// One-sample test of `samples` against the distribution function `cdf`.
pub fn ks_one_sample<F: Fn(f64) -> f64>(samples: &[f64], cdf: F, alpha: f64) -> Result<KsReport> {
    if samples.is_empty() {
        return Err(Error::EmptyInput("ks_one_sample"));
    }
    let c = ks_coefficient(alpha)?;
    let xs = sorted(samples)?;
    let n = xs.len() as f64;
    let statistic = xs.iter().enumerate().fold(0.0f64, |acc, (i, &x)| {
        let f = cdf(x);
        let above = ((i + 1) as f64 / n - f).abs();
        let below = (i as f64 / n - f).abs();
        acc.max(above).max(below)
    });
    let critical_value = c / n.sqrt();
    Ok(KsReport {
        statistic,
        n_a: xs.len(),
        n_b: None,
        alpha,
        critical_value,
        reject: statistic > critical_value,
    })
}

/// Two-sample test of whether `a` and `b` share a distribution.
pub fn ks_two_sample(a: &[f64], b: &[f64], alpha: f64) -> Result<KsReport> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyInput("ks_two_sample"));
    }
    let c = ks_coefficient(alpha)?;
    let xs = sorted(a)?;
    let ys = sorted(b)?;
    let (na, nb) = (xs.len() as f64, ys.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut statistic = 0.0f64;
    while i < xs.len() && j < ys.len() {
        let v = xs[i].min(ys[j]);
        while i < xs.len() && xs[i] == v {
            i += 1;
        }
        while j < ys.len() && ys[j] == v {
            j += 1;
        }
        statistic = statistic.max((i as f64 / na - j as f64 / nb).abs());
    }
    let critical_value = c * ((na + nb) / (na * nb)).sqrt();
    Ok(KsReport {
        statistic,
        n_a: xs.len(),
        n_b: Some(ys.len()),
        alpha,
        critical_value,
        reject: statistic > critical_value,
    })
}

/// Number of independent seeds a statistical check is repeated over.
pub const SEED_TRIALS: u64 = 3;

/// Seeds used for trial `0..SEED_TRIALS` of a check started from `seed`.
pub fn trial_seeds(seed: u64) -> impl Iterator<Item = u64> {
    (0..SEED_TRIALS).map(move |t| seed.wrapping_add(t))
}

/// A check passes when it accepts for at least two of the three trial seeds.
pub fn passes_majority(accepts: impl IntoIterator<Item = bool>) -> bool {
    accepts.into_iter().filter(|&ok| ok).count() * 3 >= SEED_TRIALS as usize * 2
}

/// Which comparison an [`EquivalenceCheck`] performs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    /// Two-sample test: analytic sampler's `p_(b0)` against the oracle's.
    SamplerVsOracle,
    /// One-sample test: analytic sampler's first stick-break against the exact law.
    SamplerExactLaw,
    /// One-sample test: oracle's `p_(b0)` against the exact law.
    OracleExactLaw,
}

impl CheckKind {
    pub fn name(self) -> &'static str {
        match self {
            CheckKind::SamplerVsOracle => "sampler_vs_oracle",
            CheckKind::SamplerExactLaw => "sampler_exact_law",
            CheckKind::OracleExactLaw => "oracle_exact_law",
        }
    }
}

/// One KS report of the equivalence suite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquivalenceCheck {
    pub kind: CheckKind,
    pub qubits: u64,
    pub seed: u64,
    pub report: KsReport,
}

/// Runs the analytic-versus-oracle checks for one seed.
///
/// The analytic sampler draws full states from substream 0 of `seed`, the
/// oracle from substream 1.
pub fn equivalence_checks(
    dims: SystemDims,
    samples: usize,
    seed: u64,
    alpha: f64,
    sampler: &StateSampler,
    oracle: &OracleSampler,
) -> Result<Vec<EquivalenceCheck>> {
    if samples == 0 {
        return Err(Error::EmptyInput("equivalence_checks"));
    }
    // Fail on capacity before drawing anything.
    if dims.qubits() > oracle.max_qubits() {
        return Err(Error::Capacity {
            what: "verification",
            requested: dims.qubits(),
            cap: oracle.max_qubits(),
        });
    }
    let mut analytic_rng = substream(seed, 0);
    let mut oracle_rng = substream(seed, 1);
    let mut first_break = Vec::with_capacity(samples);
    let mut analytic_b0 = Vec::with_capacity(samples);
    let mut oracle_b0 = Vec::with_capacity(samples);
    for _ in 0..samples {
        let state = sampler.sample_state(dims, &mut analytic_rng)?;
        first_break.push(state.probs().as_slice()[0]);
        analytic_b0.push(state.prob_at(0));
        oracle_b0.push(oracle.sample_state(dims, &mut oracle_rng)?.prob_at(0));
    }
    let cdf = |q: f64| eval_component_cdf(q.clamp(0.0, 1.0), dims).unwrap_or(f64::NAN);
    let reports = [
        (
            CheckKind::SamplerVsOracle,
            ks_two_sample(&analytic_b0, &oracle_b0, alpha)?,
        ),
        (
            CheckKind::SamplerExactLaw,
            ks_one_sample(&first_break, cdf, alpha)?,
        ),
        (
            CheckKind::OracleExactLaw,
            ks_one_sample(&oracle_b0, cdf, alpha)?,
        ),
    ];
    Ok(reports
        .into_iter()
        .map(|(kind, report)| EquivalenceCheck {
            kind,
            qubits: dims.qubits(),
            seed,
            report,
        })
        .collect())
}
