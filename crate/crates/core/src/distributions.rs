// SPDX-License-Identifier: Apache-2.0

//! Probability laws for the component probabilities of uniformly random states.
//!
//! For a state drawn uniformly from the unit sphere of `C^D`, the mass left
//! after removing one coordinate, `p = 1 - q`, has density `(D-1) p^(D-2)` and
//! distribution function `p^(D-1)`. The single component probability `q` then
//! has density `(D-1)(1-q)^(D-2)`, which after rescaling `q * D` tends to the
//! Porter-Thomas law `exp(-x)`.
//!
//! All powers with exponents of order `D` are evaluated through `exp`/`ln`.

use crate::error::{Error, Result};

/// Largest qubit count for which `D = 2^n` is carried exactly.
pub const EXACT_MAX_QUBITS: u64 = 53;
/// Largest qubit count for which `D` is carried as an `f64`.
pub const FLOAT_MAX_QUBITS: u64 = 1000;
/// Largest supported qubit count.
pub const MAX_QUBITS: u64 = 1 << 20;

/// How the Hilbert-space dimension is represented for a given qubit count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `n <= 53`, `D` exact as an integer.
    ExactSmall,
    /// `54 <= n <= 1000`, `D` carried as a float.
    FloatLarge,
    /// `n > 1000`, only the large-`D` limit is used.
    PorterThomasLimit,
}

/// Qubit count together with its dimension regime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SystemDims {
    qubits: u64,
    regime: Regime,
}

impl SystemDims {
    pub fn new(qubits: u64) -> Result<Self> {
        if qubits == 0 || qubits > MAX_QUBITS {
            return Err(Error::InvalidArgument(format!(
                "qubit count must be in 1..={MAX_QUBITS}, got {qubits}"
            )));
        }
        let regime = if qubits <= EXACT_MAX_QUBITS {
            Regime::ExactSmall
        } else if qubits <= FLOAT_MAX_QUBITS {
            Regime::FloatLarge
        } else {
            Regime::PorterThomasLimit
        };
        Ok(SystemDims { qubits, regime })
    }

    pub fn qubits(&self) -> u64 {
        self.qubits
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    /// `D` as an exact integer, available in the [`Regime::ExactSmall`] regime.
    pub fn dim_exact(&self) -> Option<u64> {
        match self.regime {
            Regime::ExactSmall => Some(1u64 << self.qubits),
            _ => None,
        }
    }

    /// `D` as a float; `None` in the limit regime where it overflows.
    pub fn dim_f64(&self) -> Option<f64> {
        match self.regime {
            Regime::PorterThomasLimit => None,
            _ => Some(2f64.powi(self.qubits as i32)),
        }
    }

    /// `D - 1` as a float. Exact in the [`Regime::ExactSmall`] regime.
    fn dim_minus_one(&self) -> Option<f64> {
        match self.regime {
            Regime::ExactSmall => Some(((1u64 << self.qubits) - 1) as f64),
            Regime::FloatLarge => self.dim_f64(),
            Regime::PorterThomasLimit => None,
        }
    }

    fn finite_dims(&self) -> Result<(f64, f64)> {
        match (self.dim_f64(), self.dim_minus_one()) {
            (Some(d), Some(dm1)) => Ok((d, dm1)),
            _ => Err(Error::UnsupportedRegime {
                qubits: self.qubits,
            }),
        }
    }
}

/// A uniform variate strictly inside `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct UnitUniform(f64);

impl UnitUniform {
    pub fn new(x: f64) -> Result<Self> {
        if x > 0.0 && x < 1.0 {
            Ok(UnitUniform(x))
        } else {
            Err(Error::Domain {
                value: x,
                domain: "(0, 1)",
            })
        }
    }

    pub(crate) fn new_unchecked(x: f64) -> Self {
        debug_assert!(x > 0.0 && x < 1.0);
        UnitUniform(x)
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

fn check_unit(value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::Domain {
            value,
            domain: "[0, 1]",
        })
    }
}

/// Density `(D-1)(1-q)^(D-2)` of a single component probability `q`.
///
/// Returns 0 where the density underflows.
pub fn eval_component_pdf(q: f64, dims: SystemDims) -> Result<f64> {
    let (d, dm1) = dims.finite_dims()?;
    check_unit(q)?;
    if d == 2.0 {
        return Ok(1.0);
    }
    let log_density = dm1.ln() + (d - 2.0) * (-q).ln_1p();
    Ok(log_density.exp())
}

/// Distribution function `p^(D-1)` of the remaining mass `p`.
pub fn eval_remaining_cdf(p: f64, dims: SystemDims) -> Result<f64> {
    let (_, dm1) = dims.finite_dims()?;
    check_unit(p)?;
    if p == 0.0 {
        return Ok(0.0);
    }
    if p == 1.0 {
        return Ok(1.0);
    }
    Ok((dm1 * p.ln()).exp())
}

/// Distribution function `1 - (1-q)^(D-1)` of a single component probability.
pub fn eval_component_cdf(q: f64, dims: SystemDims) -> Result<f64> {
    let (_, dm1) = dims.finite_dims()?;
    check_unit(q)?;
    if q == 1.0 {
        return Ok(1.0);
    }
    Ok(-(dm1 * (-q).ln_1p()).exp_m1())
}

/// Inverse-transform draw of one component probability, `1 - x^(1/(D-1))`.
pub fn sample_component(x: UnitUniform, dims: SystemDims) -> Result<f64> {
    let (_, dm1) = dims.finite_dims()?;
    Ok(-(x.get().ln() / dm1).exp_m1())
}

/// Draw of the rescaled probability `p * D`.
///
/// Uses `-D expm1(ln x / (D-1))` while `D` is finite and `-ln x` beyond.
pub fn sample_rescaled(x: UnitUniform, dims: SystemDims) -> f64 {
    let log_x = x.get().ln();
    match dims.finite_dims() {
        Ok((d, dm1)) => -d * (log_x / dm1).exp_m1(),
        Err(_) => -log_x,
    }
}

/// Porter-Thomas density `exp(-p)` of the rescaled probability.
pub fn porter_thomas_pdf(rescaled: f64) -> Result<f64> {
    if rescaled.is_nan() || rescaled < 0.0 {
        return Err(Error::Domain {
            value: rescaled,
            domain: "[0, inf)",
        });
    }
    Ok((-rescaled).exp())
}

/// Expected XEB fidelity of ideal sampling, `(D-1)/(D+1)`; 1 in the limit regime.
pub fn theoretical_xeb(dims: SystemDims) -> f64 {
    match dims.dim_f64() {
        Some(d) => 1.0 - 2.0 / (d + 1.0),
        None => 1.0,
    }
}
