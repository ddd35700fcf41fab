// SPDX-License-Identifier: Apache-2.0

//! Monte Carlo simulation of ideal random circuit sampling.
//!
//! Instead of simulating circuits, `rcsforge` samples uniformly random states
//! of the `n`-qubit Hilbert space directly, exploiting that the component
//! probabilities of such states follow a known law:
//!
//! * [`distributions`]: exact component laws and their Porter-Thomas limit,
//! * [`state_sampler`]: full states for small systems by stick-breaking,
//! * [`haar_oracle`]: an independent Gaussian-sphere sampler and KS tests,
//! * [`xeb`]: streaming cross-entropy benchmarking estimates for up to
//!   2^20 qubits,
//! * [`cli`]: the `rcsforge` command-line tool and its record formats.
//!
//! ```
//! let est = rcsforge::xeb::run_xeb(70, 100_000, 1, 1).unwrap();
//! assert!((est.f_xeb - est.theoretical).abs() < 0.05);
//! ```

pub mod cli;
pub mod distributions;
pub mod error;
pub mod haar_oracle;
pub mod rng;
pub mod state_sampler;
pub mod xeb;

pub use distributions::{Regime, SystemDims, UnitUniform};
pub use error::{Error, Result};
