// SPDX-License-Identifier: Apache-2.0

//! The `rcsforge` command-line tool.
//!
//! ```text
//! rcsforge <xeb|state|verify|hist> --qubits N --seed S [--samples N] [--threads T|auto]
//!          [--format jsonl|csv] [--out PATH] [--manifest PATH] [--bins B] [--phases]
//! ```
//!
//! Data records go to `--out` (default stdout). Each run also produces one
//! manifest record, a JSON line carrying the configuration, tool version,
//! wall-clock time and a result summary; it goes to `--manifest` when given
//! and to stderr otherwise, so data output stays byte-identical between runs.

pub mod records;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::num::NonZeroUsize;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use clap::{Parser, ValueEnum};

use crate::distributions::SystemDims;
use crate::error::{Error, Result};
use crate::haar_oracle::{
    equivalence_checks, passes_majority, trial_seeds, CheckKind, OracleSampler,
};
use crate::rng::substream;
use crate::state_sampler::StateSampler;
use crate::xeb::{run_xeb, BitString};
use records::{Format, Record, RecordWriter, Value};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Environment variable overriding the per-command qubit caps.
pub const MAX_QUBITS_ENV: &str = "RCSFORGE_MAX_QUBITS";

pub const XEB_SCHEMA: &str = "rcsforge.xeb/1";
pub const STATE_SCHEMA: &str = "rcsforge.state/1";
pub const VERIFY_SCHEMA: &str = "rcsforge.verify/1";
pub const HIST_SCHEMA: &str = "rcsforge.hist/1";
pub const MANIFEST_SCHEMA: &str = "rcsforge.manifest/1";

pub const XEB_COLUMNS: [&str; 7] = [
    "schema",
    "qubits",
    "samples",
    "seed",
    "f_xeb",
    "three_sigma",
    "theoretical",
];
pub const STATE_COLUMNS: [&str; 4] = ["schema", "index", "bitstring", "p"];
pub const STATE_PHASE_COLUMNS: [&str; 5] = ["schema", "index", "bitstring", "p", "phase"];
pub const VERIFY_COLUMNS: [&str; 11] = [
    "schema",
    "check",
    "qubits",
    "seed",
    "statistic",
    "n_a",
    "n_b",
    "alpha",
    "critical_value",
    "reject",
    "passed",
];
pub const HIST_COLUMNS: [&str; 4] = ["schema", "bin_lo", "bin_hi", "count"];

pub const DEFAULT_XEB_SAMPLES: u64 = 1_000_000;
pub const DEFAULT_VERIFY_SAMPLES: u64 = 100_000;
pub const DEFAULT_HIST_BINS: usize = 40;
/// Histogram bins tile `[0, HIST_RANGE)` in rescaled probability; one
/// overflow bin collects the rest.
pub const HIST_RANGE: f64 = 10.0;
pub const VERIFY_ALPHA: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Estimate XEB fidelity from rescaled samples.
    Xeb,
    /// Print every component probability of one random state.
    State,
    /// Run the KS equivalence checks against the Gaussian oracle.
    Verify,
    /// Histogram of rescaled component probabilities of random states.
    Hist,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Xeb => "xeb",
            Command::State => "state",
            Command::Verify => "verify",
            Command::Hist => "hist",
        }
    }

    /// Qubit cap applied unless overridden through [`MAX_QUBITS_ENV`].
    pub fn default_cap(self) -> u64 {
        match self {
            Command::Xeb => crate::xeb::DEFAULT_MAX_BITS,
            Command::State | Command::Hist => crate::state_sampler::DEFAULT_MAX_FULL_STATE_QUBITS,
            Command::Verify => crate::haar_oracle::ORACLE_MAX_QUBITS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Threads {
    Auto,
    Count(NonZeroUsize),
}

impl Threads {
    pub fn resolve(self) -> usize {
        match self {
            Threads::Auto => std::thread::available_parallelism().map_or(1, NonZeroUsize::get),
            Threads::Count(n) => n.get(),
        }
    }
}

impl FromStr for Threads {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "auto" {
            return Ok(Threads::Auto);
        }
        s.parse::<NonZeroUsize>()
            .map(Threads::Count)
            .map_err(|_| format!("expected a positive integer or `auto`, got {s:?}"))
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "rcsforge",
    version,
    about = "Monte Carlo random circuit sampling and XEB estimation"
)]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    #[arg(long)]
    pub qubits: u64,
    /// Samples (xeb, verify) or states (hist); ignored by state.
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value = "auto")]
    pub threads: Threads,
    #[arg(long, value_enum, default_value_t = Format::Jsonl)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Where to write the manifest record; stderr when omitted.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Histogram bins over [0, 10) (hist only).
    #[arg(long)]
    pub bins: Option<usize>,
    /// Add a phase column (state only).
    #[arg(long)]
    pub phases: bool,
}

/// A validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub qubits: u64,
    pub samples: u64,
    pub seed: u64,
    pub threads: Threads,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub manifest: Option<PathBuf>,
    pub bins: usize,
    pub phases: bool,
    pub max_qubits: u64,
}

impl RunConfig {
    /// Checks arguments against the command's limits. `cap_override` is the
    /// parsed value of [`MAX_QUBITS_ENV`], if set.
    pub fn from_cli(cli: Cli, cap_override: Option<u64>) -> Result<Self> {
        let max_qubits = cap_override.unwrap_or(cli.command.default_cap());
        if cli.qubits == 0 {
            return Err(Error::InvalidArgument("--qubits must be positive".into()));
        }
        if cli.qubits > max_qubits {
            return Err(Error::Capacity {
                what: cli.command.name(),
                requested: cli.qubits,
                cap: max_qubits,
            });
        }
        let samples = match cli.command {
            Command::Xeb => cli.samples.unwrap_or(DEFAULT_XEB_SAMPLES),
            Command::Verify => cli.samples.unwrap_or(DEFAULT_VERIFY_SAMPLES),
            Command::Hist => cli.samples.unwrap_or(1),
            Command::State => 1,
        };
        if samples == 0 || (cli.command == Command::Xeb && samples < 2) {
            return Err(Error::InvalidArgument(format!(
                "--samples {samples} is too small for {}",
                cli.command.name()
            )));
        }
        let bins = cli.bins.unwrap_or(DEFAULT_HIST_BINS);
        if bins == 0 {
            return Err(Error::InvalidArgument("--bins must be positive".into()));
        }
        Ok(RunConfig {
            command: cli.command,
            qubits: cli.qubits,
            samples,
            seed: cli.seed,
            threads: cli.threads,
            format: cli.format,
            out: cli.out,
            manifest: cli.manifest,
            bins,
            phases: cli.phases,
            max_qubits,
        })
    }
}

/// Reads [`MAX_QUBITS_ENV`].
pub fn cap_override_from_env() -> Result<Option<u64>> {
    match std::env::var(MAX_QUBITS_ENV) {
        Ok(v) => v.trim().parse().map(Some).map_err(|_| {
            Error::InvalidArgument(format!("{MAX_QUBITS_ENV} must be an integer, got {v:?}"))
        }),
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(Error::InvalidArgument(format!("{MAX_QUBITS_ENV}: {e}"))),
    }
}

/// What a finished run produced besides its data records.
#[derive(Debug, Clone)]
pub struct Outcome {
    /// False when `verify` found a check failing on a majority of seeds.
    pub success: bool,
    pub manifest: Record,
}

struct Summary {
    rows: u64,
    success: bool,
    extra: Vec<(&'static str, Value)>,
}

/// Runs `config`, writing data records to `out`.
pub fn execute<W: Write>(config: &RunConfig, out: W) -> Result<Outcome> {
    let threads = config.threads.resolve();
    let started = Instant::now();
    let summary = match config.command {
        Command::Xeb => run_xeb_command(config, threads, out)?,
        Command::State => run_state_command(config, out)?,
        Command::Verify => run_verify_command(config, out)?,
        Command::Hist => run_hist_command(config, out)?,
    };
    let elapsed = started.elapsed().as_secs_f64();
    let mut manifest = Record::new(MANIFEST_SCHEMA)
        .with("command", config.command.name())
        .with("qubits", config.qubits)
        .with("samples", config.samples)
        .with("seed", config.seed)
        .with("threads", threads)
        .with("format", config.format.name())
        .with("version", VERSION)
        .with("time_s", elapsed)
        .with("rows", summary.rows);
    for (k, v) in summary.extra {
        manifest = manifest.with(k, v);
    }
    Ok(Outcome {
        success: summary.success,
        manifest,
    })
}

/// Runs `config` against its configured destinations and returns the
/// process exit status: 0 on success, 1 for runtime failures (including
/// failed verification), 2 for argument errors.
pub fn run_command(config: &RunConfig) -> i32 {
    let result = (|| -> Result<Outcome> {
        let outcome = match &config.out {
            Some(path) => execute(config, BufWriter::new(File::create(path)?))?,
            None => execute(config, BufWriter::new(io::stdout().lock()))?,
        };
        let line = records::to_json_line(&outcome.manifest);
        match &config.manifest {
            Some(path) => writeln!(File::create(path)?, "{line}")?,
            None => writeln!(io::stderr(), "{line}")?,
        }
        Ok(outcome)
    })();
    match result {
        Ok(outcome) if outcome.success => 0,
        Ok(_) => {
            eprintln!("rcsforge: verification failed");
            1
        }
        Err(e) => {
            eprintln!("rcsforge: {e}");
            if e.is_usage() {
                2
            } else {
                1
            }
        }
    }
}

fn run_xeb_command<W: Write>(config: &RunConfig, threads: usize, out: W) -> Result<Summary> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Io(io::Error::other(e)))?;
    let est = pool.install(|| run_xeb(config.qubits, config.samples, config.seed, threads))?;
    let record = Record::new(XEB_SCHEMA)
        .with("qubits", est.qubits)
        .with("samples", est.samples)
        .with("seed", config.seed)
        .with("f_xeb", est.f_xeb)
        .with("three_sigma", est.three_sigma)
        .with("theoretical", est.theoretical);
    let mut writer = RecordWriter::new(out, config.format, &XEB_COLUMNS)?;
    writer.write(&record)?;
    writer.finish()?;
    Ok(Summary {
        rows: 1,
        success: true,
        extra: vec![
            ("f_xeb", est.f_xeb.into()),
            ("three_sigma", est.three_sigma.into()),
        ],
    })
}

fn run_state_command<W: Write>(config: &RunConfig, out: W) -> Result<Summary> {
    let dims = SystemDims::new(config.qubits)?;
    let sampler = StateSampler::with_max_qubits(config.max_qubits);
    let state = sampler.sample_state(dims, &mut substream(config.seed, 0))?;
    let columns: &[&str] = if config.phases {
        &STATE_PHASE_COLUMNS
    } else {
        &STATE_COLUMNS
    };
    let mut writer = RecordWriter::new(out, config.format, columns)?;
    for b in 0..state.dim() {
        let mut record = Record::new(STATE_SCHEMA)
            .with("index", b)
            .with(
                "bitstring",
                BitString::from_index(config.qubits, b as u64).to_hex(),
            )
            .with("p", state.prob_at(b));
        if config.phases {
            record = record.with("phase", state.phases()[b]);
        }
        writer.write(&record)?;
    }
    writer.finish()?;
    Ok(Summary {
        rows: state.dim() as u64,
        success: true,
        extra: Vec::new(),
    })
}

fn run_verify_command<W: Write>(config: &RunConfig, out: W) -> Result<Summary> {
    let dims = SystemDims::new(config.qubits)?;
    let states = StateSampler::with_max_qubits(config.max_qubits);
    let oracle = OracleSampler::with_max_qubits(config.max_qubits);
    let samples = usize::try_from(config.samples)
        .map_err(|_| Error::InvalidArgument("--samples too large".into()))?;
    let mut checks = Vec::new();
    for seed in trial_seeds(config.seed) {
        checks.extend(equivalence_checks(
            dims,
            samples,
            seed,
            VERIFY_ALPHA,
            &states,
            &oracle,
        )?);
    }
    let passed = |kind: CheckKind| {
        passes_majority(
            checks
                .iter()
                .filter(|c| c.kind == kind)
                .map(|c| !c.report.reject),
        )
    };
    let all_passed = [
        CheckKind::SamplerVsOracle,
        CheckKind::SamplerExactLaw,
        CheckKind::OracleExactLaw,
    ]
    .into_iter()
    .all(passed);
    let mut writer = RecordWriter::new(out, config.format, &VERIFY_COLUMNS)?;
    for c in &checks {
        writer.write(
            &Record::new(VERIFY_SCHEMA)
                .with("check", c.kind.name())
                .with("qubits", c.qubits)
                .with("seed", c.seed)
                .with("statistic", c.report.statistic)
                .with("n_a", c.report.n_a)
                .with("n_b", c.report.n_b)
                .with("alpha", c.report.alpha)
                .with("critical_value", c.report.critical_value)
                .with("reject", c.report.reject)
                .with("passed", passed(c.kind)),
        )?;
    }
    writer.finish()?;
    Ok(Summary {
        rows: checks.len() as u64,
        success: all_passed,
        extra: vec![("passed", all_passed.into())],
    })
}

/// Counts of rescaled probabilities `p * D` per histogram bin, summed over
/// `states` random states; the last entry is the overflow bin.
pub fn histogram_counts(
    dims: SystemDims,
    states: u64,
    seed: u64,
    bins: usize,
    sampler: &StateSampler,
) -> Result<Vec<u64>> {
    let width = HIST_RANGE / bins as f64;
    let mut counts = vec![0u64; bins + 1];
    for k in 0..states {
        let probs = sampler.sample_probabilities(dims, &mut substream(seed, k))?;
        let d = probs.len() as f64;
        for &p in probs.as_slice() {
            let bin = ((p * d) / width).floor();
            let idx = if bin < bins as f64 {
                bin as usize
            } else {
                bins
            };
            counts[idx] += 1;
        }
    }
    Ok(counts)
}

fn run_hist_command<W: Write>(config: &RunConfig, out: W) -> Result<Summary> {
    let dims = SystemDims::new(config.qubits)?;
    let sampler = StateSampler::with_max_qubits(config.max_qubits);
    let counts = histogram_counts(dims, config.samples, config.seed, config.bins, &sampler)?;
    let width = HIST_RANGE / config.bins as f64;
    let mut writer = RecordWriter::new(out, config.format, &HIST_COLUMNS)?;
    for (i, &count) in counts.iter().enumerate() {
        let hi = (i < config.bins).then(|| (i + 1) as f64 * width);
        writer.write(
            &Record::new(HIST_SCHEMA)
                .with("bin_lo", i as f64 * width)
                .with("bin_hi", hi)
                .with("count", count),
        )?;
    }
    writer.finish()?;
    Ok(Summary {
        rows: counts.len() as u64,
        success: true,
        extra: vec![("states", config.samples.into())],
    })
}
