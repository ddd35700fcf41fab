// SPDX-License-Identifier: Apache-2.0

use clap::Parser;

use rcsforge::cli::{cap_override_from_env, run_command, Cli, RunConfig};

fn main() {
    let cli = Cli::try_parse().unwrap_or_else(|e| e.exit());
    let config = match cap_override_from_env().and_then(|cap| RunConfig::from_cli(cli, cap)) {
        Ok(config) => config,
        Err(e) => {
            eprintln!("rcsforge: {e}");
            std::process::exit(2);
        }
    };
    std::process::exit(run_command(&config));
}
