//! `ceos` command-line tool: build, query, bench, groundtruth, synth.

mod args;
mod commands;

use std::process::ExitCode;

use ceos_core::CeosError;
use clap::Parser;

use args::{Cli, Command};

fn exit_code(e: &CeosError) -> u8 {
    match e {
        CeosError::Parameter(_) => 2,
        CeosError::Format(_) | CeosError::Io(_) => 3,
        CeosError::Capacity { .. } => 4,
        CeosError::Internal(_) => 1,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("CEOS_LOG", "warn")).init();
    let cli = Cli::parse();
    let result = (|| {
        if let Some(t) = cli.threads {
            ceos_core::par::set_threads(t)?;
        }
        match cli.command {
            Command::Build(a) => commands::build(a),
            Command::Query(a) => commands::query(a),
            Command::Bench(a) => commands::bench(a),
            Command::Groundtruth(a) => commands::groundtruth(a),
            Command::Synth(a) => commands::synth(a),
        }
    })();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
