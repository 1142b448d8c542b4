mod args;
mod commands;

use std::io;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::UsageError;

/// 2 for usage mistakes and missing files, 1 for everything else.
fn failure_code(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if cause.is::<UsageError>() {
            return 2;
        }
        if let Some(io) = cause.downcast_ref::<io::Error>() {
            if io.kind() == io::ErrorKind::NotFound {
                return 2;
            }
        }
    }
    1
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Train(a) => commands::cmd_train(a),
        Command::Segment(a) => commands::cmd_segment(a),
        Command::Eval(a) => commands::cmd_eval(a),
        Command::Sweep(a) => commands::cmd_sweep(a),
        Command::Synth(a) => commands::cmd_synth(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("segspectral: {e:#}");
            ExitCode::from(failure_code(&e))
        }
    }
}
