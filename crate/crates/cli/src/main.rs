mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;
use discovery_core::Error;

use args::{Cli, Command};

// 0 success, 2 input error, 3 numeric infeasibility, 4 sampler stall.
fn exit_code(err: &anyhow::Error) -> u8 {
    match err.chain().find_map(|e| e.downcast_ref::<Error>()) {
        Some(Error::SamplerStall(_)) => 4,
        Some(Error::PrecisionLoss { .. } | Error::Infeasible(_) | Error::Domain(_) | Error::InvalidState(_)) => 3,
        _ => 2,
    }
}

fn run(cli: &Cli) -> anyhow::Result<()> {
    let (report, out) = match &cli.command {
        Command::Fit(a) => (commands::fit(a)?, &a.output),
        Command::Estimate(a) => (commands::estimate(a)?, &a.output),
        Command::Interval(a) => (commands::interval(a)?, &a.output),
        Command::Simulate(a) => (commands::simulate(a)?, &a.output),
        Command::Sensitivity(a) => (commands::sensitivity(a)?, &a.output),
        Command::PosteriorGrid(a) => (commands::posterior(a)?, &a.output),
    };
    report.emit(out.format, out.out.as_deref())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
