mod data;
mod lwlr;
mod mutinfo;
mod prf;
mod setfam;

use crate::args::{Cli, Command};
use crate::error::CliResult;
use crate::output::Output;

/// Runs the parsed command and returns the files it wrote.
pub fn run(cli: Cli) -> CliResult<Vec<std::path::PathBuf>> {
    let mut out = Output::new(&cli.out_dir, cli.format)?;
    let seed = cli.seed;
    match cli.command {
        Command::Simulate(args) => data::simulate(&args, seed, &mut out)?,
        Command::Fit(args) => data::fit(&args, &mut out)?,
        Command::Errors(args) => data::errors(&args, &mut out)?,
        Command::Repro(args) => data::repro(&args, seed, &mut out)?,
        Command::Lwlr(cmd) => lwlr::run(&cmd, seed, &mut out)?,
        Command::Prf(cmd) => prf::run(&cmd, seed, &mut out)?,
        Command::Setfam(cmd) => setfam::run(&cmd, &mut out)?,
        Command::Mutinfo(args) => mutinfo::run(&args, seed, &mut out)?,
    }
    Ok(out.written().to_vec())
}
