mod args;
mod commands;
mod config;
mod error;
mod output;

use std::ffi::OsString;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;

use crate::args::Cli;
use crate::error::CliError;

fn fail(err: CliError) -> ExitCode {
    eprintln!("{}", err.to_json());
    ExitCode::from(err.exit_code())
}

fn main() -> ExitCode {
    let mut argv: Vec<OsString> = std::env::args_os().collect();
    if let Some(path) = config::config_path(&argv) {
        argv = match config::merge_config(argv, Path::new(&path)) {
            Ok(merged) => merged,
            Err(e) => return fail(e),
        };
    }
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match commands::run(cli) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => fail(e),
    }
}
