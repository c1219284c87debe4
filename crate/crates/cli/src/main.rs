use std::process::ExitCode;

use clap::Parser;
use ncgalois_cli::{run, write_atomically, Cli, Failure};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(text) => match &cli.out {
            Some(path) => match write_atomically(path, &text) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => fail(&Failure::invalid(format!("{}: {e}", path.display()))),
            },
            None => {
                print!("{text}");
                ExitCode::SUCCESS
            }
        },
        Err(f) => fail(&f),
    }
}

fn fail(f: &Failure) -> ExitCode {
    print!("{}", f.to_json());
    ExitCode::from(f.exit_code as u8)
}
