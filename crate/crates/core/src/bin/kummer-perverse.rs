use std::process::ExitCode;

use clap::Parser;
use kummer_perverse::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            let written = match &cli.options.output {
                Some(path) => std::fs::write(path, &outcome.output).map_err(|e| format!("{}: {e}", path.display())),
                None => {
                    print!("{}", outcome.output);
                    Ok(())
                }
            };
            match written {
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
                Ok(()) if outcome.success => ExitCode::SUCCESS,
                Ok(()) => ExitCode::from(1),
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
