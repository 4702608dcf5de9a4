use std::process::ExitCode;

use clap::Parser;
use stabtherm::{execute, Cli};

fn main() -> ExitCode {
    let cfg = match Cli::parse().resolve() {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("stabtherm: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match execute(&cfg) {
        Ok(report) => {
            print!("{report}");
            ExitCode::SUCCESS
        }
        Err((e, report)) => {
            if let Some(report) = report {
                print!("{report}");
            }
            eprintln!("stabtherm: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
