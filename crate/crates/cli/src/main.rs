use std::process::ExitCode;

use clap::Parser;
use sqp_cli::cli::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match sqp_cli::commands::run(cli) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
