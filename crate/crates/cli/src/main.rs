use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use pbsi_cli::{resolve, run, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            eprintln!("pbsi: {}", first.trim_start_matches("error: "));
            return ExitCode::from(1);
        }
    };
    match resolve(cli).and_then(|cfg| run(&cfg)) {
        Ok(written) => {
            for p in written.iter().filter(|p| p.as_os_str() != "-") {
                eprintln!("wrote {}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("pbsi: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
