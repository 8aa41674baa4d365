use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use permspec_cli::{run, Cli, EXIT_INVALID};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_INVALID as u8),
            };
        }
    };
    let out = run(&cli);
    for line in &out.stderr {
        eprintln!("{line}");
    }
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &out.stdout).map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout()
            .write_all(out.stdout.as_bytes())
            .map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_INVALID as u8);
    }
    ExitCode::from(out.code as u8)
}
