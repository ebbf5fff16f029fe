use std::process::ExitCode;

use clap::Parser;
use lpcert_cli::{run, Cli};

fn main() -> ExitCode {
    // Usage errors exit 1 (clap's default would be 2).
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { 1 } else { 0 };
            return ExitCode::from(code);
        }
    };
    ExitCode::from(run(cli))
}
