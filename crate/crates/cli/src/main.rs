use std::process::ExitCode;

use clap::Parser;
use copycat_cli::{apply_cell_cap, execute, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cap = std::env::var("COPYCAT_MAX_CELLS").ok();
    let result =
        apply_cell_cap(cap.as_deref()).and_then(|()| execute(&cli, &mut std::io::stdout().lock()));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("copycat: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
