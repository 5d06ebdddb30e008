use clap::Parser;
use narrow_escape_cli::{execute, Cli};
use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let (kind, args) = Cli::parse().command.split();
    match execute(kind, args) {
        Ok((text, verdict)) => {
            let _ = std::io::stdout().write_all(text.as_bytes());
            match verdict {
                None => ExitCode::SUCCESS,
                Some(e) => {
                    eprintln!("{e}");
                    ExitCode::from(e.exit_code() as u8)
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
