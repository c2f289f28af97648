mod args;
mod commands;
mod config;

use clap::Parser;

use carleman_lift::ErrorKind;

pub use args::Cli;

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;
pub const EXIT_IO: i32 = 1;

pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match commands::dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e.kind() {
                ErrorKind::Usage => EXIT_USAGE,
                ErrorKind::Precondition => EXIT_PRECONDITION,
                ErrorKind::Numeric => EXIT_NUMERIC,
                ErrorKind::Io => EXIT_IO,
            }
        }
    }
}
