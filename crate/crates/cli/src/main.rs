use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use wkan_cli::{run, Cli, Format};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (out, code) = run(&cli);
    if code == 2 && cli.format == Format::Text {
        eprint!("{out}");
    } else {
        let _ = std::io::stdout().write_all(out.as_bytes());
    }
    ExitCode::from(code as u8)
}
