use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;

use slag::{run, write_output, Cli, CliError};

fn emit(cli: &Cli) -> Result<bool, CliError> {
    let out = run(cli)?;
    match &cli.output {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            write_output(&out, cli.format, &mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            write_output(&out, cli.format, &mut w)?;
        }
    }
    Ok(out.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match emit(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
