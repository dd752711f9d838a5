mod args;
mod commands;
mod input;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use rss_entropy::report::{format_float, to_csv, to_json};

use args::{Cli, OutputFormat};
use commands::{Body, CliError, Output};

fn render(out: &Output) -> Result<String, CliError> {
    let csv = out.format.output == OutputFormat::Csv;
    let mut text = String::new();
    if csv {
        text.push_str(&out.header.line());
        text.push('\n');
    }
    match (&out.body, csv) {
        (Body::Reports(rows), true) => text.push_str(&to_csv(rows)),
        (Body::Reports(rows), false) => text.push_str(&to_json(rows)?),
        (Body::Smooth(rows), true) => {
            text.push_str("index,raw,smoothed\n");
            for r in rows {
                text.push_str(&format!("{},{},{}\n", r.index, format_float(r.raw), format_float(r.smoothed)));
            }
        }
        (Body::Smooth(rows), false) => {
            text.push_str(&serde_json::to_string_pretty(rows).map_err(|e| CliError::Io(e.to_string()))?);
            text.push('\n');
        }
    }
    Ok(text)
}

fn emit(out: &Output) -> Result<(), CliError> {
    let text = render(out)?;
    if out.format.output == OutputFormat::Json {
        eprintln!("{}", out.header.line());
    }
    match &out.format.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(format!("cannot write stdout: {e}"))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command).and_then(|out| emit(&out)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Compute(e)) => {
            eprintln!("error: {}: {e}", e.name());
            ExitCode::from(1)
        }
        Err(CliError::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
