//! `qsympoly` command-line front end.
//!
//! Exit status: 0 when everything passed, 1 on a numerical failure, 2 on a
//! usage or validation error.

mod args;
mod commands;
mod report;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;
use qsympoly::DoubleDouble;

use crate::args::{Cli, Command};

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Numerical(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Numerical(_) => 1,
            Failure::Usage(_) => 2,
        }
    }
}

/// Canonical precision name from `QSYMPOLY_PRECISION`.
fn precision() -> Result<&'static str, Failure> {
    match std::env::var("QSYMPOLY_PRECISION") {
        Err(std::env::VarError::NotPresent) => Ok("f64"),
        Ok(v) => match v.trim().to_ascii_lowercase().as_str() {
            "" | "f64" | "double" => Ok("f64"),
            "double-double" | "dd" | "twofloat" => Ok("double-double"),
            other => Err(Failure::Usage(format!(
                "QSYMPOLY_PRECISION={other:?}: expected f64 or double-double"
            ))),
        },
        Err(e) => Err(Failure::Usage(format!("QSYMPOLY_PRECISION: {e}"))),
    }
}

fn output_args(cmd: &Command) -> &args::OutputArgs {
    match cmd {
        Command::Eval { output, .. }
        | Command::Table { output, .. }
        | Command::Check { output, .. }
        | Command::Export { output, .. } => output,
    }
}

fn run(cli: &Cli) -> Result<bool, Failure> {
    let precision = precision()?;
    let report = match precision {
        "f64" => commands::run::<f64>(&cli.command, precision)?,
        _ => commands::run::<DoubleDouble>(&cli.command, precision)?,
    };
    let out = output_args(&cli.command);
    let io_err = |e: io::Error| Failure::Usage(format!("cannot write output: {e}"));
    match &out.output {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| Failure::Usage(format!("cannot create {}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            report.write_to(out.format, &mut w).map_err(io_err)?;
            w.flush().map_err(io_err)?;
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            report.write_to(out.format, &mut lock).map_err(io_err)?;
        }
    }
    for e in &report.errors {
        eprintln!("error: {e}");
    }
    Ok(report.errors.is_empty())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            let (Failure::Usage(msg) | Failure::Numerical(msg)) = &f;
            eprintln!("qsympoly: {msg}");
            ExitCode::from(f.code())
        }
    }
}
