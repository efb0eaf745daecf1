//! CSV emission: 12 significant digits, '.' radix, '#'-prefixed header
//! comments, empty fields for undefined ratios, newline-terminated rows.
//! Identical config and build produce byte-identical files.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use crate::CliError;

/// 12 significant digits in scientific decimal form.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    format!("{x:.11e}")
}

/// Empty field for undefined values.
pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

pub fn version_string() -> String {
    format!(
        "kerrmodes {} ({})",
        env!("CARGO_PKG_VERSION"),
        env!("KERRMODES_GIT_HASH")
    )
}

/// CSV destination: a file when a path is configured, stdout otherwise.
pub struct CsvSink {
    out: Box<dyn Write>,
    pub to_stdout: bool,
}

impl CsvSink {
    pub fn open(path: Option<&Path>) -> Result<Self, CliError> {
        match path {
            Some(p) => {
                let file = File::create(p).map_err(|e| {
                    CliError::Numerical(format!("cannot create '{}': {e}", p.display()))
                })?;
                Ok(Self {
                    out: Box::new(BufWriter::new(file)),
                    to_stdout: false,
                })
            }
            None => Ok(Self {
                out: Box::new(BufWriter::new(io::stdout())),
                to_stdout: true,
            }),
        }
    }

    pub fn comment(&mut self, text: &str) -> Result<(), CliError> {
        writeln!(self.out, "# {text}").map_err(io_err)
    }

    /// The standard preamble: command, version, resolved config echo and
    /// derived quantities, each as a '# key = value' comment.
    pub fn preamble(
        &mut self,
        command: &str,
        entries: &[(String, String)],
    ) -> Result<(), CliError> {
        self.comment(&format!("command = {command}"))?;
        self.comment(&format!("version = {}", version_string()))?;
        for (key, value) in entries {
            self.comment(&format!("{key} = {value}"))?;
        }
        Ok(())
    }

    pub fn row(&mut self, fields: &[String]) -> Result<(), CliError> {
        writeln!(self.out, "{}", fields.join(",")).map_err(io_err)
    }

    pub fn header(&mut self, columns: &[&str]) -> Result<(), CliError> {
        writeln!(self.out, "{}", columns.join(",")).map_err(io_err)
    }

    pub fn finish(mut self) -> Result<(), CliError> {
        self.out.flush().map_err(io_err)
    }
}

fn io_err(e: io::Error) -> CliError {
    CliError::Numerical(format!("output write failed: {e}"))
}
