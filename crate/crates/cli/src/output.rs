//! Report rendering.
//!
//! JSON reports share one shape:
//!
//! ```json
//! {
//!   "command": "distance",
//!   "config":  { "constants": {...}, "state": {...}, "quadrature": {...} },
//!   "input":   { ... command-specific ... },
//!   "rows":    [ { ... one flat record per result ... } ]
//! }
//! ```
//!
//! CSV output is the `rows` array with a header line; the numbers are written
//! by the same shortest round-trip formatter, so both formats agree exactly.
//! Text output is for reading only.

use std::io::Write;

use ncst_core::config::EffectiveConfig;
use serde::Serialize;

use crate::args::Format;
use crate::CliError;

#[derive(Serialize)]
struct Report<'a, I, R> {
    command: &'a str,
    config: &'a EffectiveConfig,
    input: &'a I,
    rows: &'a [R],
}

pub fn emit<I, R>(
    format: Format,
    command: &str,
    config: &EffectiveConfig,
    input: &I,
    rows: &[R],
    text: impl FnOnce(&[R]) -> String,
) -> Result<(), CliError>
where
    I: Serialize,
    R: Serialize,
{
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match format {
        Format::Json => {
            let report = Report {
                command,
                config,
                input,
                rows,
            };
            serde_json::to_writer_pretty(&mut out, &report).map_err(CliError::io)?;
            writeln!(out).map_err(CliError::io)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for row in rows {
                w.serialize(row).map_err(CliError::io)?;
            }
            w.flush().map_err(CliError::io)?;
        }
        Format::Text => {
            write!(out, "{}", text(rows)).map_err(CliError::io)?;
        }
    }
    Ok(())
}

/// `value ± error` in a fixed scientific layout.
pub fn pm(value: f64, error: f64) -> String {
    format!("{value:>+.9e} ± {error:.2e}")
}
