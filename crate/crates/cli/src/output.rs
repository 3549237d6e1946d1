//! Locale-independent number formatting and output sinks.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::failure::Outcome;

/// Twelve significant digits in scientific notation; empty for NaN.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else {
        format!("{x:.11e}")
    }
}

/// Fixed four decimals, for dB quantities.
pub fn db(x: f64) -> String {
    format!("{x:.4}")
}

pub fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new())
}

pub fn csv_bytes(w: csv::Writer<Vec<u8>>) -> Vec<u8> {
    w.into_inner().expect("writing to memory cannot fail")
}

/// Writes the complete output at once: to `path`, or to stdout.
pub fn emit(path: Option<&Path>, bytes: &[u8]) -> Outcome<()> {
    match path {
        Some(p) => fs::write(p, bytes)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
        }
    }
    Ok(())
}

pub fn read(path: &Path) -> Outcome<String> {
    fs::read_to_string(path)
        .map_err(|e| crate::failure::Failure::validation(format!("cannot read {}: {e}", path.display())))
}
