//! Deterministic file output.
//!
//! Every number leaves through the same 17-significant-digit format so that
//! repeated runs with the same configuration produce byte-identical files.

use serde::Serialize;
use std::fs;
use std::io;
use std::path::Path;

/// Render a float with 17 significant digits, enough to round-trip f64.
pub fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

/// Write a header line followed by prebuilt rows, creating parent
/// directories as needed.
pub fn write_csv<I>(path: &Path, header: &str, rows: I) -> io::Result<()>
where
    I: IntoIterator<Item = String>,
{
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let mut body = String::with_capacity(4096);
    body.push_str(header);
    body.push('\n');
    for row in rows {
        body.push_str(&row);
        body.push('\n');
    }
    fs::write(path, body)
}

/// Serialize a report as pretty JSON with a trailing newline.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> io::Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let mut body = serde_json::to_string_pretty(value)
        .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?;
    body.push('\n');
    fs::write(path, body)
}
