use std::io::Write;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{LabError, Result};

/// The only field allowed to differ between two runs of the same config.
pub const TIMESTAMP_FIELD: &str = "generated_at_unix";

#[derive(Debug, Clone, Serialize)]
pub struct Header {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub generated_at_unix: u64,
    pub config: RunConfig,
}

impl Header {
    pub fn new(command: &str, config: &RunConfig) -> Self {
        Header {
            tool: "ulambda",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            generated_at_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            config: config.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report<T> {
    pub header: Header,
    pub body: T,
}

impl<T: Serialize> Report<T> {
    pub fn new(command: &str, config: &RunConfig, body: T) -> Self {
        Report {
            header: Header::new(command, config),
            body,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        Ok(text)
    }
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| LabError::io(parent, e))?;
    }
    let mut file = std::fs::File::create(path).map_err(|e| LabError::io(path, e))?;
    file.write_all(contents.as_bytes())
        .map_err(|e| LabError::io(path, e))
}

/// Serializes rows to CSV text with the given header.
pub fn csv_text<I, R>(header: &[&str], rows: I) -> Result<String>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| LabError::io("<csv>", e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
