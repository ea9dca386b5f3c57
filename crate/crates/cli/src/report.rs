//! Report writing: JSON documents with the volatile timestamp isolated in
//! a header, plus RFC-4180 CSV sweep tables.

use anyhow::{Context, Result};
use serde::Serialize;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Serialize)]
pub struct ReportHeader {
    /// The only volatile field in a report; everything outside the header
    /// is byte-identical across reruns with the same config and seed.
    pub timestamp: String,
    pub tool: &'static str,
    pub version: &'static str,
}

impl ReportHeader {
    pub fn now() -> Self {
        ReportHeader {
            timestamp: chrono::Utc::now().to_rfc3339(),
            tool: "bergmod",
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report<C: Serialize, R: Serialize> {
    pub header: ReportHeader,
    pub scenario: &'static str,
    /// Fully resolved configuration (after CLI overrides).
    pub config: C,
    pub results: R,
}

pub fn write_report<C: Serialize, R: Serialize>(
    out_dir: &Path,
    report: &Report<C, R>,
) -> Result<PathBuf> {
    std::fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    let path = out_dir.join("report.json");
    let mut text = serde_json::to_string_pretty(report).context("serializing report")?;
    text.push('\n');
    std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

pub fn write_csv(
    out_dir: &Path,
    name: &str,
    header: &[&str],
    rows: &[Vec<String>],
) -> Result<PathBuf> {
    std::fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    let path = out_dir.join(name);
    let mut writer =
        csv::Writer::from_path(&path).with_context(|| format!("opening {}", path.display()))?;
    writer.write_record(header)?;
    for row in rows {
        writer.write_record(row)?;
    }
    writer.flush()?;
    Ok(path)
}
