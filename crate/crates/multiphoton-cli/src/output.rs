//! CSV and JSON emission with atomic writes.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io;
use std::path::{Path, PathBuf};

use serde::Serialize;

use multiphoton::experiments::{ExperimentReport, ParamValue};
use multiphoton::scan::{Check, ScanResult};

/// Writes via a temp file in the same directory, then renames into place.
fn write_atomic(path: &Path, contents: &str) -> io::Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    std::fs::create_dir_all(dir)?;
    let file_name = path
        .file_name()
        .and_then(|n| n.to_str())
        .unwrap_or("output");
    let tmp = dir.join(format!(".{file_name}.tmp"));
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Header row (parameter then observables), one data row per scan point.
/// Values use shortest round-trip decimal formatting.
pub fn render_csv(scan: &ScanResult) -> String {
    let mut out = String::new();
    out.push_str(&scan.parameter);
    for name in &scan.observables {
        out.push(',');
        out.push_str(name);
    }
    out.push('\n');
    for row in &scan.rows {
        let _ = write!(out, "{}", row.parameter);
        for value in &row.values {
            let _ = write!(out, ",{value}");
        }
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct Summary<'a> {
    experiment: &'a str,
    parameters: &'a BTreeMap<String, ParamValue>,
    pass: bool,
    checks: &'a [Check],
}

pub fn render_summary(report: &ExperimentReport) -> String {
    let summary = Summary {
        experiment: &report.scan.experiment,
        parameters: &report.resolved_params,
        pass: report.passed(),
        checks: &report.checks,
    };
    let mut text = serde_json::to_string_pretty(&summary).expect("summary serializes");
    text.push('\n');
    text
}

pub struct WrittenFiles {
    pub csv: Option<PathBuf>,
    pub json: Option<PathBuf>,
}

pub fn write_report(
    report: &ExperimentReport,
    dir: &Path,
    csv: bool,
    json: bool,
) -> io::Result<WrittenFiles> {
    let name = &report.scan.experiment;
    let mut written = WrittenFiles {
        csv: None,
        json: None,
    };
    if csv {
        let path = dir.join(format!("{name}.csv"));
        write_atomic(&path, &render_csv(&report.scan))?;
        written.csv = Some(path);
    }
    if json {
        let path = dir.join(format!("{name}.summary.json"));
        write_atomic(&path, &render_summary(report))?;
        written.json = Some(path);
    }
    Ok(written)
}
