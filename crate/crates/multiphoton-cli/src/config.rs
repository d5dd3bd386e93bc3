//! Run configuration: flags layered over an optional flat config file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use multiphoton::experiments::{ParamValue, ScanRange};

/// Everything one `run` invocation needs.
#[derive(Clone, Debug, Default)]
pub struct RunConfig {
    pub experiment: Option<String>,
    pub parameters: BTreeMap<String, ParamValue>,
    pub scan: Option<ScanRange>,
    pub seed: Option<u64>,
    pub output_dir: Option<PathBuf>,
    pub formats: Option<Vec<Format>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug)]
pub enum ConfigError {
    Usage(String),
    Io(String),
}

impl ConfigError {
    fn usage(msg: impl Into<String>) -> Self {
        ConfigError::Usage(msg.into())
    }
}

pub fn parse_formats(raw: &str) -> Result<Vec<Format>, ConfigError> {
    let mut formats = Vec::new();
    for part in raw.split(',') {
        let part = part.trim();
        match part {
            "csv" => formats.push(Format::Csv),
            "json" => formats.push(Format::Json),
            "" => {}
            other => {
                return Err(ConfigError::usage(format!(
                    "unknown format '{other}' (expected csv and/or json)"
                )))
            }
        }
    }
    if formats.is_empty() {
        return Err(ConfigError::usage("at least one output format required"));
    }
    Ok(formats)
}

/// `--scan param:start:stop:steps`
pub fn parse_scan(raw: &str) -> Result<ScanRange, ConfigError> {
    let parts: Vec<&str> = raw.split(':').collect();
    if parts.len() != 4 {
        return Err(ConfigError::usage(
            "scan must look like parameter:start:stop:steps",
        ));
    }
    let start: f64 = parts[1]
        .parse()
        .map_err(|_| ConfigError::usage("scan start must be a number"))?;
    let stop: f64 = parts[2]
        .parse()
        .map_err(|_| ConfigError::usage("scan stop must be a number"))?;
    let steps: usize = parts[3]
        .parse()
        .map_err(|_| ConfigError::usage("scan steps must be an integer"))?;
    if steps < 2 {
        return Err(ConfigError::usage("scan needs at least 2 steps"));
    }
    Ok(ScanRange {
        parameter: parts[0].to_string(),
        start,
        stop,
        steps,
    })
}

/// `--param key=value`
pub fn parse_param(raw: &str) -> Result<(String, ParamValue), ConfigError> {
    let (key, value) = raw
        .split_once('=')
        .ok_or_else(|| ConfigError::usage("parameters must look like key=value"))?;
    let key = key.trim();
    if key.is_empty() {
        return Err(ConfigError::usage("empty parameter name"));
    }
    Ok((key.to_string(), ParamValue::parse(value.trim())))
}

/// Flat key-value config file: one `key = value` per line plus an optional
/// `[scan]` section with parameter/start/stop/steps entries. `#` starts a
/// comment. Unrecognized top-level keys become experiment parameters.
pub fn load_file(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError::Io(format!("cannot read {}: {e}", path.display())))?;
    let mut config = RunConfig::default();
    let mut in_scan = false;
    let mut scan_fields: BTreeMap<String, String> = BTreeMap::new();

    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if line == "[scan]" {
            in_scan = true;
            continue;
        }
        if line.starts_with('[') {
            return Err(ConfigError::usage(format!(
                "unknown section {line} at line {}",
                lineno + 1
            )));
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            ConfigError::usage(format!("expected key = value at line {}", lineno + 1))
        })?;
        let key = key.trim();
        let value = value.trim();
        if in_scan {
            scan_fields.insert(key.to_string(), value.to_string());
            continue;
        }
        match key {
            "experiment" => config.experiment = Some(value.to_string()),
            "seed" => {
                let seed: u64 = value
                    .parse()
                    .map_err(|_| ConfigError::usage("seed must be a non-negative integer"))?;
                config.seed = Some(seed);
            }
            "output_dir" => config.output_dir = Some(PathBuf::from(value)),
            "format" => config.formats = Some(parse_formats(value)?),
            other => {
                config
                    .parameters
                    .insert(other.to_string(), ParamValue::parse(value));
            }
        }
    }

    if !scan_fields.is_empty() {
        let need = |k: &str| {
            scan_fields
                .get(k)
                .ok_or_else(|| ConfigError::usage(format!("[scan] section missing '{k}'")))
        };
        let parameter = need("parameter")?.clone();
        let start: f64 = need("start")?
            .parse()
            .map_err(|_| ConfigError::usage("[scan] start must be a number"))?;
        let stop: f64 = need("stop")?
            .parse()
            .map_err(|_| ConfigError::usage("[scan] stop must be a number"))?;
        let steps: usize = need("steps")?
            .parse()
            .map_err(|_| ConfigError::usage("[scan] steps must be an integer"))?;
        if steps < 2 {
            return Err(ConfigError::usage("[scan] needs at least 2 steps"));
        }
        config.scan = Some(ScanRange {
            parameter,
            start,
            stop,
            steps,
        });
    }
    Ok(config)
}

/// Flags override file values; file fills the gaps.
pub fn merge(base: RunConfig, overlay: RunConfig) -> RunConfig {
    let mut parameters = base.parameters;
    parameters.extend(overlay.parameters);
    RunConfig {
        experiment: overlay.experiment.or(base.experiment),
        parameters,
        scan: overlay.scan.or(base.scan),
        seed: overlay.seed.or(base.seed),
        output_dir: overlay.output_dir.or(base.output_dir),
        formats: overlay.formats.or(base.formats),
    }
}
