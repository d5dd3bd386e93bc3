//! Command-line runner for the interference experiment suite.
//!
//! `multiphoton list` enumerates the registered experiments;
//! `multiphoton run --experiment NAME ...` executes one, writes
//! `<out>/<name>.csv` and `<out>/<name>.summary.json`, and exits 0 only if
//! every closed-form check passes. Exit codes: 0 success, 1 checks failed,
//! 2 usage error, 3 I/O error.

mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use multiphoton::experiments::{self, ParamDefault, RunInput};

use config::{ConfigError, Format, RunConfig};

/// Environment variable supplying the default output directory.
const OUT_ENV: &str = "MULTIPHOTON_OUT";

#[derive(Parser)]
#[command(
    name = "multiphoton",
    about = "Multi-photon interference experiments in lossless linear optics",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List registered experiments with their parameters.
    List,
    /// Run one experiment and write its scan and summary files.
    Run(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Experiment name (see `list`).
    #[arg(long)]
    experiment: Option<String>,
    /// Parameter override, key=value. Repeatable.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
    /// Scan override, parameter:start:stop:steps.
    #[arg(long, value_name = "SPEC")]
    scan: Option<String>,
    /// RNG seed for Monte Carlo experiments.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (default: $MULTIPHOTON_OUT, then the current dir).
    #[arg(long = "out", value_name = "DIR")]
    out: Option<PathBuf>,
    /// Comma-separated output formats: csv,json.
    #[arg(long, value_name = "LIST")]
    format: Option<String>,
    /// Flat key-value config file; flags override its values.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
}

fn list_experiments() -> String {
    let mut out = String::new();
    for def in experiments::registry() {
        let mut params = String::new();
        for (i, p) in def.params.iter().enumerate() {
            if i > 0 {
                params.push_str(", ");
            }
            match p.default {
                ParamDefault::Number(x) => {
                    params.push_str(&format!("{}={x}", p.name));
                }
                ParamDefault::Text(s) => {
                    params.push_str(&format!("{}={s}", p.name));
                }
            }
        }
        let scan = match def.default_scan {
            Some(s) => format!("; scan {}:{}:{}:{}", s.parameter, s.start, s.stop, s.steps),
            None => String::new(),
        };
        let params = if params.is_empty() {
            String::from("none")
        } else {
            params
        };
        out.push_str(&format!(
            "{} ({}) - {}; params: {params}{scan}\n",
            def.name, def.anchor, def.summary
        ));
    }
    out
}

fn args_to_config(args: &RunArgs) -> Result<RunConfig, ConfigError> {
    let mut cfg = RunConfig {
        experiment: args.experiment.clone(),
        seed: args.seed,
        output_dir: args.out.clone(),
        ..RunConfig::default()
    };
    for raw in &args.params {
        let (key, value) = config::parse_param(raw)?;
        cfg.parameters.insert(key, value);
    }
    if let Some(raw) = &args.scan {
        cfg.scan = Some(config::parse_scan(raw)?);
    }
    if let Some(raw) = &args.format {
        cfg.formats = Some(config::parse_formats(raw)?);
    }
    Ok(cfg)
}

enum RunFailure {
    Usage(String),
    Io(String),
    ChecksFailed,
}

fn execute(args: &RunArgs) -> Result<(), RunFailure> {
    let usage = |e: ConfigError| match e {
        ConfigError::Usage(msg) => RunFailure::Usage(msg),
        ConfigError::Io(msg) => RunFailure::Io(msg),
    };

    let mut cfg = RunConfig::default();
    if let Some(path) = &args.config {
        cfg = config::load_file(path).map_err(usage)?;
    }
    let cfg = config::merge(cfg, args_to_config(args).map_err(usage)?);

    let name = cfg
        .experiment
        .clone()
        .ok_or_else(|| RunFailure::Usage("no experiment given (use --experiment)".into()))?;

    let input = RunInput {
        params: cfg.parameters.clone(),
        scan: cfg.scan.clone(),
        seed: cfg.seed.unwrap_or(0),
    };
    let report = experiments::run(&name, &input).map_err(|e| RunFailure::Usage(e.to_string()))?;

    let out_dir = cfg
        .output_dir
        .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    let formats = cfg
        .formats
        .unwrap_or_else(|| vec![Format::Csv, Format::Json]);
    let written = output::write_report(
        &report,
        &out_dir,
        formats.contains(&Format::Csv),
        formats.contains(&Format::Json),
    )
    .map_err(|e| RunFailure::Io(e.to_string()))?;

    for path in [written.csv.as_ref(), written.json.as_ref()]
        .into_iter()
        .flatten()
    {
        println!("wrote {}", path.display());
    }
    let mut all_ok = true;
    for check in &report.checks {
        let status = if check.passed() { "pass" } else { "FAIL" };
        println!(
            "{status} {}: expected {} got {} (tolerance {})",
            check.name, check.expected, check.actual, check.tolerance
        );
        all_ok &= check.passed();
    }
    if all_ok {
        Ok(())
    } else {
        Err(RunFailure::ChecksFailed)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::List => {
            print!("{}", list_experiments());
            ExitCode::SUCCESS
        }
        Command::Run(args) => match execute(&args) {
            Ok(()) => ExitCode::SUCCESS,
            Err(RunFailure::ChecksFailed) => {
                eprintln!("error: one or more checks failed");
                ExitCode::from(1)
            }
            Err(RunFailure::Usage(msg)) => {
                eprintln!("error: {msg}");
                ExitCode::from(2)
            }
            Err(RunFailure::Io(msg)) => {
                eprintln!("error: {msg}");
                ExitCode::from(3)
            }
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn listing_mentions_the_registry_entries() {
        let listing = list_experiments();
        assert!(listing.contains("hom_dip (Eq. 11/12)"));
        assert!(listing.contains("visibility_vs_distinguishability (Eq. 53/54)"));
        // stable alphabetical ordering
        let lines: Vec<&str> = listing.lines().collect();
        let mut sorted = lines.clone();
        sorted.sort_unstable();
        assert_eq!(lines, sorted);
    }
}
