//! Command-line front end: configuration parsing, command dispatch, report
//! serialization and certificate replay.

pub mod commands;
pub mod config;
pub mod report;

pub use commands::{error_report, run_command, Command};
pub use config::{parse_config, ConfigError, RunConfig};
pub use report::{emit_report, parse_report, to_canonical, ReportDocument, Status};

use clap::Parser;
use config::{parse_spec, Params, RatSpec};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "sminima", version, about = "S-Euclidean minima, covering certificates and norm-Euclidean decisions")]
pub struct Cli {
    /// JSON run configuration.
    #[arg(long)]
    pub config: PathBuf,
    /// One of info, snorm, m, search, cover, M, decide, form, orbit, dual, verify-cert.
    #[arg(long, value_parser = parse_command)]
    pub command: Command,
    /// Covering threshold, as "p/q".
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<String>,
    /// Target bracket width for M, as "p/q".
    #[arg(long)]
    pub gap: Option<String>,
    /// Largest denominator tried by the witness search.
    #[arg(long)]
    pub denom_bound: Option<u64>,
    /// Maximum number of covering box evaluations.
    #[arg(long)]
    pub budget: Option<u64>,
    /// Worker threads for covering; results do not depend on it.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Report path; standard output when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Report, certificate or witness file for verify-cert.
    #[arg(long)]
    pub cert: Option<PathBuf>,
    /// Point of K as comma-separated integral-basis coordinates.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub xi: Option<Vec<String>>,
    /// Random sample count for spot checks.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Seed for spot-check sampling.
    #[arg(long)]
    pub seed: Option<u64>,
}

fn parse_command(s: &str) -> Result<Command, String> {
    s.parse()
}

impl Cli {
    /// Parameters given on the command line; they replace those of the file.
    pub fn overrides(&self) -> Params {
        Params {
            t: self.t.clone().map(RatSpec::Text),
            gap: self.gap.clone().map(RatSpec::Text),
            denom_bound: self.denom_bound,
            budget: self.budget,
            workers: self.workers,
            xi: self.xi.as_ref().map(|v| v.iter().cloned().map(RatSpec::Text).collect()),
            samples: self.samples,
            seed: self.seed,
            certificate: self.cert.as_ref().map(|p| p.display().to_string()),
            ..Params::default()
        }
    }
}

/// Runs one invocation and returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    let name = cli.command.name();
    let mut output = cli.output.clone();
    let doc = match std::fs::read_to_string(&cli.config) {
        Err(e) => error_report(name, "io", format!("cannot read {}: {e}", cli.config.display())),
        Ok(text) => {
            let cfg = parse_spec(&text).and_then(|mut spec| {
                spec.params.merge(&cli.overrides());
                RunConfig::from_spec(spec)
            });
            match cfg {
                Err(e) => {
                    let kind = match e {
                        ConfigError::Parse { .. } => "parse",
                        ConfigError::Validation { .. } => "validation",
                    };
                    error_report(name, kind, e.to_string())
                }
                Ok(cfg) => {
                    if output.is_none() {
                        output = cfg.params.output.clone();
                    }
                    run_command(&cfg, cli.command)
                }
            }
        }
    };
    if let Some(err) = &doc.error {
        eprintln!("error ({}): {}", err.kind, err.message);
    }
    match emit_report(&doc, output.as_deref()) {
        Ok(()) => doc.exit_code(),
        Err(e) => {
            eprintln!("cannot write report: {e}");
            1
        }
    }
}
