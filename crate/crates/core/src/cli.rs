//! The `flwc` command line: config loading, scenario generation, both
//! schedulers, seed sweeps and report emission.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use thiserror::Error;

use crate::fuzzy::{Fis, FuzzyError, RuleBase};
use crate::metrics::{
    compare_schemes, run_sweep, summarize, ComparisonReport, SchemeOutcome, SweepSummary,
};
use crate::report;
use crate::scenario::{fleet_to_csv, load_fleet_csv, sample_fleet, ScenarioConfig, ScenarioError};
use crate::sim::{run_simulation, SchedulingScheme, SimError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Usage(#[from] clap::Error),

    #[error(transparent)]
    Config(#[from] ScenarioError),

    #[error(transparent)]
    Fuzzy(#[from] FuzzyError),

    #[error(transparent)]
    Sim(#[from] SimError),

    #[error("failed to write `{path}`")]
    Write {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeSelect {
    Flwc,
    Fcfs,
    Both,
}

/// Whether the run uses one seed or sweeps a range of them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeedMode {
    Single(u64),
    Sweep(u64),
}

/// A fully validated run: the loaded configuration plus everything the
/// executor needs.
#[derive(Debug, Clone)]
pub struct RunSpec {
    pub cfg: ScenarioConfig,
    pub scheme: SchemeSelect,
    pub seed_mode: SeedMode,
    pub out_dir: PathBuf,
    pub rules_path: Option<PathBuf>,
    pub fleet_path: Option<PathBuf>,
    pub events: bool,
}

#[derive(Parser, Debug)]
#[command(
    name = "flwc",
    about = "Slot-based EV charging lot simulator: fuzzy-weight coordination vs. first-come-first-serve",
    version
)]
struct Args {
    /// Key-value configuration file; defaults apply for missing keys.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Scheduling scheme(s) to run.
    #[arg(long, value_enum, default_value_t = SchemeSelect::Both)]
    scheme: SchemeSelect,

    /// RNG seed for fleet generation (default 0).
    #[arg(long, conflicts_with = "seeds", value_name = "N")]
    seed: Option<u64>,

    /// Sweep this many consecutive seeds, starting at the configured seed.
    #[arg(long, value_name = "N", value_parser = clap::value_parser!(u64).range(1..))]
    seeds: Option<u64>,

    /// Output directory (created if missing).
    #[arg(long, default_value = "out", value_name = "DIR")]
    out: PathBuf,

    /// Rule-base file replacing the built-in 25-rule matrix.
    #[arg(long, value_name = "PATH")]
    rules: Option<PathBuf>,

    /// Replay a fleet CSV instead of sampling one.
    #[arg(long, conflicts_with = "seeds", value_name = "PATH")]
    fleet: Option<PathBuf>,

    /// Also write per-scheme event logs.
    #[arg(long)]
    events: bool,
}

/// Parses and validates command-line arguments, loading the configuration
/// file so that every config error surfaces as a usage error naming the
/// offending key.
pub fn parse_and_validate<I, T>(args: I) -> Result<RunSpec, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = Args::try_parse_from(args)?;
    let mut cfg = match &args.config {
        Some(path) => ScenarioConfig::from_file(path)?,
        None => ScenarioConfig::default(),
    };
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    cfg.validate()?;
    let seed_mode = match args.seeds {
        Some(n) => SeedMode::Sweep(n),
        None => SeedMode::Single(cfg.seed),
    };
    Ok(RunSpec {
        cfg,
        scheme: args.scheme,
        seed_mode,
        out_dir: args.out,
        rules_path: args.rules,
        fleet_path: args.fleet,
        events: args.events,
    })
}

fn schemes_of(select: SchemeSelect) -> Vec<SchedulingScheme> {
    match select {
        SchemeSelect::Flwc => vec![SchedulingScheme::Flwc],
        SchemeSelect::Fcfs => vec![SchedulingScheme::Fcfs],
        SchemeSelect::Both => vec![SchedulingScheme::Flwc, SchedulingScheme::Fcfs],
    }
}

struct RunOutput {
    outcomes: Vec<SchemeOutcome>,
    comparisons: Vec<ComparisonReport>,
    summary: Option<SweepSummary>,
    /// (file stem, events) pairs to write when requested.
    event_logs: Vec<(String, Vec<crate::sim::Event>)>,
    /// Exported fleet, on single-seed generated runs.
    fleet_csv: Option<String>,
}

fn execute_inner(spec: &RunSpec, fis: &Fis) -> Result<RunOutput, CliError> {
    let cfg = &spec.cfg;
    match (spec.seed_mode, &spec.fleet_path) {
        (SeedMode::Sweep(n_seeds), None) => {
            if spec.scheme != SchemeSelect::Both {
                // Single-scheme sweep: run per seed without the pairing.
                let mut outcomes = Vec::new();
                let mut event_logs = Vec::new();
                for offset in 0..n_seeds {
                    let seed_cfg = ScenarioConfig { seed: cfg.seed + offset, ..cfg.clone() };
                    let fleet = sample_fleet(&seed_cfg)?;
                    for scheme in schemes_of(spec.scheme) {
                        let result = run_simulation(&fleet, &seed_cfg, scheme, fis)?;
                        if spec.events {
                            event_logs.push((
                                format!("events_{}_seed{}", scheme, seed_cfg.seed),
                                result.events.clone(),
                            ));
                        }
                        outcomes.push(SchemeOutcome::from_result(&result, seed_cfg.seed));
                    }
                }
                Ok(RunOutput {
                    outcomes,
                    comparisons: Vec::new(),
                    summary: None,
                    event_logs,
                    fleet_csv: None,
                })
            } else {
                let reports = run_sweep(cfg, n_seeds, fis, true)?;
                let summary = summarize(&reports);
                let outcomes = reports
                    .iter()
                    .flat_map(|r| [r.flwc.clone(), r.fcfs.clone()])
                    .collect();
                let event_logs = if spec.events {
                    // The sweep keeps only aggregate numbers; re-run per
                    // seed for the traces.
                    let mut logs = Vec::new();
                    for offset in 0..n_seeds {
                        let seed_cfg = ScenarioConfig { seed: cfg.seed + offset, ..cfg.clone() };
                        let fleet = sample_fleet(&seed_cfg)?;
                        for scheme in schemes_of(SchemeSelect::Both) {
                            let result = run_simulation(&fleet, &seed_cfg, scheme, fis)?;
                            logs.push((
                                format!("events_{}_seed{}", scheme, seed_cfg.seed),
                                result.events,
                            ));
                        }
                    }
                    logs
                } else {
                    Vec::new()
                };
                Ok(RunOutput {
                    outcomes,
                    comparisons: reports,
                    summary,
                    event_logs,
                    fleet_csv: None,
                })
            }
        }
        (SeedMode::Sweep(_), Some(_)) => unreachable!("clap forbids --seeds with --fleet"),
        (SeedMode::Single(seed), fleet_path) => {
            let seed_cfg = ScenarioConfig { seed, ..cfg.clone() };
            let (fleet, fleet_csv) = match fleet_path {
                Some(path) => (load_fleet_csv(path)?, None),
                None => {
                    let fleet = sample_fleet(&seed_cfg)?;
                    let csv = fleet_to_csv(&fleet);
                    (fleet, Some(csv))
                }
            };
            let mut outcomes = Vec::new();
            let mut comparisons = Vec::new();
            let mut event_logs = Vec::new();
            if spec.scheme == SchemeSelect::Both {
                let report = compare_schemes(&fleet, &seed_cfg, fis)?;
                outcomes.push(report.flwc.clone());
                outcomes.push(report.fcfs.clone());
                comparisons.push(report);
            }
            for scheme in schemes_of(spec.scheme) {
                let needs_result = spec.events || spec.scheme != SchemeSelect::Both;
                if !needs_result {
                    continue;
                }
                let result = run_simulation(&fleet, &seed_cfg, scheme, fis)?;
                if spec.scheme != SchemeSelect::Both {
                    outcomes.push(SchemeOutcome::from_result(&result, seed_cfg.seed));
                }
                if spec.events {
                    event_logs.push((format!("events_{scheme}"), result.events));
                }
            }
            Ok(RunOutput {
                outcomes,
                comparisons,
                summary: None,
                event_logs,
                fleet_csv,
            })
        }
    }
}

/// Runs the spec end to end and writes `summary.csv`, `stations.csv`,
/// `report.txt`, the fleet export on generated single-seed runs, and
/// event logs when requested.
pub fn execute(spec: &RunSpec) -> Result<(), CliError> {
    let fis = match &spec.rules_path {
        Some(path) => Fis::builder().rules(RuleBase::from_file(path)?).build()?,
        None => Fis::default(),
    };
    let output = execute_inner(spec, &fis)?;

    std::fs::create_dir_all(&spec.out_dir).map_err(|source| CliError::Write {
        path: spec.out_dir.display().to_string(),
        source,
    })?;
    let write = |name: &str, contents: &str| -> Result<(), CliError> {
        let path = spec.out_dir.join(name);
        report::atomic_write(&path, contents).map_err(|source| CliError::Write {
            path: path.display().to_string(),
            source,
        })
    };

    write(
        "summary.csv",
        &report::render_summary_csv(&output.outcomes, output.summary.as_ref()),
    )?;
    write("stations.csv", &report::render_stations_csv(&output.outcomes))?;
    write(
        "report.txt",
        &report::render_report_txt(
            &output.outcomes,
            &output.comparisons,
            output.summary.as_ref(),
        ),
    )?;
    if let Some(fleet_csv) = &output.fleet_csv {
        write("fleet.csv", fleet_csv)?;
    }
    for (stem, events) in &output.event_logs {
        write(&format!("{stem}.csv"), &report::render_events_csv(events))?;
    }
    Ok(())
}

/// Entry point used by the binary; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let spec = match parse_and_validate(args) {
        Ok(spec) => spec,
        Err(CliError::Usage(err)) => {
            let code = if err.exit_code() == 0 { 0 } else { 2 };
            let _ = err.print();
            return code;
        }
        Err(err) => {
            eprintln!("error: {err}");
            print_cause_chain(&err);
            return 2;
        }
    };
    match execute(&spec) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            print_cause_chain(&err);
            1
        }
    }
}

fn print_cause_chain(err: &dyn std::error::Error) {
    let mut source = err.source();
    while let Some(cause) = source {
        eprintln!("  caused by: {cause}");
        source = cause.source();
    }
}
