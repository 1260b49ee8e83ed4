//! Utilization and throughput metrics, and the FLWC-vs-FCFS comparison.
//!
//! Utilization of a charger is its busy time over the whole horizon,
//! `busy_slots_total / n_slots`. Occupancy counts as busy even when the
//! vehicle leaves before the charge completes, since the charger was in
//! use either way.

use rayon::prelude::*;

use crate::fuzzy::Fis;
use crate::scenario::{sample_fleet, EvRecord, ScenarioConfig};
use crate::sim::{run_simulation, SchedulingScheme, SimError, SimulationResult, StationState, StationSummary};

/// Busy fraction of one charger over the horizon.
pub fn station_utilization(station: &StationState, n_slots: usize) -> f64 {
    station.busy_slots_total as f64 / n_slots as f64
}

/// Arithmetic mean of the per-charger utilizations. Errors on an empty
/// station list.
pub fn average_utilization(
    stations: &[StationState],
    n_slots: usize,
) -> Result<f64, EmptyStationList> {
    if stations.is_empty() {
        return Err(EmptyStationList);
    }
    let sum: f64 = stations
        .iter()
        .map(|s| station_utilization(s, n_slots))
        .sum();
    Ok(sum / stations.len() as f64)
}

#[derive(Debug, thiserror::Error)]
#[error("cannot average utilization over an empty station list")]
pub struct EmptyStationList;

/// One scheme's numbers for one fleet.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeOutcome {
    pub scheme: SchedulingScheme,
    pub seed: u64,
    pub served: usize,
    pub unserved: usize,
    pub per_station: Vec<StationSummary>,
    pub avg_utilization: f64,
}

impl SchemeOutcome {
    pub fn from_result(result: &SimulationResult, seed: u64) -> Self {
        Self {
            scheme: result.scheme,
            seed,
            served: result.served_ids.len(),
            unserved: result.unserved_ids.len(),
            per_station: result.per_station.clone(),
            avg_utilization: result.avg_utilization,
        }
    }
}

/// Paired comparison of the two schemes on one identical fleet.
/// Deltas are FLWC minus FCFS.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub seed: u64,
    pub flwc: SchemeOutcome,
    pub fcfs: SchemeOutcome,
    pub served_delta: i64,
    pub avg_utilization_delta: f64,
}

/// Runs both schemes on the same fleet and assembles the paired report.
/// The seed recorded is `cfg.seed`.
pub fn compare_schemes(
    fleet: &[EvRecord],
    cfg: &ScenarioConfig,
    fis: &Fis,
) -> Result<ComparisonReport, SimError> {
    let flwc_result = run_simulation(fleet, cfg, SchedulingScheme::Flwc, fis)?;
    let fcfs_result = run_simulation(fleet, cfg, SchedulingScheme::Fcfs, fis)?;
    let flwc = SchemeOutcome::from_result(&flwc_result, cfg.seed);
    let fcfs = SchemeOutcome::from_result(&fcfs_result, cfg.seed);
    Ok(ComparisonReport {
        seed: cfg.seed,
        served_delta: flwc.served as i64 - fcfs.served as i64,
        avg_utilization_delta: flwc.avg_utilization - fcfs.avg_utilization,
        flwc,
        fcfs,
    })
}

/// Mean and sample standard deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stat {
    pub mean: f64,
    pub sd: f64,
}

fn stat(values: impl Iterator<Item = f64> + Clone) -> Stat {
    let n = values.clone().count() as f64;
    if n == 0.0 {
        return Stat { mean: 0.0, sd: 0.0 };
    }
    let mean = values.clone().sum::<f64>() / n;
    let sd = if n > 1.0 {
        (values.map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    Stat { mean, sd }
}

/// Aggregate statistics over a seed sweep of paired comparisons.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSummary {
    pub n_seeds: usize,
    pub flwc_served: Stat,
    pub fcfs_served: Stat,
    pub flwc_unserved: Stat,
    pub fcfs_unserved: Stat,
    pub flwc_avg_utilization: Stat,
    pub fcfs_avg_utilization: Stat,
    pub served_delta: Stat,
    pub avg_utilization_delta: Stat,
    /// Seeds where FLWC served strictly more vehicles than FCFS.
    pub flwc_strictly_better: usize,
}

/// Summarizes a non-empty list of paired reports.
pub fn summarize(reports: &[ComparisonReport]) -> Option<SweepSummary> {
    if reports.is_empty() {
        return None;
    }
    Some(SweepSummary {
        n_seeds: reports.len(),
        flwc_served: stat(reports.iter().map(|r| r.flwc.served as f64)),
        fcfs_served: stat(reports.iter().map(|r| r.fcfs.served as f64)),
        flwc_unserved: stat(reports.iter().map(|r| r.flwc.unserved as f64)),
        fcfs_unserved: stat(reports.iter().map(|r| r.fcfs.unserved as f64)),
        flwc_avg_utilization: stat(reports.iter().map(|r| r.flwc.avg_utilization)),
        fcfs_avg_utilization: stat(reports.iter().map(|r| r.fcfs.avg_utilization)),
        served_delta: stat(reports.iter().map(|r| r.served_delta as f64)),
        avg_utilization_delta: stat(reports.iter().map(|r| r.avg_utilization_delta)),
        flwc_strictly_better: reports.iter().filter(|r| r.served_delta > 0).count(),
    })
}

/// Paired comparisons over seeds `cfg.seed .. cfg.seed + n_seeds`, each on
/// its own independently sampled fleet. With `parallel` the runs fan out
/// over a thread pool; results are ordered by seed either way, so both
/// modes produce identical output.
pub fn run_sweep(
    cfg: &ScenarioConfig,
    n_seeds: u64,
    fis: &Fis,
    parallel: bool,
) -> Result<Vec<ComparisonReport>, SimError> {
    let one_seed = |offset: u64| -> Result<ComparisonReport, SimError> {
        let seed_cfg = ScenarioConfig {
            seed: cfg.seed + offset,
            ..cfg.clone()
        };
        let fleet = sample_fleet(&seed_cfg)?;
        compare_schemes(&fleet, &seed_cfg, fis)
    };
    if parallel {
        (0..n_seeds).into_par_iter().map(one_seed).collect()
    } else {
        (0..n_seeds).map(one_seed).collect()
    }
}
