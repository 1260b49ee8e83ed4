//! CSV and plain-text emission of run results.
//!
//! All files are written atomically: the content goes to a `.tmp` sibling
//! first and is renamed into place, so readers never observe a partial
//! file.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use crate::metrics::{ComparisonReport, SchemeOutcome, SweepSummary};
use crate::sim::Event;

pub const SUMMARY_CSV_HEADER: &str = "scheme,seed,served,unserved,avg_utilization";
pub const STATIONS_CSV_HEADER: &str = "scheme,seed,station,served,busy_slots,utilization";
pub const EVENTS_CSV_HEADER: &str = "slot,event,ev_id,station_id";

/// Writes `contents` to `path` via a temporary sibling plus rename.
pub fn atomic_write(path: impl AsRef<Path>, contents: &str) -> io::Result<()> {
    let path = path.as_ref();
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)
}

/// `summary.csv`: one row per scheme outcome, plus `mean`/`sd` rows in the
/// seed column when a sweep summary is given.
pub fn render_summary_csv(outcomes: &[SchemeOutcome], summary: Option<&SweepSummary>) -> String {
    let mut out = String::from(SUMMARY_CSV_HEADER);
    out.push('\n');
    for o in outcomes {
        writeln!(
            out,
            "{},{},{},{},{}",
            o.scheme, o.seed, o.served, o.unserved, o.avg_utilization
        )
        .expect("write to string");
    }
    if let Some(s) = summary {
        writeln!(
            out,
            "flwc,mean,{},{},{}",
            s.flwc_served.mean, s.flwc_unserved.mean, s.flwc_avg_utilization.mean
        )
        .expect("write to string");
        writeln!(
            out,
            "flwc,sd,{},{},{}",
            s.flwc_served.sd, s.flwc_unserved.sd, s.flwc_avg_utilization.sd
        )
        .expect("write to string");
        writeln!(
            out,
            "fcfs,mean,{},{},{}",
            s.fcfs_served.mean, s.fcfs_unserved.mean, s.fcfs_avg_utilization.mean
        )
        .expect("write to string");
        writeln!(
            out,
            "fcfs,sd,{},{},{}",
            s.fcfs_served.sd, s.fcfs_unserved.sd, s.fcfs_avg_utilization.sd
        )
        .expect("write to string");
    }
    out
}

/// `stations.csv`: one row per charger per scheme outcome.
pub fn render_stations_csv(outcomes: &[SchemeOutcome]) -> String {
    let mut out = String::from(STATIONS_CSV_HEADER);
    out.push('\n');
    for o in outcomes {
        for s in &o.per_station {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                o.scheme, o.seed, s.id, s.served_count, s.busy_slots_total, s.utilization
            )
            .expect("write to string");
        }
    }
    out
}

/// Event trace CSV; the station column is empty for queue-side events.
pub fn render_events_csv(events: &[Event]) -> String {
    let mut out = String::from(EVENTS_CSV_HEADER);
    out.push('\n');
    for e in events {
        let station = e
            .station_id
            .map(|s| s.to_string())
            .unwrap_or_default();
        writeln!(out, "{},{},{},{}", e.slot, e.kind, e.ev_id, station).expect("write to string");
    }
    out
}

/// Human-readable restatement of the comparison.
pub fn render_report_txt(
    outcomes: &[SchemeOutcome],
    comparisons: &[ComparisonReport],
    summary: Option<&SweepSummary>,
) -> String {
    let mut out = String::new();
    writeln!(out, "charging lot scheduling report").expect("write to string");
    writeln!(out, "===============================").expect("write to string");
    for o in outcomes {
        writeln!(out).expect("write to string");
        writeln!(out, "scheme {} (seed {})", o.scheme, o.seed).expect("write to string");
        writeln!(out, "  served:   {:>4}", o.served).expect("write to string");
        writeln!(out, "  unserved: {:>4}", o.unserved).expect("write to string");
        writeln!(out, "  average utilization: {:.4}", o.avg_utilization).expect("write to string");
        for s in &o.per_station {
            writeln!(
                out,
                "  station {}: served {:>3}, busy {:>3} slots, utilization {:.4}",
                s.id, s.served_count, s.busy_slots_total, s.utilization
            )
            .expect("write to string");
        }
    }
    if !comparisons.is_empty() {
        writeln!(out).expect("write to string");
        writeln!(out, "paired deltas (flwc - fcfs)").expect("write to string");
        for c in comparisons {
            writeln!(
                out,
                "  seed {:>3}: served {:+}, average utilization {:+.4}",
                c.seed, c.served_delta, c.avg_utilization_delta
            )
            .expect("write to string");
        }
    }
    if let Some(s) = summary {
        writeln!(out).expect("write to string");
        writeln!(out, "sweep over {} seeds", s.n_seeds).expect("write to string");
        writeln!(
            out,
            "  flwc served:  mean {:.2} (sd {:.2})",
            s.flwc_served.mean, s.flwc_served.sd
        )
        .expect("write to string");
        writeln!(
            out,
            "  fcfs served:  mean {:.2} (sd {:.2})",
            s.fcfs_served.mean, s.fcfs_served.sd
        )
        .expect("write to string");
        writeln!(
            out,
            "  flwc average utilization: mean {:.4} (sd {:.4})",
            s.flwc_avg_utilization.mean, s.flwc_avg_utilization.sd
        )
        .expect("write to string");
        writeln!(
            out,
            "  fcfs average utilization: mean {:.4} (sd {:.4})",
            s.fcfs_avg_utilization.mean, s.fcfs_avg_utilization.sd
        )
        .expect("write to string");
        writeln!(
            out,
            "  served delta: mean {:+.2} (sd {:.2}), flwc strictly ahead in {}/{} seeds",
            s.served_delta.mean, s.served_delta.sd, s.flwc_strictly_better, s.n_seeds
        )
        .expect("write to string");
        writeln!(
            out,
            "  utilization delta: mean {:+.4} (sd {:.4})",
            s.avg_utilization_delta.mean, s.avg_utilization_delta.sd
        )
        .expect("write to string");
    }
    out
}
