//! Slot-by-slot dispatch simulation.
//!
//! [`run_simulation`] walks the slot grid once. Within a slot the order of
//! events is fixed: completed services release their stations, expired
//! vehicles leave (mid-service expiry frees the charger), new arrivals
//! join the waiting set (under FLWC their weight is computed once, here),
//! then idle stations are matched to waiting vehicles via [`select_next`]
//! until one side runs out.
//!
//! Charging is non-preemptive: a started service runs to completion, to
//! the vehicle's departure, or to the end of the horizon, whichever comes
//! first. Vehicles that need zero slots are served on arrival without
//! occupying a station.

use std::fmt;

use thiserror::Error;

use crate::fuzzy::{Fis, FuzzyError};
use crate::metrics;
use crate::scenario::{normalize_inputs, EvRecord, ScenarioConfig};

#[derive(Debug, Error)]
pub enum SimError {
    #[error("fleet must be sorted by (arrival_slot, id)")]
    UnsortedFleet,

    #[error("weight computation failed for EV {ev_id}")]
    Weight {
        ev_id: u32,
        #[source]
        source: FuzzyError,
    },

    #[error(transparent)]
    Config(#[from] crate::scenario::ScenarioError),
}

/// Which dispatch rule picks the next vehicle when a charger frees up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchedulingScheme {
    /// Highest fuzzy weight first; ties by earlier arrival, then lower id.
    Flwc,
    /// Earliest arrival first; ties by lower id.
    Fcfs,
}

impl fmt::Display for SchedulingScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Flwc => write!(f, "flwc"),
            Self::Fcfs => write!(f, "fcfs"),
        }
    }
}

/// Mutable per-charger bookkeeping during a run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StationState {
    pub id: usize,
    /// First slot at which the current service is complete; `None` if idle.
    pub busy_until_slot: Option<usize>,
    pub current_ev: Option<u32>,
    pub busy_slots_total: usize,
    pub served_count: usize,
}

impl StationState {
    fn new(id: usize) -> Self {
        Self {
            id,
            busy_until_slot: None,
            current_ev: None,
            busy_slots_total: 0,
            served_count: 0,
        }
    }

    fn is_idle(&self) -> bool {
        self.current_ev.is_none()
    }
}

/// A vehicle sitting in the waiting set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaitingEv {
    pub id: u32,
    pub arrival_slot: usize,
    /// Fuzzy weight under FLWC; ignored by FCFS.
    pub weight: f64,
}

/// Picks the next vehicle to dispatch, or `None` if nothing waits.
pub fn select_next(waiting: &[WaitingEv], scheme: SchedulingScheme) -> Option<u32> {
    match scheme {
        SchedulingScheme::Flwc => waiting
            .iter()
            .min_by(|a, b| {
                b.weight
                    .total_cmp(&a.weight)
                    .then(a.arrival_slot.cmp(&b.arrival_slot))
                    .then(a.id.cmp(&b.id))
            })
            .map(|ev| ev.id),
        SchedulingScheme::Fcfs => waiting
            .iter()
            .min_by_key(|ev| (ev.arrival_slot, ev.id))
            .map(|ev| ev.id),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    Arrive,
    Assign,
    Complete,
    Expire,
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Arrive => write!(f, "arrive"),
            Self::Assign => write!(f, "assign"),
            Self::Complete => write!(f, "complete"),
            Self::Expire => write!(f, "expire"),
        }
    }
}

/// One line of the event trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Event {
    pub slot: usize,
    pub kind: EventKind,
    pub ev_id: u32,
    pub station_id: Option<usize>,
}

/// Per-station numbers after a finished run.
#[derive(Debug, Clone, PartialEq)]
pub struct StationSummary {
    pub id: usize,
    pub served_count: usize,
    pub busy_slots_total: usize,
    pub utilization: f64,
}

/// Outcome of one simulation run.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationResult {
    pub scheme: SchedulingScheme,
    /// Vehicles whose full charge completed within their stay, in
    /// completion order.
    pub served_ids: Vec<u32>,
    /// Everyone else, in the order they dropped out.
    pub unserved_ids: Vec<u32>,
    pub per_station: Vec<StationSummary>,
    pub avg_utilization: f64,
    /// Waiting-set size at the end of each slot.
    pub per_slot_queue_len: Vec<usize>,
    /// (ev id, fuzzy weight) in fleet order; weights are `None` under FCFS.
    pub weights: Vec<(u32, Option<f64>)>,
    pub events: Vec<Event>,
}

struct EvState {
    record: EvRecord,
    departure_slot: usize,
}

/// Runs one scheme over a fleet. The fleet must be sorted by
/// (arrival_slot, id); `fis` is only consulted under [`SchedulingScheme::Flwc`].
pub fn run_simulation(
    fleet: &[EvRecord],
    cfg: &ScenarioConfig,
    scheme: SchedulingScheme,
    fis: &Fis,
) -> Result<SimulationResult, SimError> {
    cfg.validate()?;
    if !fleet
        .windows(2)
        .all(|w| (w[0].arrival_slot, w[0].id) <= (w[1].arrival_slot, w[1].id))
    {
        return Err(SimError::UnsortedFleet);
    }

    let mut evs: Vec<EvState> = fleet
        .iter()
        .map(|record| EvState {
            record: record.clone(),
            departure_slot: record.departure_slot(),
        })
        .collect();

    let mut stations: Vec<StationState> =
        (0..cfg.n_stations).map(StationState::new).collect();
    let mut waiting: Vec<WaitingEv> = Vec::new();
    let mut served_ids = Vec::new();
    let mut unserved_ids = Vec::new();
    let mut events = Vec::new();
    let mut per_slot_queue_len = Vec::with_capacity(cfg.n_slots);
    let mut next_arrival = 0usize;

    let ev_index = |evs: &[EvState], id: u32| -> usize {
        evs.iter()
            .position(|e| e.record.id == id)
            .expect("ids tracked internally")
    };

    for slot in 0..cfg.n_slots {
        // Completed services free their stations; the vehicle is served.
        for station in &mut stations {
            if station.busy_until_slot == Some(slot) {
                let id = station.current_ev.expect("busy station has an EV");
                station.served_count += 1;
                station.busy_until_slot = None;
                station.current_ev = None;
                served_ids.push(id);
                events.push(Event {
                    slot,
                    kind: EventKind::Complete,
                    ev_id: id,
                    station_id: Some(station.id),
                });
            }
        }

        // A vehicle whose stay ends mid-service leaves unserved and frees
        // the charger for reuse this same slot.
        for station in &mut stations {
            if let Some(id) = station.current_ev {
                if evs[ev_index(&evs, id)].departure_slot <= slot {
                    station.busy_until_slot = None;
                    station.current_ev = None;
                    unserved_ids.push(id);
                    events.push(Event {
                        slot,
                        kind: EventKind::Expire,
                        ev_id: id,
                        station_id: Some(station.id),
                    });
                }
            }
        }

        // Waiting vehicles whose stay ends leave unserved.
        let mut still_waiting = Vec::with_capacity(waiting.len());
        for entry in waiting.drain(..) {
            if evs[ev_index(&evs, entry.id)].departure_slot <= slot {
                unserved_ids.push(entry.id);
                events.push(Event {
                    slot,
                    kind: EventKind::Expire,
                    ev_id: entry.id,
                    station_id: None,
                });
            } else {
                still_waiting.push(entry);
            }
        }
        waiting = still_waiting;

        // New arrivals. Under FLWC the weight is computed once, now.
        while next_arrival < evs.len() && evs[next_arrival].record.arrival_slot == slot {
            let idx = next_arrival;
            next_arrival += 1;
            let id = evs[idx].record.id;
            events.push(Event {
                slot,
                kind: EventKind::Arrive,
                ev_id: id,
                station_id: None,
            });
            let weight = match scheme {
                SchedulingScheme::Flwc => {
                    let (soc_norm, stay_norm) = normalize_inputs(&evs[idx].record, cfg);
                    let w = fis
                        .compute_weight(soc_norm, stay_norm)
                        .map_err(|source| SimError::Weight { ev_id: id, source })?;
                    evs[idx].record.weight = Some(w);
                    w
                }
                SchedulingScheme::Fcfs => 0.0,
            };
            if evs[idx].record.required_slots == 0 {
                // Nothing to charge: served on the spot.
                served_ids.push(id);
                events.push(Event {
                    slot,
                    kind: EventKind::Complete,
                    ev_id: id,
                    station_id: None,
                });
            } else {
                waiting.push(WaitingEv {
                    id,
                    arrival_slot: slot,
                    weight,
                });
            }
        }

        // Match idle stations to waiting vehicles.
        while let Some(station_idx) = stations.iter().position(StationState::is_idle) {
            let eligible: Vec<WaitingEv> = if cfg.admit_only_feasible {
                waiting
                    .iter()
                    .filter(|w| {
                        let ev = &evs[ev_index(&evs, w.id)];
                        ev.departure_slot - slot >= ev.record.required_slots
                    })
                    .copied()
                    .collect()
            } else {
                waiting.clone()
            };
            let Some(id) = select_next(&eligible, scheme) else {
                break;
            };
            waiting.retain(|w| w.id != id);
            let required = evs[ev_index(&evs, id)].record.required_slots;
            let station = &mut stations[station_idx];
            station.current_ev = Some(id);
            station.busy_until_slot = Some(slot + required);
            events.push(Event {
                slot,
                kind: EventKind::Assign,
                ev_id: id,
                station_id: Some(station.id),
            });
        }

        for station in &mut stations {
            if !station.is_idle() {
                station.busy_slots_total += 1;
            }
        }
        per_slot_queue_len.push(waiting.len());
    }

    // Horizon end: whoever is still in service or waiting goes unserved.
    for station in &stations {
        if let Some(id) = station.current_ev {
            unserved_ids.push(id);
        }
    }
    for entry in &waiting {
        unserved_ids.push(entry.id);
    }
    // Vehicles that never arrived inside the horizon (possible with replayed
    // fleets) count as unserved too.
    for ev in &evs[next_arrival..] {
        unserved_ids.push(ev.record.id);
    }

    debug_assert_eq!(served_ids.len() + unserved_ids.len(), fleet.len());

    let per_station: Vec<StationSummary> = stations
        .iter()
        .map(|s| StationSummary {
            id: s.id,
            served_count: s.served_count,
            busy_slots_total: s.busy_slots_total,
            utilization: metrics::station_utilization(s, cfg.n_slots),
        })
        .collect();
    let avg_utilization =
        metrics::average_utilization(&stations, cfg.n_slots).expect("n_stations >= 1");

    Ok(SimulationResult {
        scheme,
        served_ids,
        unserved_ids,
        per_station,
        avg_utilization,
        per_slot_queue_len,
        weights: evs
            .iter()
            .map(|e| (e.record.id, e.record.weight))
            .collect(),
        events,
    })
}
