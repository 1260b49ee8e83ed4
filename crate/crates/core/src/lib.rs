//! Slot-based EV charging lot simulator.
//!
//! A parking lot with a handful of chargers serves a fleet of electric
//! vehicles over a day of fixed time slots. Each vehicle brings an initial
//! state of charge and a stay duration; a Mamdani fuzzy engine turns the
//! pair into a scheduling weight, and the coordinator grants chargers
//! either by that weight (FLWC) or strictly by arrival order (FCFS).
//! Metrics compare the two schemes on served count and charger
//! utilization.
//!
//! - [`fuzzy`]: membership functions, rule base, inference, centroid
//!   defuzzification.
//! - [`scenario`]: configuration, seeded fleet sampling, replay CSV.
//! - [`sim`]: the slot-by-slot dispatch loop.
//! - [`metrics`]: utilization, paired comparisons, seed sweeps.
//! - [`report`]: CSV and text output.
//! - [`cli`]: the `flwc` command line.

pub mod cli;
pub mod fuzzy;
pub mod metrics;
pub mod report;
pub mod scenario;
pub mod sim;

pub use fuzzy::Fis;
pub use scenario::{sample_fleet, EvRecord, ScenarioConfig};
pub use sim::{run_simulation, SchedulingScheme, SimulationResult};
