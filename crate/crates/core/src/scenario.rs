//! Stochastic fleet and lot configuration.
//!
//! A [`ScenarioConfig`] describes the lot (stations, slot grid, charger
//! power) and the input distributions (Gaussian arrivals and stays,
//! uniform initial state of charge). [`sample_fleet`] turns a config and
//! its seed into a concrete fleet, deterministically.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScenarioError {
    /// A configuration value failed validation; names the offending key.
    #[error("invalid value for `{key}`: {reason}")]
    InvalidValue { key: String, reason: String },

    /// A configuration file used a key that is not a config field.
    #[error("unknown configuration key `{key}`")]
    UnknownKey { key: String },

    /// A config or fleet file failed to parse.
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("failed to read `{path}`")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    /// `required_slots` was asked about a state of charge above the target.
    #[error("initial SoC {initial_soc} exceeds the target SoC {target_soc}")]
    SocAboveTarget { initial_soc: f64, target_soc: f64 },
}

/// Lot and distribution parameters. Field names double as the keys of the
/// key-value configuration file.
///
/// Units: `battery_capacity` kWh, `charge_power` kW, `*_min` fields and
/// `stay_norm_horizon_min` minutes, SoC fields fractions of capacity.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub n_evs: usize,
    pub n_stations: usize,
    pub battery_capacity: f64,
    pub charge_power: f64,
    pub target_soc: f64,
    pub slot_minutes: u32,
    pub n_slots: usize,
    pub arrival_mean_min: f64,
    pub arrival_sd_min: f64,
    pub stay_mean_min: f64,
    pub stay_sd_min: f64,
    pub soc_min: f64,
    pub soc_max: f64,
    pub stay_norm_horizon_min: f64,
    pub seed: u64,
    /// When set, the dispatcher skips waiting vehicles whose remaining stay
    /// is shorter than their required charging time.
    pub admit_only_feasible: bool,
}

impl Default for ScenarioConfig {
    /// 100 EVs, 5 stations, 30 kWh batteries on 60 kW chargers, a 12-hour
    /// day of 48 15-minute slots, arrivals N(60, 90) minutes, stays
    /// N(60, 30) minutes, initial SoC U(0.2, 0.5).
    fn default() -> Self {
        Self {
            n_evs: 100,
            n_stations: 5,
            battery_capacity: 30.0,
            charge_power: 60.0,
            target_soc: 1.0,
            slot_minutes: 15,
            n_slots: 48,
            arrival_mean_min: 60.0,
            arrival_sd_min: 90.0,
            stay_mean_min: 60.0,
            stay_sd_min: 30.0,
            soc_min: 0.2,
            soc_max: 0.5,
            stay_norm_horizon_min: 120.0,
            seed: 0,
            admit_only_feasible: false,
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<(), ScenarioError> {
        let invalid = |key: &str, reason: &str| {
            Err(ScenarioError::InvalidValue {
                key: key.into(),
                reason: reason.into(),
            })
        };
        // NaN fails every comparison below, so it is rejected too.
        let positive = |v: f64| v > 0.0;
        if self.n_stations == 0 {
            return invalid("n_stations", "must be at least 1");
        }
        if self.n_slots == 0 {
            return invalid("n_slots", "must be at least 1");
        }
        if self.slot_minutes == 0 {
            return invalid("slot_minutes", "must be positive");
        }
        if !positive(self.battery_capacity) {
            return invalid("battery_capacity", "must be positive");
        }
        if !positive(self.charge_power) {
            return invalid("charge_power", "must be positive");
        }
        if !(0.0..=1.0).contains(&self.soc_min) {
            return invalid("soc_min", "must lie in [0, 1]");
        }
        if !(0.0..=1.0).contains(&self.soc_max) {
            return invalid("soc_max", "must lie in [0, 1]");
        }
        if self.soc_min > self.soc_max {
            return invalid("soc_min", "must not exceed soc_max");
        }
        if !(self.target_soc > self.soc_max && self.target_soc <= 1.0) {
            return invalid("target_soc", "must lie in (soc_max, 1]");
        }
        if !positive(self.arrival_sd_min) {
            return invalid("arrival_sd_min", "must be positive");
        }
        if !positive(self.stay_sd_min) {
            return invalid("stay_sd_min", "must be positive");
        }
        let at_least = |v: f64, bound: f64| v >= bound;
        if !at_least(self.arrival_mean_min, 0.0) {
            return invalid("arrival_mean_min", "must be non-negative");
        }
        if !positive(self.stay_mean_min) {
            return invalid("stay_mean_min", "must be positive");
        }
        if !at_least(self.stay_norm_horizon_min, f64::from(self.slot_minutes)) {
            return invalid("stay_norm_horizon_min", "must cover at least one slot");
        }
        Ok(())
    }

    /// Kilowatt-hours a station delivers in one slot.
    pub fn energy_per_slot(&self) -> f64 {
        self.charge_power * f64::from(self.slot_minutes) / 60.0
    }

    /// Last minute at which an arrival can be placed.
    fn max_arrival_minute(&self) -> f64 {
        ((self.n_slots - 1) as u32 * self.slot_minutes) as f64
    }

    /// Sets one field from its config-file key and textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ScenarioError> {
        fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ScenarioError> {
            value.trim().parse().map_err(|_| ScenarioError::InvalidValue {
                key: key.into(),
                reason: format!("cannot parse `{}`", value.trim()),
            })
        }
        match key {
            "n_evs" => self.n_evs = parse(key, value)?,
            "n_stations" => self.n_stations = parse(key, value)?,
            "battery_capacity" => self.battery_capacity = parse(key, value)?,
            "charge_power" => self.charge_power = parse(key, value)?,
            "target_soc" => self.target_soc = parse(key, value)?,
            "slot_minutes" => self.slot_minutes = parse(key, value)?,
            "n_slots" => self.n_slots = parse(key, value)?,
            "arrival_mean_min" => self.arrival_mean_min = parse(key, value)?,
            "arrival_sd_min" => self.arrival_sd_min = parse(key, value)?,
            "stay_mean_min" => self.stay_mean_min = parse(key, value)?,
            "stay_sd_min" => self.stay_sd_min = parse(key, value)?,
            "soc_min" => self.soc_min = parse(key, value)?,
            "soc_max" => self.soc_max = parse(key, value)?,
            "stay_norm_horizon_min" => self.stay_norm_horizon_min = parse(key, value)?,
            "seed" => self.seed = parse(key, value)?,
            "admit_only_feasible" => self.admit_only_feasible = parse(key, value)?,
            _ => return Err(ScenarioError::UnknownKey { key: key.into() }),
        }
        Ok(())
    }

    /// Loads defaults overridden by a `key = value` file (`#` comments).
    /// The result is validated.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self, ScenarioError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Parses config text; `origin` names the source in errors.
    pub fn parse(text: &str, origin: &str) -> Result<Self, ScenarioError> {
        let mut cfg = Self::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ScenarioError::Parse {
                path: origin.to_string(),
                line: idx + 1,
                message: "expected `key = value`".into(),
            })?;
            cfg.set(key.trim(), value)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// One vehicle of the fleet. `weight` is filled in by the dispatcher under
/// weight-ordered scheduling.
#[derive(Debug, Clone, PartialEq)]
pub struct EvRecord {
    pub id: u32,
    pub arrival_slot: usize,
    pub initial_soc: f64,
    pub stay_slots: usize,
    pub required_slots: usize,
    pub weight: Option<f64>,
}

impl EvRecord {
    /// First slot at which the vehicle is no longer in the lot.
    pub fn departure_slot(&self) -> usize {
        self.arrival_slot + self.stay_slots
    }
}

/// Whole slots needed to charge from `initial_soc` to the target:
/// `ceil(energy needed / energy per slot)`, zero when already at target.
pub fn required_slots(initial_soc: f64, cfg: &ScenarioConfig) -> Result<usize, ScenarioError> {
    if initial_soc > cfg.target_soc {
        return Err(ScenarioError::SocAboveTarget {
            initial_soc,
            target_soc: cfg.target_soc,
        });
    }
    let energy_needed = (cfg.target_soc - initial_soc) * cfg.battery_capacity;
    // The epsilon keeps exact multiples of the per-slot energy at their
    // exact slot count despite float rounding.
    let slots = (energy_needed / cfg.energy_per_slot() - 1e-9).ceil();
    Ok(slots.max(0.0) as usize)
}

/// The crisp fuzzy-engine inputs for a vehicle: SoC is already a fraction;
/// the stay is scaled by the normalization horizon and capped at 1.
pub fn normalize_inputs(ev: &EvRecord, cfg: &ScenarioConfig) -> (f64, f64) {
    let stay_minutes = (ev.stay_slots as u32 * cfg.slot_minutes) as f64;
    let stay_norm = (stay_minutes / cfg.stay_norm_horizon_min).min(1.0);
    (ev.initial_soc, stay_norm)
}

/// Samples the fleet described by `cfg`, fully determined by `cfg.seed`.
///
/// Per vehicle, in draw order: arrival minute ~ N(arrival_mean, arrival_sd)
/// clamped to the open window and floored to a slot; stay minutes ~
/// N(stay_mean, stay_sd) clamped to [one slot, normalization horizon] and
/// rounded to whole slots; initial SoC ~ U(soc_min, soc_max). The result
/// is sorted by (arrival_slot, id).
pub fn sample_fleet(cfg: &ScenarioConfig) -> Result<Vec<EvRecord>, ScenarioError> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let arrival_dist = Normal::new(cfg.arrival_mean_min, cfg.arrival_sd_min).expect("sd > 0");
    let stay_dist = Normal::new(cfg.stay_mean_min, cfg.stay_sd_min).expect("sd > 0");
    let slot_minutes = f64::from(cfg.slot_minutes);

    let mut fleet = Vec::with_capacity(cfg.n_evs);
    for id in 0..cfg.n_evs {
        let arrival_minute = arrival_dist
            .sample(&mut rng)
            .clamp(0.0, cfg.max_arrival_minute());
        let arrival_slot = (arrival_minute / slot_minutes).floor() as usize;

        let stay_minutes = stay_dist
            .sample(&mut rng)
            .clamp(slot_minutes, cfg.stay_norm_horizon_min);
        let stay_slots = ((stay_minutes / slot_minutes).round() as usize).max(1);

        let initial_soc = rng.random_range(cfg.soc_min..=cfg.soc_max);
        let required = required_slots(initial_soc, cfg)?;

        fleet.push(EvRecord {
            id: id as u32,
            arrival_slot,
            initial_soc,
            stay_slots,
            required_slots: required,
            weight: None,
        });
    }
    fleet.sort_by_key(|ev| (ev.arrival_slot, ev.id));
    Ok(fleet)
}

/// Header of the fleet-replay CSV.
pub const FLEET_CSV_HEADER: &str = "id,arrival_slot,initial_soc,stay_slots,required_slots";

/// Renders a fleet in the replay CSV format.
pub fn fleet_to_csv(fleet: &[EvRecord]) -> String {
    let mut out = String::from(FLEET_CSV_HEADER);
    out.push('\n');
    for ev in fleet {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            ev.id, ev.arrival_slot, ev.initial_soc, ev.stay_slots, ev.required_slots
        ));
    }
    out
}

/// Parses a replay CSV produced by [`fleet_to_csv`]. Records are re-sorted
/// by (arrival_slot, id) so the result is directly simulatable.
pub fn fleet_from_csv(text: &str, origin: &str) -> Result<Vec<EvRecord>, ScenarioError> {
    let mut lines = text.lines().enumerate();
    let parse_err = |line: usize, message: String| ScenarioError::Parse {
        path: origin.to_string(),
        line,
        message,
    };
    let (_, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "empty file".into()))?;
    if header.trim() != FLEET_CSV_HEADER {
        return Err(parse_err(
            1,
            format!("expected header `{FLEET_CSV_HEADER}`"),
        ));
    }
    let mut fleet = Vec::new();
    for (idx, raw) in lines {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(parse_err(idx + 1, format!("expected 5 fields, got {}", fields.len())));
        }
        let field = |i: usize, name: &str| -> Result<&str, ScenarioError> {
            fields
                .get(i)
                .copied()
                .ok_or_else(|| parse_err(idx + 1, format!("missing `{name}`")))
        };
        fn num<T: std::str::FromStr>(
            raw: &str,
            name: &str,
            line: usize,
            origin: &str,
        ) -> Result<T, ScenarioError> {
            raw.trim().parse().map_err(|_| ScenarioError::Parse {
                path: origin.to_string(),
                line,
                message: format!("invalid `{name}`: `{raw}`"),
            })
        }
        let initial_soc: f64 = num(field(2, "initial_soc")?, "initial_soc", idx + 1, origin)?;
        if !(0.0..=1.0).contains(&initial_soc) {
            return Err(parse_err(idx + 1, format!("initial_soc {initial_soc} outside [0, 1]")));
        }
        let stay_slots: usize = num(field(3, "stay_slots")?, "stay_slots", idx + 1, origin)?;
        if stay_slots == 0 {
            return Err(parse_err(idx + 1, "stay_slots must be at least 1".into()));
        }
        fleet.push(EvRecord {
            id: num(field(0, "id")?, "id", idx + 1, origin)?,
            arrival_slot: num(field(1, "arrival_slot")?, "arrival_slot", idx + 1, origin)?,
            initial_soc,
            stay_slots,
            required_slots: num(field(4, "required_slots")?, "required_slots", idx + 1, origin)?,
            weight: None,
        });
    }
    fleet.sort_by_key(|ev| (ev.arrival_slot, ev.id));
    Ok(fleet)
}

/// Reads a replay CSV from disk.
pub fn load_fleet_csv(path: impl AsRef<Path>) -> Result<Vec<EvRecord>, ScenarioError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
        path: path.display().to_string(),
        source,
    })?;
    fleet_from_csv(&text, &path.display().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn required_slots_matches_hand_arithmetic() {
        let cfg = ScenarioConfig::default();
        // 15 kWh at 15 kWh per slot.
        assert_eq!(required_slots(0.5, &cfg).unwrap(), 1);
        // 24 kWh needs two slots.
        assert_eq!(required_slots(0.2, &cfg).unwrap(), 2);
        assert_eq!(required_slots(cfg.target_soc, &cfg).unwrap(), 0);
    }

    #[test]
    fn required_slots_rejects_soc_above_target() {
        let cfg = ScenarioConfig { target_soc: 0.8, soc_max: 0.5, ..Default::default() };
        assert!(matches!(
            required_slots(0.9, &cfg),
            Err(ScenarioError::SocAboveTarget { .. })
        ));
    }

    #[test]
    fn required_slots_non_increasing_in_soc() {
        let cfg = ScenarioConfig::default();
        let mut last = usize::MAX;
        for i in 0..=100 {
            let soc = i as f64 / 100.0;
            let slots = required_slots(soc, &cfg).unwrap();
            assert!(slots <= last, "at soc {soc}");
            last = slots;
        }
    }

    #[test]
    fn normalization_examples() {
        let cfg = ScenarioConfig::default();
        let ev = |stay_slots| EvRecord {
            id: 0,
            arrival_slot: 0,
            initial_soc: 0.2,
            stay_slots,
            required_slots: 2,
            weight: None,
        };
        let (soc, stay) = normalize_inputs(&ev(4), &cfg);
        assert_eq!(soc, 0.2);
        assert_eq!(stay, 0.5);
        assert_eq!(normalize_inputs(&ev(8), &cfg).1, 1.0);
        assert_eq!(normalize_inputs(&ev(20), &cfg).1, 1.0);
    }

    #[test]
    fn empty_fleet_for_zero_evs() {
        let cfg = ScenarioConfig { n_evs: 0, ..Default::default() };
        assert!(sample_fleet(&cfg).unwrap().is_empty());
    }

    #[test]
    fn sampled_fleet_respects_ranges_and_order() {
        let cfg = ScenarioConfig { seed: 42, ..Default::default() };
        let fleet = sample_fleet(&cfg).unwrap();
        assert_eq!(fleet.len(), 100);
        for ev in &fleet {
            assert!(ev.arrival_slot < cfg.n_slots);
            assert!((0.2..=0.5).contains(&ev.initial_soc));
            assert!((1..=8).contains(&ev.stay_slots));
            assert!((1..=2).contains(&ev.required_slots));
        }
        assert!(fleet
            .windows(2)
            .all(|w| (w[0].arrival_slot, w[0].id) <= (w[1].arrival_slot, w[1].id)));
    }

    #[test]
    fn same_seed_same_fleet() {
        let cfg = ScenarioConfig { seed: 7, ..Default::default() };
        assert_eq!(sample_fleet(&cfg).unwrap(), sample_fleet(&cfg).unwrap());
        let other = ScenarioConfig { seed: 8, ..Default::default() };
        assert_ne!(sample_fleet(&cfg).unwrap(), sample_fleet(&other).unwrap());
    }

    #[test]
    fn config_validation_names_the_key() {
        let cfg = ScenarioConfig { soc_min: 0.6, soc_max: 0.5, ..Default::default() };
        match cfg.validate().unwrap_err() {
            ScenarioError::InvalidValue { key, .. } => assert_eq!(key, "soc_min"),
            other => panic!("unexpected error {other:?}"),
        }
        let cfg = ScenarioConfig { target_soc: 0.4, ..Default::default() };
        match cfg.validate().unwrap_err() {
            ScenarioError::InvalidValue { key, .. } => assert_eq!(key, "target_soc"),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn config_file_roundtrip() {
        let text = "\
# overrides
n_evs = 10
charge_power = 30
seed = 5
admit_only_feasible = true
";
        let cfg = ScenarioConfig::parse(text, "inline").unwrap();
        assert_eq!(cfg.n_evs, 10);
        assert_eq!(cfg.charge_power, 30.0);
        assert_eq!(cfg.seed, 5);
        assert!(cfg.admit_only_feasible);
        assert_eq!(cfg.n_stations, 5);
    }

    #[test]
    fn config_file_rejects_unknown_and_invalid() {
        match ScenarioConfig::parse("bogus_key = 3\n", "inline").unwrap_err() {
            ScenarioError::UnknownKey { key } => assert_eq!(key, "bogus_key"),
            other => panic!("unexpected error {other:?}"),
        }
        match ScenarioConfig::parse("n_evs = lots\n", "inline").unwrap_err() {
            ScenarioError::InvalidValue { key, .. } => assert_eq!(key, "n_evs"),
            other => panic!("unexpected error {other:?}"),
        }
        assert!(ScenarioConfig::parse("n_evs 10\n", "inline").is_err());
    }

    #[test]
    fn fleet_csv_roundtrip() {
        let cfg = ScenarioConfig { n_evs: 12, seed: 3, ..Default::default() };
        let fleet = sample_fleet(&cfg).unwrap();
        let text = fleet_to_csv(&fleet);
        assert!(text.starts_with(FLEET_CSV_HEADER));
        let parsed = fleet_from_csv(&text, "inline").unwrap();
        assert_eq!(parsed, fleet);
    }

    #[test]
    fn fleet_csv_rejects_bad_input() {
        assert!(fleet_from_csv("wrong,header\n", "inline").is_err());
        let bad_soc = format!("{FLEET_CSV_HEADER}\n0,0,1.5,2,2\n");
        assert!(fleet_from_csv(&bad_soc, "inline").is_err());
        let bad_fields = format!("{FLEET_CSV_HEADER}\n0,0,0.3\n");
        assert!(fleet_from_csv(&bad_fields, "inline").is_err());
        let zero_stay = format!("{FLEET_CSV_HEADER}\n0,0,0.3,0,2\n");
        assert!(fleet_from_csv(&zero_stay, "inline").is_err());
    }
}
