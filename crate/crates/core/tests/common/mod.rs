//! Independent oracles shared by the integration suites.
//!
//! Everything here re-derives expected values from first principles with
//! its own code paths, so it stays meaningful as a cross-check of the
//! library implementation.

#![allow(dead_code)]

/// Oracle-local membership shapes, evaluated with freshly written
/// piecewise formulas.
#[derive(Clone, Copy)]
pub enum OracleShape {
    Tri(f64, f64, f64),
    Trap(f64, f64, f64, f64),
}

impl OracleShape {
    pub fn mu(&self, x: f64) -> f64 {
        match *self {
            OracleShape::Tri(a, b, c) => {
                if x < a || x > c {
                    0.0
                } else if x == b {
                    1.0
                } else if x < b {
                    if b > a {
                        (x - a) / (b - a)
                    } else {
                        0.0
                    }
                } else if c > b {
                    (c - x) / (c - b)
                } else {
                    0.0
                }
            }
            OracleShape::Trap(a, b, c, d) => {
                if x >= b && x <= c {
                    1.0
                } else if x < a || x > d {
                    0.0
                } else if x < b {
                    if b > a {
                        (x - a) / (b - a)
                    } else {
                        0.0
                    }
                } else if d > c {
                    (d - x) / (d - c)
                } else {
                    0.0
                }
            }
        }
    }
}

/// The built-in weight-output terms, restated for the oracle.
pub fn oracle_weight_terms() -> Vec<(&'static str, OracleShape)> {
    vec![
        ("LW", OracleShape::Trap(0.0, 0.0, 0.3, 0.5)),
        ("MW", OracleShape::Tri(0.3, 0.5, 0.7)),
        ("HW", OracleShape::Trap(0.5, 0.7, 1.0, 1.0)),
    ]
}

/// Centroid of the clipped-and-aggregated output set by the trapezoidal
/// rule over `intervals` subintervals of [0, 1].
pub fn oracle_centroid(terms: &[(OracleShape, f64)], intervals: usize) -> Option<f64> {
    let h = 1.0 / intervals as f64;
    let mu_agg = |y: f64| -> f64 {
        terms
            .iter()
            .map(|(shape, clip)| clip.min(shape.mu(y)))
            .fold(0.0, f64::max)
    };
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..intervals {
        let y0 = i as f64 * h;
        let y1 = (i + 1) as f64 * h;
        let m0 = mu_agg(y0);
        let m1 = mu_agg(y1);
        num += h * (y0 * m0 + y1 * m1) / 2.0;
        den += h * (m0 + m1) / 2.0;
    }
    if den > 0.0 {
        Some(num / den)
    } else {
        None
    }
}

/// A vehicle for the schedule oracle: (arrival slot, stay slots, required slots).
pub type OracleEv = (usize, usize, usize);

/// Independent mini-dispatcher. Vehicles are admitted in the order given
/// by `priority` (indices into `fleet`, most preferred first) whenever a
/// station is free; waiting vehicles vanish at their departure slot;
/// mid-service expiry frees the station; zero-requirement vehicles are
/// served on arrival. Returns the served flags.
pub fn oracle_schedule(
    fleet: &[OracleEv],
    n_stations: usize,
    n_slots: usize,
    priority: &[usize],
) -> Vec<bool> {
    let n = fleet.len();
    let rank: Vec<usize> = {
        let mut r = vec![usize::MAX; n];
        for (pos, &i) in priority.iter().enumerate() {
            r[i] = pos;
        }
        r
    };
    let mut served = vec![false; n];
    let mut station_end = vec![0usize; n_stations];
    let mut station_ev: Vec<Option<usize>> = vec![None; n_stations];
    let mut waiting: Vec<usize> = Vec::new();
    let mut arrivals: Vec<usize> = (0..n).collect();
    arrivals.sort_by_key(|&i| (fleet[i].0, i));
    let mut next = 0;

    for t in 0..n_slots {
        for s in 0..n_stations {
            if let Some(i) = station_ev[s] {
                if station_end[s] == t {
                    served[i] = true;
                    station_ev[s] = None;
                } else if fleet[i].0 + fleet[i].1 <= t {
                    station_ev[s] = None;
                }
            }
        }
        waiting.retain(|&i| fleet[i].0 + fleet[i].1 > t);
        while next < n && fleet[arrivals[next]].0 == t {
            let i = arrivals[next];
            next += 1;
            if fleet[i].2 == 0 {
                served[i] = true;
            } else {
                waiting.push(i);
            }
        }
        for s in 0..n_stations {
            if station_ev[s].is_none() {
                if let Some(&i) = waiting.iter().min_by_key(|&&i| rank[i]) {
                    waiting.retain(|&j| j != i);
                    station_ev[s] = Some(i);
                    station_end[s] = t + fleet[i].2;
                } else {
                    break;
                }
            }
        }
    }
    served
}

/// Maximum served count over every admission ordering of the fleet.
pub fn oracle_max_served(fleet: &[OracleEv], n_stations: usize, n_slots: usize) -> usize {
    let n = fleet.len();
    let mut best = 0;
    let mut order: Vec<usize> = (0..n).collect();
    permute(&mut order, 0, &mut |perm| {
        let served = oracle_schedule(fleet, n_stations, n_slots, perm)
            .iter()
            .filter(|&&s| s)
            .count();
        best = best.max(served);
    });
    best
}

fn permute(items: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// Arrival-order priority: by (arrival slot, index).
pub fn arrival_order(fleet: &[OracleEv]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..fleet.len()).collect();
    order.sort_by_key(|&i| (fleet[i].0, i));
    order
}
