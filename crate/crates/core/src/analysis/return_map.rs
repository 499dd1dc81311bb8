use std::collections::BTreeMap;

use serde::Serialize;

use crate::dynamics::{blinking_state, compute_orbit, width_of, Configuration, Orbit};
use crate::graph::Graph;

use super::AnalysisError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LocalClass {
    Recurrent,
    Transient,
}

/// Transience certificates of a blink snapshot, evaluated on the star
/// formed by the center and its leaves.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SnapshotFlags {
    /// Some leaf `u` has `δ(u, v) = floor(n/2)`.
    pub is_opposite: bool,
    pub has_duplicate_leaf_states: bool,
    /// Every leaf shares one state (requires at least one leaf).
    pub single_leaf_state: bool,
    /// Star width below `n/2 - 1`.
    pub small_width: bool,
}

/// The local configuration on `N_v` at a time `v` blinks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalSnapshot {
    pub center: usize,
    /// `v` followed by its neighbors in increasing order.
    pub neighborhood: Vec<usize>,
    pub time: usize,
    pub activator: u32,
    /// Relative states over `neighborhood`; the first equals `activator`.
    pub relative: Vec<u32>,
    /// Standard states over `neighborhood`; the first equals `b(n)`.
    pub standard: Vec<u32>,
    pub in_cycle: bool,
    pub flags: SnapshotFlags,
}

impl LocalSnapshot {
    /// Time-independent identity of the local configuration.
    pub fn key(&self) -> String {
        self.standard.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReturnMapReport {
    pub center: usize,
    pub neighborhood: Vec<usize>,
    pub leaves: Vec<usize>,
    pub snapshots: Vec<LocalSnapshot>,
    /// Keyed by the standard local states, comma separated.
    pub classification: BTreeMap<String, LocalClass>,
    /// `v` has no blink time in `[0, ρ+π)`.
    pub never_blinks: bool,
}

impl ReturnMapReport {
    pub fn class_of(&self, s: &LocalSnapshot) -> LocalClass {
        self.classification[&s.key()]
    }

    pub fn recurrent(&self) -> impl Iterator<Item = &LocalSnapshot> {
        self.snapshots.iter().filter(|s| s.in_cycle)
    }
}

pub(crate) fn leaves_of(g: &Graph, v: usize) -> Vec<usize> {
    g.neighbors(v).iter().copied().filter(|&u| g.degree(u) == 1).collect()
}

pub(crate) fn flags_at(n: u32, x: &[u32], v: usize, leaves: &[usize]) -> SnapshotFlags {
    let half = n / 2;
    let mut leaf_states: Vec<u32> = leaves.iter().map(|&u| x[u]).collect();
    leaf_states.sort_unstable();
    let distinct = {
        let mut d = leaf_states.clone();
        d.dedup();
        d.len()
    };
    let star_width = width_of(n, std::iter::once(x[v]).chain(leaf_states.iter().copied()));
    SnapshotFlags {
        is_opposite: leaves.iter().any(|&u| (x[v] + n - x[u]) % n == half),
        has_duplicate_leaf_states: distinct < leaf_states.len(),
        single_leaf_state: distinct == 1,
        small_width: 2 * star_width + 2 < n,
    }
}

/// Poincaré return map at `v` on a computed orbit.
pub fn return_map_of_orbit(g: &Graph, orbit: &Orbit, v: usize) -> Result<ReturnMapReport, AnalysisError> {
    orbit.ensure_closed()?;
    g.check_vertex(v)?;
    let n = orbit.n();
    let b = blinking_state(n);
    let neighborhood: Vec<usize> = std::iter::once(v).chain(g.neighbors(v).iter().copied()).collect();
    let leaves = leaves_of(g, v);
    let window = orbit.cycle_window();
    let snapshots: Vec<LocalSnapshot> = orbit.blink_times()[v]
        .iter()
        .map(|&t| {
            let x = orbit.states_at(t);
            let shift = (t % n as usize) as u32;
            let standard: Vec<u32> = neighborhood.iter().map(|&u| x[u]).collect();
            LocalSnapshot {
                center: v,
                neighborhood: neighborhood.clone(),
                time: t,
                activator: (b + n - shift) % n,
                relative: standard.iter().map(|&s| (s + n - shift) % n).collect(),
                standard,
                in_cycle: window.contains(&t),
                flags: flags_at(n, x, v, &leaves),
            }
        })
        .collect();
    let mut classification = BTreeMap::new();
    for s in &snapshots {
        let class = classification.entry(s.key()).or_insert(LocalClass::Transient);
        if s.in_cycle {
            *class = LocalClass::Recurrent;
        }
    }
    Ok(ReturnMapReport {
        center: v,
        neighborhood,
        leaves,
        never_blinks: snapshots.is_empty(),
        snapshots,
        classification,
    })
}

pub fn return_map(g: &Graph, x0: &Configuration, v: usize) -> Result<ReturnMapReport, AnalysisError> {
    let orbit = compute_orbit(g, x0, None)?;
    return_map_of_orbit(g, &orbit, v)
}
