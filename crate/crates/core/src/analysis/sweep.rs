use num_rational::Rational64;
use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::{blinking_state, compute_orbit, ConfigSpace, Configuration, Orbit};
use crate::graph::{Graph, GraphJson};

use super::{gate, ratio_str, AnalysisError};

/// Result of sweeping every `n`-configuration on a graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SyncReport {
    pub graph: GraphJson,
    pub n: u32,
    pub is_n_synchronizing: bool,
    /// Least non-synchronizing configuration.
    pub witness: Option<Configuration>,
    pub non_synchronizing: u64,
    pub configs_checked: u64,
    pub max_sync_time: Option<usize>,
    /// Least configuration attaining `max_sync_time`.
    pub argmax: Option<Configuration>,
    /// Pulls outside the inhibitory window, summed over all orbits.
    pub inhibitory_violations: u64,
}

/// Commutative, associative summary of a batch of orbits, keyed by
/// enumeration index so the reduced result is order independent.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub(crate) struct SyncTally {
    pub checked: u64,
    pub non_sync: u64,
    pub witness: Option<u64>,
    /// (sync time, index); ties go to the smaller index.
    pub slowest: Option<(usize, u64)>,
    pub violations: u64,
}

impl SyncTally {
    pub fn observe(index: u64, orbit: &Orbit) -> Self {
        let violations = orbit.inhibitory_violations().len() as u64;
        match orbit.sync_time() {
            Some(t) => SyncTally { checked: 1, slowest: Some((t, index)), violations, ..Default::default() },
            None => SyncTally { checked: 1, non_sync: 1, witness: Some(index), violations, ..Default::default() },
        }
    }

    pub fn merge(self, other: Self) -> Self {
        let slowest = match (self.slowest, other.slowest) {
            (Some(a), Some(b)) => Some(if a.0 > b.0 || (a.0 == b.0 && a.1 < b.1) { a } else { b }),
            (a, b) => a.or(b),
        };
        SyncTally {
            checked: self.checked + other.checked,
            non_sync: self.non_sync + other.non_sync,
            witness: match (self.witness, other.witness) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            },
            slowest,
            violations: self.violations + other.violations,
        }
    }
}

/// Runs `observe` on the orbit of every configuration, in parallel, and
/// folds the results with `merge`.
pub(crate) fn sweep_orbits<T, F, M>(g: &Graph, n: u32, budget: u64, observe: F, merge: M) -> Result<T, AnalysisError>
where
    T: Send + Default,
    F: Fn(u64, &Orbit) -> T + Sync,
    M: Fn(T, T) -> T + Sync,
{
    let space = ConfigSpace::new(n, g.vertex_count())?;
    let size = gate(n, g.vertex_count(), budget)?;
    (0..size)
        .into_par_iter()
        .map(|i| {
            let orbit = compute_orbit(g, &space.nth(i), None)?;
            orbit.ensure_closed()?;
            Ok(observe(i, &orbit))
        })
        .try_reduce(T::default, |a, b| Ok(merge(a, b)))
}

pub(crate) fn report_from_tally(g: &Graph, n: u32, tally: SyncTally) -> SyncReport {
    let space = ConfigSpace { n, len: g.vertex_count() };
    let sync = tally.non_sync == 0;
    SyncReport {
        graph: GraphJson::from(g),
        n,
        is_n_synchronizing: sync,
        witness: tally.witness.map(|i| space.nth(i)),
        non_synchronizing: tally.non_sync,
        configs_checked: tally.checked,
        max_sync_time: if sync { tally.slowest.map(|s| s.0) } else { None },
        argmax: if sync { tally.slowest.map(|s| space.nth(s.1)) } else { None },
        inhibitory_violations: tally.violations,
    }
}

/// Decides whether every `n`-configuration on `g` synchronizes by
/// enumerating all `n^|V|` of them (refused beyond `budget`).
pub fn is_n_synchronizing(g: &Graph, n: u32, budget: u64) -> Result<SyncReport, AnalysisError> {
    if !g.is_connected() {
        return Err(AnalysisError::Disconnected);
    }
    let tally = sweep_orbits(g, n, budget, SyncTally::observe, SyncTally::merge)?;
    Ok(report_from_tally(g, n, tally))
}

/// Brute-forced maximum synchronization time on a path, reported with the
/// linear lower and upper bounds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathBoundReport {
    pub n: u32,
    pub m: usize,
    pub max_sync_time: usize,
    pub argmax: Configuration,
    #[serde(serialize_with = "ratio_str")]
    pub lower_bound: Rational64,
    #[serde(serialize_with = "ratio_str")]
    pub upper_bound: Rational64,
    pub within_upper: bool,
    pub meets_lower: bool,
    pub all_synchronize: bool,
    pub inhibitory_violations: u64,
}

/// `n (n/2 - 1 + m)`
pub(crate) fn path_lower_bound(n: u32, m: usize) -> Rational64 {
    let n = Rational64::from_integer(n as i64);
    n * (n / 2 - 1 + m as i64)
}

/// `(m - 1) (n²/2 + 2n - 2)`
pub(crate) fn path_upper_bound(n: u32, m: usize) -> Rational64 {
    Rational64::from_integer(m as i64 - 1) * one_branch_budget(n)
}

/// `n²/2 + 2n - 2`
pub(crate) fn one_branch_budget(n: u32) -> Rational64 {
    let n = Rational64::from_integer(n as i64);
    n * n / 2 + n * 2 - 2
}

pub fn max_sync_time_path(n: u32, m: usize, budget: u64) -> Result<PathBoundReport, AnalysisError> {
    let g = Graph::path(m)?;
    let report = is_n_synchronizing(&g, n, budget)?;
    let lower_bound = path_lower_bound(n, m);
    let upper_bound = path_upper_bound(n, m);
    let (max_sync_time, argmax) = match (report.max_sync_time, report.argmax) {
        (Some(t), Some(x)) => (t, x),
        _ => {
            return Err(AnalysisError::Falsified(format!(
                "path({m}) is not {n}-synchronizing: witness {}",
                report.witness.expect("non-synchronizing report has a witness")
            )))
        }
    };
    let t = Rational64::from_integer(max_sync_time as i64);
    Ok(PathBoundReport {
        n,
        m,
        max_sync_time,
        argmax,
        lower_bound,
        upper_bound,
        within_upper: t <= upper_bound,
        meets_lower: t >= lower_bound,
        all_synchronize: report.is_n_synchronizing,
        inhibitory_violations: report.inhibitory_violations,
    })
}

/// `[b(n), n-1, ..., n-1]` on `m` vertices.
pub fn fig8_configuration(n: u32, m: usize) -> Result<Configuration, AnalysisError> {
    if m == 0 {
        return Err(AnalysisError::InvalidParameter("path needs at least one vertex".into()));
    }
    let mut states = vec![n - 1; m];
    states[0] = blinking_state(n);
    Ok(Configuration::new(n, states)?)
}

/// Sync time of the slow path configuration next to `n (n/2 - 1 + m)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Fig8Report {
    pub n: u32,
    pub m: usize,
    pub configuration: Configuration,
    pub sync_time: Option<usize>,
    #[serde(serialize_with = "ratio_str")]
    pub formula: Rational64,
    pub matches_formula: bool,
    pub inhibitory_violations: usize,
}

pub fn fig8_family(n: u32, m: usize) -> Result<Fig8Report, AnalysisError> {
    let g = Graph::path(m)?;
    let x0 = fig8_configuration(n, m)?;
    let orbit = compute_orbit(&g, &x0, Some(1_000_000))?;
    orbit.ensure_closed()?;
    let formula = path_lower_bound(n, m);
    let sync_time = orbit.sync_time();
    Ok(Fig8Report {
        n,
        m,
        configuration: x0,
        sync_time,
        formula,
        matches_formula: sync_time.is_some_and(|t| Rational64::from_integer(t as i64) == formula),
        inhibitory_violations: orbit.inhibitory_violations().len(),
    })
}
