use std::collections::HashMap;
use std::ops::Range;

use serde::Serialize;

use crate::graph::Graph;

use super::config::{blinking_state, clockwise, pack_states};
use super::step::{check_dimensions, step_states, Pull};
use super::{Configuration, DynamicsError};

/// A pull logged at the transition from `X_t` to `X_{t+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PullEvent {
    pub t: usize,
    pub puller: usize,
    pub pulled: usize,
}

/// An orbit cut at its first repeated configuration.
///
/// `trajectory` holds `X_0 .. X_{ρ+π-1}`; `X_{ρ+π} = X_ρ`. When the step cap
/// ran out first, `truncated` is set, `period` is 0 and `transient` is the
/// number of configurations computed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    n: u32,
    trajectory: Vec<Vec<u32>>,
    transient: usize,
    period: usize,
    truncated: bool,
    sync_time: Option<usize>,
    blink_times: Vec<Vec<usize>>,
    pulls: Vec<PullEvent>,
}

enum Visited {
    Packed(HashMap<u64, usize>),
    Full(HashMap<Vec<u32>, usize>),
}

impl Visited {
    fn new(n: u32, len: usize) -> Self {
        if (n as u64).checked_pow(len as u32).is_some() {
            Visited::Packed(HashMap::new())
        } else {
            Visited::Full(HashMap::new())
        }
    }

    /// Records `x` at time `t`, or returns the earlier time it was seen.
    fn visit(&mut self, n: u32, x: &[u32], t: usize) -> Option<usize> {
        match self {
            Visited::Packed(m) => {
                let key = pack_states(n, x).expect("checked at construction");
                match m.insert(key, t) {
                    Some(prev) => {
                        m.insert(key, prev);
                        Some(prev)
                    }
                    None => None,
                }
            }
            Visited::Full(m) => match m.get(x) {
                Some(&prev) => Some(prev),
                None => {
                    m.insert(x.to_vec(), t);
                    None
                }
            },
        }
    }
}

/// Step cap used when none is supplied: `n^|V| + 1`, available only when
/// `|V| log2(n) <= 40`.
pub fn default_cap(n: u32, vertices: usize) -> Option<usize> {
    if vertices as f64 * (n as f64).log2() <= 40.0 {
        (n as usize).checked_pow(vertices as u32).map(|s| s + 1)
    } else {
        None
    }
}

/// Iterates the firefly map from `x0` until a configuration repeats.
///
/// `cap` bounds the number of configurations generated. Hitting it yields a
/// truncated orbit rather than an error; callers needing the limit cycle use
/// [`Orbit::ensure_closed`].
pub fn compute_orbit(g: &Graph, x0: &Configuration, cap: Option<usize>) -> Result<Orbit, DynamicsError> {
    check_dimensions(g, x0.len())?;
    let n = x0.n();
    let len = x0.len();
    let cap = match cap {
        Some(c) => c.max(1),
        None => default_cap(n, len).ok_or(DynamicsError::MissingCap { vertices: len, n })?,
    };
    let mut visited = Visited::new(n, len);
    let mut trajectory = vec![x0.states().to_vec()];
    visited.visit(n, x0.states(), 0);
    let mut pulls = Vec::new();
    let mut scratch = Vec::new();
    let mut next = vec![0; len];
    let mut closure = None;
    while trajectory.len() < cap {
        let t = trajectory.len() - 1;
        scratch.clear();
        step_states(g, n, &trajectory[t], &mut next, Some(&mut scratch));
        pulls.extend(scratch.iter().map(|p: &Pull| PullEvent { t, puller: p.puller, pulled: p.pulled }));
        if let Some(prev) = visited.visit(n, &next, t + 1) {
            closure = Some(prev);
            break;
        }
        trajectory.push(next.clone());
    }
    let (transient, period, truncated) = match closure {
        Some(rho) => (rho, trajectory.len() - rho, false),
        None => (trajectory.len(), 0, true),
    };
    let b = blinking_state(n);
    let mut blink_times = vec![Vec::new(); len];
    for (t, x) in trajectory.iter().enumerate() {
        for (v, &s) in x.iter().enumerate() {
            if s == b {
                blink_times[v].push(t);
            }
        }
    }
    let first_constant = trajectory.iter().position(|x| x.windows(2).all(|w| w[0] == w[1]));
    // A constant configuration only ever reaches constant ones, so the first
    // one seen lies on the limit cycle.
    let sync_time = if truncated { None } else { first_constant };
    Ok(Orbit { n, trajectory, transient, period, truncated, sync_time, blink_times, pulls })
}

impl Orbit {
    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn vertex_count(&self) -> usize {
        self.trajectory[0].len()
    }

    pub fn initial(&self) -> Configuration {
        self.configuration(0)
    }

    /// Transient length ρ.
    #[inline]
    pub fn transient(&self) -> usize {
        self.transient
    }

    /// Limit cycle length π (0 when truncated).
    #[inline]
    pub fn period(&self) -> usize {
        self.period
    }

    #[inline]
    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn ensure_closed(&self) -> Result<(), DynamicsError> {
        if self.truncated {
            Err(DynamicsError::Truncated { computed: self.trajectory.len() })
        } else {
            Ok(())
        }
    }

    /// Smallest `t` with `X_t` constant.
    #[inline]
    pub fn sync_time(&self) -> Option<usize> {
        self.sync_time
    }

    #[inline]
    pub fn synchronizes(&self) -> bool {
        self.sync_time.is_some()
    }

    /// Stored configurations `X_0 .. X_{ρ+π-1}` as raw state vectors.
    #[inline]
    pub fn trajectory(&self) -> &[Vec<u32>] {
        &self.trajectory
    }

    /// `[ρ, ρ+π)`.
    pub fn cycle_window(&self) -> Range<usize> {
        self.transient..self.transient + self.period
    }

    /// `X_t` for any `t`, folding times past the window onto the cycle.
    pub fn states_at(&self, t: usize) -> &[u32] {
        &self.trajectory[self.index_of(t)]
    }

    pub fn configuration(&self, t: usize) -> Configuration {
        Configuration::from_raw(self.n, self.states_at(t).to_vec())
    }

    fn index_of(&self, t: usize) -> usize {
        if t < self.trajectory.len() {
            t
        } else {
            assert!(!self.truncated, "time {t} lies beyond a truncated orbit");
            self.transient + (t - self.transient) % self.period
        }
    }

    /// Times `t < ρ+π` at which each vertex sits at the blinking state.
    #[inline]
    pub fn blink_times(&self) -> &[Vec<usize>] {
        &self.blink_times
    }

    /// Pulls for the transitions `t -> t+1`, `t < ρ+π`.
    #[inline]
    pub fn pulls(&self) -> &[PullEvent] {
        &self.pulls
    }

    /// Whether `v` blinks inside the limit cycle.
    pub fn blinks_infinitely(&self, v: usize) -> Result<bool, DynamicsError> {
        self.ensure_closed()?;
        if v >= self.vertex_count() {
            return Err(DynamicsError::VertexOutOfRange(v));
        }
        let window = self.cycle_window();
        Ok(self.blink_times[v].iter().any(|t| window.contains(t)))
    }

    pub fn all_blink_infinitely(&self) -> Result<bool, DynamicsError> {
        self.ensure_closed()?;
        Ok((0..self.vertex_count()).all(|v| self.blinks_infinitely(v).expect("closed orbit")))
    }

    /// Pulls whose displacement `δ_t(puller, pulled)` falls outside
    /// `1..=floor(n/2)`.
    pub fn inhibitory_violations(&self) -> Vec<PullEvent> {
        let n = self.n;
        self.pulls
            .iter()
            .copied()
            .filter(|p| {
                let x = &self.trajectory[p.t];
                let d = clockwise(x[p.puller], x[p.pulled], n);
                !(1..=n / 2).contains(&d)
            })
            .collect()
    }
}
