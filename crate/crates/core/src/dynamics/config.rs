use std::fmt;

use serde::{Deserialize, Serialize};

use super::DynamicsError;

/// The blinking state `floor((n-1)/2)`.
#[inline]
pub fn blinking_state(n: u32) -> u32 {
    (n - 1) / 2
}

/// Clockwise displacement `(to - from) mod n`.
#[inline]
pub fn clockwise(from: u32, to: u32, n: u32) -> u32 {
    (to + n - from) % n
}

/// Angular relation of `v` to `u`, read off `δ(u, v)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `δ(u, v) < n/2`
    Clockwise,
    /// `δ(u, v) = n/2` (even `n` only)
    Opposite,
    /// `δ(u, v) > n/2`
    Counterclockwise,
}

impl Relation {
    pub fn of(displacement: u32, n: u32) -> Self {
        match (2 * displacement).cmp(&n) {
            std::cmp::Ordering::Less => Relation::Clockwise,
            std::cmp::Ordering::Equal => Relation::Opposite,
            std::cmp::Ordering::Greater => Relation::Counterclockwise,
        }
    }
}

/// An assignment of a state in `Z_n` to every vertex. Serializes as the bare
/// state array.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    n: u32,
    states: Vec<u32>,
}

impl Configuration {
    pub fn new(n: u32, states: Vec<u32>) -> Result<Self, DynamicsError> {
        check_period(n)?;
        if let Some((vertex, &state)) = states.iter().enumerate().find(|(_, &s)| s >= n) {
            return Err(DynamicsError::StateOutOfRange { vertex, state, n });
        }
        Ok(Configuration { n, states })
    }

    pub(crate) fn from_raw(n: u32, states: Vec<u32>) -> Self {
        debug_assert!(states.iter().all(|&s| s < n));
        Configuration { n, states }
    }

    pub fn constant(n: u32, len: usize, state: u32) -> Result<Self, DynamicsError> {
        Configuration::new(n, vec![state; len])
    }

    /// Parses a comma-separated literal such as `2,5,5,5`.
    pub fn parse(n: u32, literal: &str) -> Result<Self, DynamicsError> {
        let states = literal
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|e| DynamicsError::ParseConfiguration(format!("`{literal}`: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Configuration::new(n, states)
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    #[inline]
    pub fn states(&self) -> &[u32] {
        &self.states
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.states.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    #[inline]
    pub fn get(&self, v: usize) -> u32 {
        self.states[v]
    }

    #[inline]
    pub fn blinking_state(&self) -> u32 {
        blinking_state(self.n)
    }

    pub fn is_constant(&self) -> bool {
        self.states.windows(2).all(|w| w[0] == w[1])
    }

    /// `δ(u, v) = (x[v] - x[u]) mod n`.
    pub fn displacement(&self, u: usize, v: usize) -> u32 {
        clockwise(self.states[u], self.states[v], self.n)
    }

    /// Relation of `v` to `u`.
    pub fn relation(&self, u: usize, v: usize) -> Relation {
        Relation::of(self.displacement(u, v), self.n)
    }

    /// Width of the configuration over `subset` (all vertices when `None`).
    pub fn width(&self, subset: Option<&[usize]>) -> Result<u32, DynamicsError> {
        match subset {
            None if self.states.is_empty() => Err(DynamicsError::EmptySubset),
            None => Ok(width_of(self.n, self.states.iter().copied())),
            Some([]) => Err(DynamicsError::EmptySubset),
            Some(vs) => {
                if let Some(&bad) = vs.iter().find(|&&v| v >= self.states.len()) {
                    return Err(DynamicsError::VertexOutOfRange(bad));
                }
                Ok(width_of(self.n, vs.iter().map(|&v| self.states[v])))
            }
        }
    }

    /// Restriction to the listed vertices, in the given order.
    pub fn restrict(&self, vertices: &[usize]) -> Configuration {
        Configuration { n: self.n, states: vertices.iter().map(|&v| self.states[v]).collect() }
    }

    /// Radix-`n` code with vertex 0 as the most significant digit, so code
    /// order is lexicographic order. `None` if it does not fit in 64 bits.
    pub fn pack(&self) -> Option<u64> {
        pack_states(self.n, &self.states)
    }

    pub fn unpack(n: u32, len: usize, mut code: u64) -> Configuration {
        let mut states = vec![0; len];
        for slot in states.iter_mut().rev() {
            *slot = (code % n as u64) as u32;
            code /= n as u64;
        }
        Configuration { n, states }
    }

    pub fn to_literal(&self) -> String {
        self.to_string()
    }
}

pub(crate) fn pack_states(n: u32, states: &[u32]) -> Option<u64> {
    let mut code: u64 = 0;
    for &s in states {
        code = code.checked_mul(n as u64)?.checked_add(s as u64)?;
    }
    Some(code)
}

pub(crate) fn check_period(n: u32) -> Result<(), DynamicsError> {
    if n < 3 {
        Err(DynamicsError::InvalidPeriod(n))
    } else {
        Ok(())
    }
}

/// Shortest arc of `Z_n` covering every state: `n` minus the largest
/// circular gap between consecutive occupied states.
pub(crate) fn width_of(n: u32, states: impl Iterator<Item = u32>) -> u32 {
    let mut occupied = vec![false; n as usize];
    for s in states {
        occupied[s as usize] = true;
    }
    let present: Vec<u32> = (0..n).filter(|&s| occupied[s as usize]).collect();
    let Some(&first) = present.first() else {
        return 0;
    };
    let mut max_gap = first + n - present[present.len() - 1];
    for w in present.windows(2) {
        max_gap = max_gap.max(w[1] - w[0]);
    }
    n - max_gap
}

impl Serialize for Configuration {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.states.serialize(serializer)
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.states.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}] (n={})", self.n)
    }
}

/// All `n^len` configurations in radix (lexicographic) order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConfigSpace {
    pub n: u32,
    pub len: usize,
}

impl ConfigSpace {
    pub fn new(n: u32, len: usize) -> Result<Self, DynamicsError> {
        check_period(n)?;
        Ok(ConfigSpace { n, len })
    }

    /// `n^len`, or `None` on overflow.
    pub fn size(&self) -> Option<u64> {
        (self.n as u64).checked_pow(self.len as u32)
    }

    pub fn nth(&self, index: u64) -> Configuration {
        Configuration::unpack(self.n, self.len, index)
    }

    pub fn iter(&self) -> impl Iterator<Item = Configuration> + '_ {
        let size = self.size().expect("configuration space too large to iterate");
        (0..size).map(move |i| self.nth(i))
    }
}

/// A relative configuration: states shifted by elapsed time, plus the
/// activator that marks where the blinking state currently sits.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RelativeConfiguration {
    n: u32,
    activator: u32,
    states: Vec<u32>,
}

impl RelativeConfiguration {
    pub fn new(n: u32, activator: u32, states: Vec<u32>) -> Result<Self, DynamicsError> {
        check_period(n)?;
        if activator >= n {
            return Err(DynamicsError::StateOutOfRange { vertex: usize::MAX, state: activator, n });
        }
        if let Some((vertex, &state)) = states.iter().enumerate().find(|(_, &s)| s >= n) {
            return Err(DynamicsError::StateOutOfRange { vertex, state, n });
        }
        Ok(RelativeConfiguration { n, activator, states })
    }

    pub(crate) fn from_raw(n: u32, activator: u32, states: Vec<u32>) -> Self {
        RelativeConfiguration { n, activator, states }
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    #[inline]
    pub fn activator(&self) -> u32 {
        self.activator
    }

    #[inline]
    pub fn states(&self) -> &[u32] {
        &self.states
    }

    #[inline]
    pub fn is_blinking(&self, v: usize) -> bool {
        self.states[v] == self.activator
    }
}

impl fmt::Debug for RelativeConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rel[α={}; {:?}] (n={})", self.activator, self.states, self.n)
    }
}

/// `Y(v) = (X(v) - t) mod n`, activator `(b(n) - t) mod n`.
pub fn to_relative(x: &Configuration, t: u64) -> RelativeConfiguration {
    let n = x.n();
    let shift = (t % n as u64) as u32;
    RelativeConfiguration {
        n,
        activator: (blinking_state(n) + n - shift) % n,
        states: x.states().iter().map(|&s| (s + n - shift) % n).collect(),
    }
}

/// Inverse of [`to_relative`] for the same `t`.
pub fn from_relative(y: &RelativeConfiguration, t: u64) -> Configuration {
    let n = y.n();
    let shift = (t % n as u64) as u32;
    Configuration::from_raw(n, y.states().iter().map(|&s| (s + shift) % n).collect())
}
