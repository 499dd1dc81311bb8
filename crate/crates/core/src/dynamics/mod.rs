//! The deterministic firefly dynamic: standard and relative transition maps,
//! orbits with exact cycle detection, and restriction to subgraphs.

mod config;
mod orbit;
mod restrict;
mod step;
mod trace;

pub use config::{
    blinking_state, clockwise, from_relative, to_relative, ConfigSpace, Configuration, Relation,
    RelativeConfiguration,
};
pub use orbit::{compute_orbit, default_cap, Orbit, PullEvent};
pub use restrict::{
    restricts_on, restriction_failures, restriction_on_orbit, Restriction, RestrictionMode, SubgraphWindow,
};
pub use step::{relative_window_discrepancies, step, step_relative, step_with_pulls, Pull};
pub use trace::Trace;

pub(crate) use config::{pack_states, width_of};

use thiserror::Error;

use crate::graph::GraphError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DynamicsError {
    #[error("period must be at least 3, got {0}")]
    InvalidPeriod(u32),
    #[error("state {state} at vertex {vertex} is outside Z_{n}")]
    StateOutOfRange { vertex: usize, state: u32, n: u32 },
    #[error("configuration has {got} entries but the graph has {expected} vertices")]
    LengthMismatch { expected: usize, got: usize },
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("empty vertex subset")]
    EmptySubset,
    #[error("a step cap is required for {vertices} vertices at period {n}")]
    MissingCap { vertices: usize, n: u32 },
    #[error("orbit truncated after {computed} configurations without repeating")]
    Truncated { computed: usize },
    #[error("malformed configuration literal {0}")]
    ParseConfiguration(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}
