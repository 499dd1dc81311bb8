//! Finite-state pulse-coupled oscillator ("firefly") networks.
//!
//! * [`graph`]: simple graphs, family generators, stars and branches, tree
//!   enumeration, text/JSON/DOT formats.
//! * [`dynamics`]: the synchronous firefly map in standard and relative form,
//!   orbits with exact limit-cycle detection, width, restriction.
//! * [`analysis`]: exhaustive synchronization sweeps and checkers for the
//!   path, tree, blinking and branch results, return-map classification.
//! * [`stochastic`]: randomized edge/vertex presence, seeded Monte Carlo and
//!   exact absorbing-chain analysis.

pub mod analysis;
pub mod dynamics;
pub mod graph;
pub mod stochastic;

pub use dynamics::{compute_orbit, step, Configuration, Orbit};
pub use graph::Graph;
