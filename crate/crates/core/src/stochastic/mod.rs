//! Randomized firefly dynamics where edges (reception) or vertices
//! (emission) drop out independently at every step.

mod chain;
mod monte_carlo;

pub use chain::{build_and_analyze_chain, ChainReport, MAX_CHAIN_MASKS, MAX_CHAIN_STATES};
pub use monte_carlo::{mc_ensemble, mc_run, run_seed, AbsorptionResult, EnsembleReport};

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::{blinking_state, Configuration, DynamicsError};
use crate::graph::Graph;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StochasticError {
    #[error("probability {p} at index {index} is not strictly between 0 and 1")]
    InvalidProbability { index: usize, p: f64 },
    #[error("expected {expected} probabilities, got {got}")]
    ProbabilityCount { expected: usize, got: usize },
    #[error("mask has {got} entries, graph needs {expected}")]
    MaskLength { expected: usize, got: usize },
    #[error("graph must be connected")]
    Disconnected,
    #[error("{0} must be at least 1")]
    NonPositive(&'static str),
    #[error("chain would have {states} states, limit is {max}")]
    StateBudget { states: u128, max: u64 },
    #[error("chain needs {masks} masks per state, limit is {max}")]
    MaskBudget { masks: u128, max: u64 },
    #[error("row of state {state} sums to {sum}")]
    RowSum { state: u64, sum: f64 },
    #[error("sync is unreachable from {unreachable} states, e.g. {example}; the chain is not absorbing")]
    NotAbsorbing { unreachable: usize, example: String },
    #[error("linear solve failed: (I - Q) is singular")]
    Singular,
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseMode {
    /// Each edge is present with its own probability; an absent edge hides
    /// pulses in both directions for that step.
    EdgeReception,
    /// Each vertex emits with its own probability; a silent vertex still
    /// updates but is not seen blinking.
    VertexEmission,
}

/// Presence probabilities bound to one graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    mode: NoiseMode,
    probs: Vec<f64>,
}

impl NoiseModel {
    pub fn new(g: &Graph, mode: NoiseMode, probs: Vec<f64>) -> Result<Self, StochasticError> {
        let expected = match mode {
            NoiseMode::EdgeReception => g.edge_count(),
            NoiseMode::VertexEmission => g.vertex_count(),
        };
        if probs.len() != expected {
            return Err(StochasticError::ProbabilityCount { expected, got: probs.len() });
        }
        if let Some((index, &p)) = probs.iter().enumerate().find(|(_, &p)| !(p > 0.0 && p < 1.0)) {
            return Err(StochasticError::InvalidProbability { index, p });
        }
        Ok(NoiseModel { mode, probs })
    }

    pub fn uniform(g: &Graph, mode: NoiseMode, p: f64) -> Result<Self, StochasticError> {
        let len = match mode {
            NoiseMode::EdgeReception => g.edge_count(),
            NoiseMode::VertexEmission => g.vertex_count(),
        };
        NoiseModel::new(g, mode, vec![p; len])
    }

    #[inline]
    pub fn mode(&self) -> NoiseMode {
        self.mode
    }

    /// Per-edge (in edge order) or per-vertex probabilities.
    #[inline]
    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    /// Number of mask entries: edges or vertices.
    #[inline]
    pub fn mask_len(&self) -> usize {
        self.probs.len()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Mask {
        Mask { present: self.probs.iter().map(|&p| rng.random_bool(p)).collect() }
    }

    /// Probability of drawing exactly `mask`.
    pub fn probability(&self, mask: &Mask) -> f64 {
        self.probs
            .iter()
            .zip(&mask.present)
            .map(|(&p, &on)| if on { p } else { 1.0 - p })
            .product()
    }
}

/// Which edges or vertices are present for one step.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mask {
    present: Vec<bool>,
}

impl Mask {
    pub fn new(present: Vec<bool>) -> Self {
        Mask { present }
    }

    pub fn all(len: usize) -> Self {
        Mask { present: vec![true; len] }
    }

    pub fn none(len: usize) -> Self {
        Mask { present: vec![false; len] }
    }

    /// Bit `i` of `bits` gives entry `i`.
    pub fn from_bits(bits: u64, len: usize) -> Self {
        Mask { present: (0..len).map(|i| bits >> i & 1 == 1).collect() }
    }

    #[inline]
    pub fn present(&self) -> &[bool] {
        &self.present
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.present.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.present.is_empty()
    }
}

pub(crate) fn step_masked(g: &Graph, n: u32, mode: NoiseMode, mask: &[bool], x: &[u32], out: &mut [u32]) {
    let b = blinking_state(n);
    for v in 0..x.len() {
        let s = x[v];
        let held = s > b
            && g.incident(v).iter().any(|&(u, e)| {
                x[u] == b
                    && match mode {
                        NoiseMode::EdgeReception => mask[e],
                        NoiseMode::VertexEmission => mask[u],
                    }
            });
        out[v] = if held { s } else { (s + 1) % n };
    }
}

/// One step of the firefly rule with the pulses allowed by `mask`.
pub fn step_stochastic(
    g: &Graph,
    x: &Configuration,
    noise: &NoiseModel,
    mask: &Mask,
) -> Result<Configuration, StochasticError> {
    if g.vertex_count() != x.len() {
        return Err(DynamicsError::LengthMismatch { expected: g.vertex_count(), got: x.len() }.into());
    }
    if mask.len() != noise.mask_len() {
        return Err(StochasticError::MaskLength { expected: noise.mask_len(), got: mask.len() });
    }
    let mut out = vec![0; x.len()];
    step_masked(g, x.n(), noise.mode, &mask.present, x.states(), &mut out);
    Ok(Configuration::new(x.n(), out)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::step;
    use proptest::prelude::{any, prop_assert_eq, prop_oneof, proptest, Just};

    #[test]
    fn path2_examples() {
        let g = Graph::path(2).unwrap();
        let noise = NoiseModel::uniform(&g, NoiseMode::EdgeReception, 0.5).unwrap();
        let x = Configuration::new(6, vec![2, 5]).unwrap();
        assert_eq!(step_stochastic(&g, &x, &noise, &Mask::none(1)).unwrap().states(), &[3, 0]);
        assert_eq!(step_stochastic(&g, &x, &noise, &Mask::all(1)).unwrap().states(), &[3, 5]);
    }

    #[test]
    fn silent_vertex_still_updates() {
        let g = Graph::path(2).unwrap();
        let noise = NoiseModel::uniform(&g, NoiseMode::VertexEmission, 0.5).unwrap();
        let x = Configuration::new(6, vec![2, 5]).unwrap();
        let silent0 = Mask::new(vec![false, true]);
        assert_eq!(step_stochastic(&g, &x, &noise, &silent0).unwrap().states(), &[3, 0]);
        let silent1 = Mask::new(vec![true, false]);
        assert_eq!(step_stochastic(&g, &x, &noise, &silent1).unwrap().states(), &[3, 5]);
    }

    #[test]
    fn validation() {
        let g = Graph::path(3).unwrap();
        assert!(matches!(
            NoiseModel::new(&g, NoiseMode::EdgeReception, vec![0.5]),
            Err(StochasticError::ProbabilityCount { expected: 2, got: 1 })
        ));
        assert!(matches!(
            NoiseModel::uniform(&g, NoiseMode::VertexEmission, 1.0),
            Err(StochasticError::InvalidProbability { index: 0, .. })
        ));
        let noise = NoiseModel::uniform(&g, NoiseMode::EdgeReception, 0.3).unwrap();
        let x = Configuration::constant(4, 3, 0).unwrap();
        assert!(matches!(step_stochastic(&g, &x, &noise, &Mask::all(3)), Err(StochasticError::MaskLength { .. })));
        let total: f64 = (0..4).map(|b| noise.probability(&Mask::from_bits(b, 2))).sum();
        assert!((total - 1.0).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn full_mask_is_deterministic(
            n in 3u32..9,
            seed in any::<u64>(),
            mode in prop_oneof![Just(NoiseMode::EdgeReception), Just(NoiseMode::VertexEmission)],
        ) {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let v = rng.random_range(1..8);
            let g = crate::graph::random_connected_graph(&mut rng, v, 0.4);
            let x = Configuration::new(n, (0..v).map(|_| rng.random_range(0..n)).collect()).unwrap();
            let noise = NoiseModel::uniform(&g, mode, 0.5).unwrap();
            let full = Mask::all(noise.mask_len());
            prop_assert_eq!(step_stochastic(&g, &x, &noise, &full).unwrap(), step(&g, &x).unwrap());
        }

        #[test]
        fn empty_edge_mask_isolates(n in 3u32..9, states in proptest::collection::vec(0u32..3, 2..7)) {
            let g = Graph::complete(states.len()).unwrap();
            let x = Configuration::new(n, states.clone()).unwrap();
            let noise = NoiseModel::uniform(&g, NoiseMode::EdgeReception, 0.5).unwrap();
            let y = step_stochastic(&g, &x, &noise, &Mask::none(g.edge_count())).unwrap();
            let expected: Vec<u32> = states.iter().map(|s| (s + 1) % n).collect();
            prop_assert_eq!(y.states(), &expected[..]);
        }
    }
}
