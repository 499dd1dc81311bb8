use std::collections::{BTreeMap, VecDeque};

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::{pack_states, ConfigSpace, Configuration};
use crate::graph::{Graph, GraphJson};

use super::{step_masked, Mask, NoiseMode, NoiseModel, StochasticError};

/// Largest `n^|V|` materialized as a chain.
pub const MAX_CHAIN_STATES: u64 = 20_000;
/// Largest number of masks enumerated per state.
pub const MAX_CHAIN_MASKS: u64 = 1 << 20;

const ROW_TOLERANCE: f64 = 1e-12;

/// Exact absorbing-chain analysis over non-constant configurations plus one
/// lumped `sync` state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainReport {
    pub graph: GraphJson,
    pub n: u32,
    pub mode: NoiseMode,
    /// Non-constant configurations plus `sync`.
    pub state_count: usize,
    /// Labels of states whose self-transition probability is 1.
    pub absorbing_states: Vec<String>,
    pub reaches_sync_from_all: bool,
    /// Expected steps to `sync`, keyed by packed configuration.
    pub expected_absorption: BTreeMap<u64, f64>,
    /// `‖(I - Q) t - 1‖_∞`.
    pub solver_residual: f64,
    /// Largest `|row sum - 1|` over the full transition matrix.
    pub max_row_error: f64,
}

impl ChainReport {
    /// Expected absorption time from `x`; 0 for constant configurations.
    pub fn expected_from(&self, x: &Configuration) -> Option<f64> {
        if x.is_constant() {
            return Some(0.0);
        }
        self.expected_absorption.get(&x.pack()?).copied()
    }

    pub fn sync_is_unique_absorbing(&self) -> bool {
        self.absorbing_states == ["sync"]
    }
}

/// Builds the transition matrix by summing mask probabilities, certifies
/// that `sync` is absorbing and reachable from everywhere, then solves
/// `(I - Q) t = 1` by LU with partial pivoting.
pub fn build_and_analyze_chain(g: &Graph, n: u32, noise: &NoiseModel) -> Result<ChainReport, StochasticError> {
    if !g.is_connected() {
        return Err(StochasticError::Disconnected);
    }
    let space = ConfigSpace::new(n, g.vertex_count())?;
    let total = (n as u128).pow(g.vertex_count() as u32);
    if total > MAX_CHAIN_STATES as u128 {
        return Err(StochasticError::StateBudget { states: total, max: MAX_CHAIN_STATES });
    }
    let masks = 1u128 << noise.mask_len().min(127);
    if masks > MAX_CHAIN_MASKS as u128 {
        return Err(StochasticError::MaskBudget { masks, max: MAX_CHAIN_MASKS });
    }
    let total = total as u64;
    let masks = masks as u64;
    let mask_list: Vec<(Mask, f64)> = (0..masks)
        .map(|bits| {
            let m = Mask::from_bits(bits, noise.mask_len());
            let p = noise.probability(&m);
            (m, p)
        })
        .collect();

    // Transient states in packed order; `sync` takes the last index.
    let codes: Vec<u64> = (0..total).filter(|&c| !space.nth(c).is_constant()).collect();
    let sync = codes.len();
    let mut index = vec![sync; total as usize];
    for (i, &c) in codes.iter().enumerate() {
        index[c as usize] = i;
    }

    let rows: Vec<BTreeMap<usize, f64>> = codes
        .par_iter()
        .map(|&c| {
            let x = space.nth(c);
            let mut next = vec![0; x.len()];
            let mut row = BTreeMap::new();
            for (m, p) in &mask_list {
                step_masked(g, n, noise.mode(), m.present(), x.states(), &mut next);
                let code = pack_states(n, &next).expect("fits in the state gate");
                *row.entry(index[code as usize]).or_insert(0.0) += p;
            }
            row
        })
        .collect();

    let mut max_row_error: f64 = 0.0;
    for (i, row) in rows.iter().enumerate() {
        let sum: f64 = row.values().sum();
        let err = (sum - 1.0).abs();
        if err > ROW_TOLERANCE {
            return Err(StochasticError::RowSum { state: codes[i], sum });
        }
        max_row_error = max_row_error.max(err);
    }

    let mut absorbing_states: Vec<String> = rows
        .iter()
        .enumerate()
        .filter(|(i, row)| row.get(i).is_some_and(|&p| (p - 1.0).abs() <= ROW_TOLERANCE))
        .map(|(i, _)| space.nth(codes[i]).to_literal())
        .collect();
    absorbing_states.push("sync".into());

    // Reverse reachability from sync over positive-probability transitions.
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); sync + 1];
    for (i, row) in rows.iter().enumerate() {
        for (&j, &p) in row {
            if p > 0.0 && j != i {
                preds[j].push(i);
            }
        }
    }
    let mut reached = vec![false; sync + 1];
    reached[sync] = true;
    let mut queue = VecDeque::from([sync]);
    while let Some(j) = queue.pop_front() {
        for &i in &preds[j] {
            if !reached[i] {
                reached[i] = true;
                queue.push_back(i);
            }
        }
    }
    let unreachable: Vec<usize> = (0..sync).filter(|&i| !reached[i]).collect();
    if let Some(&first) = unreachable.first() {
        return Err(StochasticError::NotAbsorbing {
            unreachable: unreachable.len(),
            example: space.nth(codes[first]).to_literal(),
        });
    }

    let mut a = DMatrix::<f64>::identity(sync, sync);
    for (i, row) in rows.iter().enumerate() {
        for (&j, &p) in row {
            if j != sync {
                a[(i, j)] -= p;
            }
        }
    }
    let ones = DVector::<f64>::from_element(sync, 1.0);
    let t = a.clone().lu().solve(&ones).ok_or(StochasticError::Singular)?;
    let residual = (&a * &t - &ones).amax();

    Ok(ChainReport {
        graph: GraphJson::from(g),
        n,
        mode: noise.mode(),
        state_count: sync + 1,
        absorbing_states,
        reaches_sync_from_all: true,
        expected_absorption: codes.iter().zip(t.iter()).map(|(&c, &v)| (c, v)).collect(),
        solver_residual: residual,
        max_row_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::compute_orbit;

    #[test]
    fn path2_period3() {
        let g = Graph::path(2).unwrap();
        let noise = NoiseModel::uniform(&g, NoiseMode::EdgeReception, 0.5).unwrap();
        let r = build_and_analyze_chain(&g, 3, &noise).unwrap();
        // 9 configurations, 3 of them constant
        assert_eq!(r.state_count, 7);
        assert!(r.sync_is_unique_absorbing());
        assert!(r.reaches_sync_from_all);
        assert!(r.solver_residual < 1e-9);
        assert_eq!(r.expected_absorption.len(), 6);
    }

    #[test]
    fn hand_solved_path2() {
        // n=3, b=1. From (0,1): the blinking vertex 1 has nothing to hold,
        // vertex 0 is not above b, so both advance: (1,2). From (1,2):
        // vertex 1 is held iff the edge is present, giving sync with
        // probability p and (2,0) otherwise.
        let g = Graph::path(2).unwrap();
        let p = 0.5;
        let noise = NoiseModel::uniform(&g, NoiseMode::EdgeReception, p).unwrap();
        let r = build_and_analyze_chain(&g, 3, &noise).unwrap();
        let t = |s: [u32; 2]| r.expected_from(&Configuration::new(3, s.to_vec()).unwrap()).unwrap();
        // t12 = 1 + (1-p)(2 + t12)
        let solved = (1.0 + 2.0 * (1.0 - p)) / p;
        assert!((t([1, 2]) - solved).abs() < 1e-12);
        assert!((t([2, 0]) - (2.0 + solved)).abs() < 1e-12);
    }

    #[test]
    fn near_deterministic_limit() {
        let g = Graph::path(3).unwrap();
        let noise = NoiseModel::uniform(&g, NoiseMode::EdgeReception, 0.999).unwrap();
        let r = build_and_analyze_chain(&g, 3, &noise).unwrap();
        for (&code, &t) in &r.expected_absorption {
            let x = Configuration::unpack(3, 3, code);
            let det = compute_orbit(&g, &x, None).unwrap().sync_time().unwrap() as f64;
            assert!((t - det).abs() <= 0.05 * det, "{x}: {t} vs {det}");
        }
    }

    #[test]
    fn gates() {
        let g = Graph::path(6).unwrap();
        let noise = NoiseModel::uniform(&g, NoiseMode::EdgeReception, 0.5).unwrap();
        assert!(matches!(build_and_analyze_chain(&g, 6, &noise), Err(StochasticError::StateBudget { .. })));
    }

    #[test]
    fn emission_mode_chain() {
        let g = Graph::complete(3).unwrap();
        let noise = NoiseModel::uniform(&g, NoiseMode::VertexEmission, 0.5).unwrap();
        let r = build_and_analyze_chain(&g, 5, &noise).unwrap();
        assert!(r.sync_is_unique_absorbing());
        assert!(r.expected_from(&Configuration::new(5, vec![0, 2, 4]).unwrap()).unwrap().is_finite());
    }
}
