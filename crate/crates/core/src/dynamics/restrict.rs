use serde::Serialize;

use crate::graph::Graph;

use super::orbit::{compute_orbit, Orbit};
use super::step::step_states;
use super::{Configuration, DynamicsError};

/// An induced subgraph `H` of an ambient graph, kept alongside the vertex
/// list that embeds it.
#[derive(Debug, Clone)]
pub struct SubgraphWindow {
    vertices: Vec<usize>,
    subgraph: Graph,
}

impl SubgraphWindow {
    /// `vertices` are deduplicated and sorted; subgraph index `i` is
    /// `vertices()[i]` in the ambient graph.
    pub fn new(g: &Graph, vertices: &[usize]) -> Result<Self, DynamicsError> {
        let mut vs = vertices.to_vec();
        vs.sort_unstable();
        vs.dedup();
        if vs.is_empty() {
            return Err(DynamicsError::EmptySubset);
        }
        let (subgraph, _) = g.induced(&vs)?;
        Ok(SubgraphWindow { vertices: vs, subgraph })
    }

    /// The window obtained by deleting `removed` from `g`.
    pub fn complement(g: &Graph, removed: &[usize]) -> Result<Self, DynamicsError> {
        let keep: Vec<usize> = (0..g.vertex_count()).filter(|v| !removed.contains(v)).collect();
        SubgraphWindow::new(g, &keep)
    }

    #[inline]
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    #[inline]
    pub fn subgraph(&self) -> &Graph {
        &self.subgraph
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RestrictionMode {
    /// The identity must hold at every `t >= 0`.
    FromStart,
    /// Find the smallest `r` after which it holds forever.
    Eventually,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Restriction {
    pub holds: bool,
    pub r: Option<usize>,
}

/// Times `t` in `[0, ρ+π)` where `τ_G(X_t)|_H != τ_H(X_t|_H)`.
pub fn restriction_failures(orbit: &Orbit, window: &SubgraphWindow) -> Result<Vec<usize>, DynamicsError> {
    orbit.ensure_closed()?;
    let n = orbit.n();
    let vs = window.vertices();
    let mut local = vec![0; vs.len()];
    let mut next = vec![0; vs.len()];
    let mut failures = Vec::new();
    for t in 0..orbit.trajectory().len() {
        let x = orbit.states_at(t);
        for (i, &v) in vs.iter().enumerate() {
            local[i] = x[v];
        }
        step_states(window.subgraph(), n, &local, &mut next, None);
        let global = orbit.states_at(t + 1);
        if vs.iter().zip(&next).any(|(&v, &s)| global[v] != s) {
            failures.push(t);
        }
    }
    Ok(failures)
}

/// Restriction check on a precomputed orbit.
pub fn restriction_on_orbit(
    orbit: &Orbit,
    window: &SubgraphWindow,
    mode: RestrictionMode,
) -> Result<Restriction, DynamicsError> {
    let failures = restriction_failures(orbit, window)?;
    Ok(match mode {
        RestrictionMode::FromStart => {
            let holds = failures.is_empty();
            Restriction { holds, r: holds.then_some(0) }
        }
        RestrictionMode::Eventually => match failures.last() {
            None => Restriction { holds: true, r: Some(0) },
            // periodicity: a failure on the cycle recurs forever
            Some(&last) if last >= orbit.transient() => Restriction { holds: false, r: None },
            Some(&last) => Restriction { holds: true, r: Some(last + 1) },
        },
    })
}

/// Whether the dynamic `(G, x0)` restricts on the window.
pub fn restricts_on(
    g: &Graph,
    x0: &Configuration,
    window: &SubgraphWindow,
    mode: RestrictionMode,
) -> Result<Restriction, DynamicsError> {
    let orbit = compute_orbit(g, x0, None)?;
    restriction_on_orbit(&orbit, window, mode)
}
