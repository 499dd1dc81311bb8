use serde::Serialize;

use crate::dynamics::{compute_orbit, Configuration};
use crate::graph::{Graph, GraphJson};

use super::AnalysisError;

/// Path decomposition induced by a two-state configuration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Quotient {
    pub path: GraphJson,
    /// Path index of every vertex of the original graph.
    pub class_of: Vec<usize>,
    /// Members of each class, in path order `A_k .. A_0, B_0 .. B_l`.
    pub classes: Vec<Vec<usize>>,
    pub path_config: Configuration,
}

impl Quotient {
    pub fn graph(&self) -> Graph {
        Graph::try_from(self.path.clone()).expect("quotient path is valid")
    }

    /// Lifts a path configuration back to the original vertices.
    pub fn lift(&self, states: &[u32]) -> Vec<u32> {
        self.class_of.iter().map(|&c| states[c]).collect()
    }
}

/// Layers of `side` vertices by distance to the other side.
fn layers(g: &Graph, x: &[u32], side: u32) -> Vec<Vec<usize>> {
    let mut placed = vec![false; g.vertex_count()];
    let mut current: Vec<usize> = (0..g.vertex_count())
        .filter(|&v| x[v] == side && g.neighbors(v).iter().any(|&u| x[u] != side))
        .collect();
    let mut out = Vec::new();
    while !current.is_empty() {
        for &v in &current {
            placed[v] = true;
        }
        let mut next: Vec<usize> = current
            .iter()
            .flat_map(|&v| g.neighbors(v).iter().copied())
            .filter(|&u| x[u] == side && !placed[u])
            .collect();
        next.sort_unstable();
        next.dedup();
        out.push(std::mem::replace(&mut current, next));
    }
    out
}

pub fn two_state_quotient(g: &Graph, x0: &Configuration) -> Result<Quotient, AnalysisError> {
    if !g.is_connected() {
        return Err(AnalysisError::Disconnected);
    }
    let mut states = x0.states().to_vec();
    states.sort_unstable();
    states.dedup();
    let [a, b] = states[..] else {
        return Err(AnalysisError::NotTwoStates(states.len()));
    };
    let x = x0.states();
    let mut classes: Vec<Vec<usize>> = layers(g, x, a).into_iter().rev().collect();
    classes.extend(layers(g, x, b));
    let mut class_of = vec![usize::MAX; g.vertex_count()];
    for (i, c) in classes.iter().enumerate() {
        for &v in c {
            class_of[v] = i;
        }
    }
    debug_assert!(class_of.iter().all(|&c| c != usize::MAX), "connected graph leaves no vertex unplaced");
    for &(u, v) in g.edges() {
        let (cu, cv) = (class_of[u], class_of[v]);
        if cu.abs_diff(cv) > 1 {
            return Err(AnalysisError::ClassAdjacency { u, v, class_u: cu, class_v: cv });
        }
    }
    let path = Graph::path(classes.len())?;
    let path_states = classes.iter().map(|c| x[c[0]]).collect();
    Ok(Quotient {
        path: GraphJson::from(&path),
        class_of,
        classes,
        path_config: Configuration::new(x0.n(), path_states)?,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuotientCheck {
    pub quotient: Quotient,
    pub steps_compared: usize,
    /// First `t` where the lifted path state differs from the full state.
    pub first_mismatch: Option<usize>,
    pub sync_time: Option<usize>,
    pub quotient_sync_time: Option<usize>,
}

/// Simulates the graph and its quotient path side by side until both have
/// closed their cycles.
pub fn compare_quotient_dynamics(g: &Graph, x0: &Configuration) -> Result<QuotientCheck, AnalysisError> {
    let q = two_state_quotient(g, x0)?;
    let path = q.graph();
    let full = compute_orbit(g, x0, None)?;
    full.ensure_closed()?;
    let small = compute_orbit(&path, &q.path_config, None)?;
    small.ensure_closed()?;
    let steps = full.trajectory().len().max(small.trajectory().len()) + 1;
    let first_mismatch = (0..steps).find(|&t| q.lift(small.states_at(t)) != full.states_at(t));
    Ok(QuotientCheck {
        sync_time: full.sync_time(),
        quotient_sync_time: small.sync_time(),
        quotient: q,
        steps_compared: steps,
        first_mismatch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::random_connected_graph;
    use rand::{Rng, SeedableRng};

    #[test]
    fn star_collapses_to_edge() {
        let g = Graph::star(2).unwrap();
        let x = Configuration::new(6, vec![5, 2, 2]).unwrap();
        let q = two_state_quotient(&g, &x).unwrap();
        assert_eq!(q.path.vertices, 2);
        assert_eq!(q.path_config.states(), &[2, 5]);
        assert_eq!(q.class_of, vec![1, 0, 0]);
    }

    #[test]
    fn layers_on_path() {
        let g = Graph::path(5).unwrap();
        let x = Configuration::new(6, vec![2, 2, 2, 5, 5]).unwrap();
        let q = two_state_quotient(&g, &x).unwrap();
        assert_eq!(q.classes, vec![vec![0], vec![1], vec![2], vec![3], vec![4]]);
        let c = compare_quotient_dynamics(&g, &x).unwrap();
        assert_eq!(c.first_mismatch, None);
        assert!(c.sync_time.is_some());
    }

    #[test]
    fn joining_oscillator() {
        let g = Graph::cycle(5).unwrap();
        let x = Configuration::new(6, vec![1, 1, 4, 1, 1]).unwrap();
        let q = two_state_quotient(&g, &x).unwrap();
        assert_eq!(q.classes.len(), 3);
        let x = Configuration::new(6, vec![0, 3, 3, 3, 3]).unwrap();
        let g = Graph::star(4).unwrap();
        assert_eq!(two_state_quotient(&g, &x).unwrap().path.vertices, 2);
    }

    #[test]
    fn rejects_wrong_state_count() {
        let g = Graph::path(3).unwrap();
        assert_eq!(
            two_state_quotient(&g, &Configuration::new(4, vec![0, 1, 2]).unwrap()),
            Err(AnalysisError::NotTwoStates(3))
        );
        assert_eq!(
            two_state_quotient(&g, &Configuration::constant(4, 3, 1).unwrap()),
            Err(AnalysisError::NotTwoStates(1))
        );
    }

    #[test]
    fn random_two_state_configurations_match() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let v = rng.random_range(2..=7);
            let g = random_connected_graph(&mut rng, v, 0.3);
            let n = rng.random_range(3..=8);
            let a = rng.random_range(0..n);
            let b = (a + rng.random_range(1..n)) % n;
            let mut states: Vec<u32> = (0..v).map(|_| if rng.random_bool(0.5) { a } else { b }).collect();
            states[0] = a;
            states[1] = b;
            let x = Configuration::new(n, states).unwrap();
            let c = compare_quotient_dynamics(&g, &x).unwrap();
            assert_eq!(c.first_mismatch, None, "{g:?} {x}");
            assert!(c.sync_time.is_some());
        }
    }
}
