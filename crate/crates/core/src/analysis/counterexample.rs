use serde::Serialize;

use crate::dynamics::{compute_orbit, ConfigSpace, Configuration, Orbit};
use crate::graph::{Graph, GraphJson};

use super::sweep::sweep_orbits;
use super::AnalysisError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CounterexampleKind {
    HighDegreeTree,
    K3ThreeStates,
    N7StarSearch,
}

/// A non-synchronizing instance together with the orbit facts that make it
/// one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub kind: CounterexampleKind,
    #[serde(serialize_with = "as_graph_json")]
    pub graph: Graph,
    pub configuration: Configuration,
    pub transient: usize,
    pub period: usize,
    pub sync_time: Option<usize>,
    pub all_blink_in_cycle: bool,
    /// The high-degree vertex, for the tree construction.
    pub center: Option<usize>,
    pub center_blinks_in_cycle: Option<bool>,
    /// Configurations examined by a search.
    pub searched: Option<u64>,
}

fn as_graph_json<S: serde::Serializer>(g: &Graph, s: S) -> Result<S::Ok, S::Error> {
    GraphJson::from(g).serialize(s)
}

fn describe(
    kind: CounterexampleKind,
    graph: Graph,
    configuration: Configuration,
    orbit: &Orbit,
    center: Option<usize>,
) -> Result<Counterexample, AnalysisError> {
    orbit.ensure_closed()?;
    Ok(Counterexample {
        kind,
        configuration,
        transient: orbit.transient(),
        period: orbit.period(),
        sync_time: orbit.sync_time(),
        all_blink_in_cycle: orbit.all_blink_infinitely()?,
        center_blinks_in_cycle: center.map(|c| orbit.blinks_infinitely(c)).transpose()?,
        center,
        searched: None,
        graph,
    })
}

/// Connected components of `tree - v`, ordered by least vertex.
fn components_without(tree: &Graph, v: usize) -> Vec<Vec<usize>> {
    let mut comp = vec![usize::MAX; tree.vertex_count()];
    let mut out = Vec::new();
    for s in 0..tree.vertex_count() {
        if s == v || comp[s] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut stack = vec![s];
        let mut members = Vec::new();
        comp[s] = id;
        while let Some(u) = stack.pop() {
            members.push(u);
            for &w in tree.neighbors(u) {
                if w != v && comp[w] == usize::MAX {
                    comp[w] = id;
                    stack.push(w);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

/// Tree with a vertex `v` of degree at least `n`: the `i`-th component of
/// `T - v` gets state `i mod n` and `v` the least state above `n/2`, which
/// keeps `v` pulled forever.
pub fn high_degree_tree(tree: &Graph, n: u32) -> Result<Counterexample, AnalysisError> {
    if !tree.is_tree() {
        return Err(AnalysisError::NotATree);
    }
    let v = (0..tree.vertex_count())
        .find(|&u| tree.degree(u) >= n as usize)
        .ok_or(AnalysisError::NoHighDegreeVertex(n))?;
    let mut states = vec![0; tree.vertex_count()];
    for (i, comp) in components_without(tree, v).iter().enumerate() {
        for &u in comp {
            states[u] = i as u32 % n;
        }
    }
    states[v] = n / 2 + 1;
    let x0 = Configuration::new(n, states)?;
    let orbit = compute_orbit(tree, &x0, None)?;
    let ce = describe(CounterexampleKind::HighDegreeTree, tree.clone(), x0, &orbit, Some(v))?;
    if ce.sync_time.is_some() || ce.center_blinks_in_cycle == Some(true) {
        return Err(AnalysisError::Falsified(format!(
            "configuration {} synchronizes or lets vertex {v} blink",
            ce.configuration
        )));
    }
    Ok(ce)
}

/// `K_3` with states `0, q, 2q` at period `2q + 1`.
pub fn k3_three_states(q: u32) -> Result<Counterexample, AnalysisError> {
    if q < 2 {
        return Err(AnalysisError::InvalidParameter(format!("q must be at least 2, got {q}")));
    }
    let g = Graph::complete(3)?;
    let x0 = Configuration::new(2 * q + 1, vec![0, q, 2 * q])?;
    let orbit = compute_orbit(&g, &x0, None)?;
    let ce = describe(CounterexampleKind::K3ThreeStates, g, x0, &orbit, None)?;
    if ce.sync_time.is_some() {
        return Err(AnalysisError::Falsified(format!("K3 from {} synchronizes", ce.configuration)));
    }
    Ok(ce)
}

/// Least configuration on `star(4)` at period 7 whose orbit lets every
/// vertex blink in the limit cycle without synchronizing.
pub fn n7_star_search() -> Result<Counterexample, AnalysisError> {
    let g = Graph::star(4)?;
    let n = 7;
    let (searched, witness) = sweep_orbits(
        &g,
        n,
        7u64.pow(5),
        |i, orbit| {
            let hit = !orbit.synchronizes() && orbit.all_blink_infinitely().expect("closed orbit");
            (1u64, hit.then_some(i))
        },
        |a, b| {
            let w = match (a.1, b.1) {
                (Some(x), Some(y)) => Some(x.min(y)),
                (x, y) => x.or(y),
            };
            (a.0 + b.0, w)
        },
    )?;
    let Some(i) = witness else {
        return Err(AnalysisError::Falsified(
            "no configuration on star(4) at period 7 blinks everywhere without synchronizing".into(),
        ));
    };
    let x0 = ConfigSpace::new(n, 5)?.nth(i);
    let orbit = compute_orbit(&g, &x0, None)?;
    let mut ce = describe(CounterexampleKind::N7StarSearch, g, x0, &orbit, Some(0))?;
    ce.searched = Some(searched);
    Ok(ce)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star6_construction() {
        let ce = high_degree_tree(&Graph::star(6).unwrap(), 6).unwrap();
        assert_eq!(ce.configuration.states(), &[4, 0, 1, 2, 3, 4, 5]);
        assert_eq!(ce.sync_time, None);
        assert_eq!(ce.center, Some(0));
        assert_eq!(ce.center_blinks_in_cycle, Some(false));
    }

    #[test]
    fn construction_on_larger_tree() {
        // vertex 2 has degree 4; its components carry a path of length 2
        let t = Graph::tree_from_edges(&[(0, 1), (1, 2), (2, 3), (2, 4), (2, 5), (5, 6)]).unwrap();
        let ce = high_degree_tree(&t, 4).unwrap();
        assert_eq!(ce.center, Some(2));
        assert_eq!(ce.configuration.states(), &[0, 0, 3, 1, 2, 3, 3]);
        assert!(matches!(high_degree_tree(&Graph::path(5).unwrap(), 3), Err(AnalysisError::NoHighDegreeVertex(3))));
        assert!(matches!(high_degree_tree(&Graph::cycle(4).unwrap(), 3), Err(AnalysisError::NotATree)));
    }

    #[test]
    fn k3_family() {
        for q in 2..=4 {
            let ce = k3_three_states(q).unwrap();
            assert_eq!(ce.sync_time, None);
        }
        assert_eq!(k3_three_states(2).unwrap().period, 6);
        assert!(k3_three_states(1).is_err());
    }

    #[test]
    fn n7_witness() {
        let ce = n7_star_search().unwrap();
        assert_eq!(ce.searched, Some(16807));
        assert!(ce.all_blink_in_cycle);
        assert_eq!(ce.sync_time, None);
    }
}
