//! Graph enumeration: non-isomorphic trees via canonical codes, labeled
//! connected graphs, and seeded random connected graphs.

use std::collections::BTreeMap;

use rand::Rng;

use super::Graph;

/// Canonical code of a tree, identical for isomorphic trees.
///
/// The tree is rooted at its center (or, for bicentral trees, at each of the
/// two centers in turn) and encoded with sorted parenthesis strings; the
/// lexicographically smaller rooting wins.
pub fn canonical_tree_code(t: &Graph) -> String {
    assert!(t.is_tree(), "canonical_tree_code requires a tree");
    centers(t)
        .into_iter()
        .map(|c| rooted_code(t, c, usize::MAX))
        .min()
        .expect("a tree has at least one center")
}

fn rooted_code(t: &Graph, v: usize, parent: usize) -> String {
    let mut children: Vec<String> = t
        .neighbors(v)
        .iter()
        .filter(|&&w| w != parent)
        .map(|&w| rooted_code(t, w, v))
        .collect();
    children.sort_unstable();
    let mut s = String::from("(");
    for c in children {
        s.push_str(&c);
    }
    s.push(')');
    s
}

fn centers(t: &Graph) -> Vec<usize> {
    let n = t.vertex_count();
    if n <= 2 {
        return (0..n).collect();
    }
    let mut degree: Vec<usize> = (0..n).map(|v| t.degree(v)).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &leaf in &layer {
            degree[leaf] = 0;
            for &w in t.neighbors(leaf) {
                if degree[w] > 0 {
                    degree[w] -= 1;
                    if degree[w] == 1 {
                        next.push(w);
                    }
                }
            }
        }
        layer = next;
    }
    layer.sort_unstable();
    layer
}

/// All trees with `1..=max_vertices` vertices up to isomorphism, ordered by
/// size and then by canonical code.
pub fn non_isomorphic_trees(max_vertices: usize) -> Vec<Graph> {
    let mut all = Vec::new();
    if max_vertices == 0 {
        return all;
    }
    let mut current: BTreeMap<String, Graph> = BTreeMap::new();
    let single = Graph::empty(1);
    current.insert(canonical_tree_code(&single), single);
    for size in 1..=max_vertices {
        if size > 1 {
            let mut next = BTreeMap::new();
            for t in current.values() {
                for v in 0..t.vertex_count() {
                    let mut edges = t.edges().to_vec();
                    edges.push((v, t.vertex_count()));
                    let grown = Graph::new(t.vertex_count() + 1, edges).expect("adding a leaf keeps the graph simple");
                    next.entry(canonical_tree_code(&grown)).or_insert(grown);
                }
            }
            current = next;
        }
        all.extend(current.values().cloned());
    }
    all
}

/// Canonical code of an arbitrary small graph: the lexicographically least
/// sorted edge list over all vertex relabelings. Factorial cost; intended
/// for graphs with at most 8 vertices.
pub fn canonical_graph_code(g: &Graph) -> Vec<(usize, usize)> {
    let n = g.vertex_count();
    assert!(n <= 8, "brute-force canonical form limited to 8 vertices");
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<Vec<(usize, usize)>> = None;
    loop {
        let mut edges: Vec<(usize, usize)> = g
            .edges()
            .iter()
            .map(|&(u, v)| (perm[u].min(perm[v]), perm[u].max(perm[v])))
            .collect();
        edges.sort_unstable();
        if best.as_ref().is_none_or(|b| edges < *b) {
            best = Some(edges);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    best.unwrap_or_default()
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("pivot has a successor");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Connected graphs on exactly `vertices` vertices up to isomorphism.
pub fn non_isomorphic_connected_graphs(vertices: usize) -> Vec<Graph> {
    let mut seen = BTreeMap::new();
    for g in connected_graphs(vertices) {
        seen.entry(canonical_graph_code(&g)).or_insert(g);
    }
    seen.into_values().collect()
}

/// Every connected labeled graph on exactly `vertices` vertices, in order of
/// the edge-subset bitmask over the `K_n` edge list.
pub fn connected_graphs(vertices: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..vertices).flat_map(|u| (u + 1..vertices).map(move |v| (u, v))).collect();
    assert!(pairs.len() < 32, "labeled enumeration limited to 7 vertices");
    (0u32..1 << pairs.len())
        .filter_map(|mask| {
            let edges = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e);
            let g = Graph::new(vertices, edges).expect("subset of K_n edges");
            g.is_connected().then_some(g)
        })
        .collect()
}

/// Random connected graph: a uniform random recursive tree on `vertices`
/// vertices plus each remaining pair independently with probability
/// `extra_edge_p`.
pub fn random_connected_graph<R: Rng + ?Sized>(rng: &mut R, vertices: usize, extra_edge_p: f64) -> Graph {
    let mut edges = Vec::new();
    for v in 1..vertices {
        edges.push((rng.random_range(0..v), v));
    }
    for u in 0..vertices {
        for v in u + 1..vertices {
            if !edges.contains(&(u, v)) && rng.random_bool(extra_edge_p) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(vertices, edges).expect("generated edges are simple")
}
