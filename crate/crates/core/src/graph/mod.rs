//! Finite simple undirected graphs over dense `0..n` vertex ids.
//!
//! Graphs are immutable once built; every surgery operation returns a new
//! graph together with the index remapping it applied.

mod io;
mod trees;

pub use io::{parse_edge_list, to_dot, to_edge_list, GraphJson};
pub use trees::{
    canonical_graph_code, canonical_tree_code, connected_graphs, non_isomorphic_connected_graphs, non_isomorphic_trees,
    random_connected_graph,
};

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("vertex {vertex} out of range for a graph with {count} vertices")]
    VertexOutOfRange { vertex: usize, count: usize },
    #[error("invalid size {size} for {family} (minimum {min})")]
    InvalidSize { family: &'static str, size: usize, min: usize },
    #[error("edge list is not a tree: {0}")]
    NotATree(String),
    #[error("unknown graph family `{0}`")]
    UnknownFamily(String),
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("graph is disconnected")]
    Disconnected,
}

/// A finite simple undirected graph.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    // (neighbor, edge index) pairs, aligned with `adjacency`
    incidence: Vec<Vec<(usize, usize)>>,
}

impl Graph {
    /// Builds a graph from an edge list. Edges are normalized to `(min, max)`
    /// and sorted; self-loops and repeated pairs are rejected.
    pub fn new(vertex_count: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        let mut seen = BTreeSet::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w >= vertex_count {
                    return Err(GraphError::VertexOutOfRange { vertex: w, count: vertex_count });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            let e = (u.min(v), u.max(v));
            if !seen.insert(e) {
                return Err(GraphError::DuplicateEdge(e.0, e.1));
            }
        }
        let edges: Vec<(usize, usize)> = seen.into_iter().collect();
        let mut incidence = vec![Vec::new(); vertex_count];
        for (i, &(u, v)) in edges.iter().enumerate() {
            incidence[u].push((v, i));
            incidence[v].push((u, i));
        }
        for list in &mut incidence {
            list.sort_unstable();
        }
        let adjacency = incidence.iter().map(|l| l.iter().map(|&(w, _)| w).collect()).collect();
        Ok(Graph { vertex_count, edges, adjacency, incidence })
    }

    pub fn empty(vertex_count: usize) -> Self {
        Graph::new(vertex_count, []).expect("edgeless graph is always valid")
    }

    pub fn path(m: usize) -> Result<Self, GraphError> {
        Family::Path(m).build()
    }

    pub fn cycle(m: usize) -> Result<Self, GraphError> {
        Family::Cycle(m).build()
    }

    /// `K_{1,k}` with center 0 and leaves `1..=k`.
    pub fn star(k: usize) -> Result<Self, GraphError> {
        Family::Star(k).build()
    }

    pub fn complete(m: usize) -> Result<Self, GraphError> {
        Family::Complete(m).build()
    }

    /// Builds a tree from its edge list, rejecting cycles and disconnection.
    pub fn tree_from_edges(edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let count = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(1);
        let g = Graph::new(count, edges.iter().copied())?;
        if !g.is_connected() {
            return Err(GraphError::NotATree("disconnected".into()));
        }
        if g.edge_count() + 1 != g.vertex_count() {
            return Err(GraphError::NotATree("contains a cycle".into()));
        }
        Ok(g)
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, in sorted order. The position of an
    /// edge in this slice is its edge index.
    #[inline]
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    /// Neighbors of `v` paired with the index of the connecting edge.
    #[inline]
    pub fn incident(&self, v: usize) -> &[(usize, usize)] {
        &self.incidence[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.vertex_count && self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.vertex_count).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count == 0 {
            return true;
        }
        let mut seen = vec![false; self.vertex_count];
        let mut stack = vec![0];
        seen[0] = true;
        let mut reached = 1;
        while let Some(v) = stack.pop() {
            for &w in self.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    stack.push(w);
                }
            }
        }
        reached == self.vertex_count
    }

    pub fn is_tree(&self) -> bool {
        self.vertex_count > 0 && self.is_connected() && self.edge_count() + 1 == self.vertex_count
    }

    pub fn structure(&self) -> Structure {
        Structure {
            is_connected: self.is_connected(),
            is_tree: self.is_tree(),
            max_degree: self.max_degree(),
        }
    }

    pub fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v < self.vertex_count {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange { vertex: v, count: self.vertex_count })
        }
    }

    /// Induced subgraph on `V \ removed`. The returned map sends each old
    /// index to its new index, or `None` if the vertex was removed. Surviving
    /// vertices keep their relative order.
    pub fn delete_vertices(&self, removed: &[usize]) -> Result<(Graph, Vec<Option<usize>>), GraphError> {
        let mut keep = vec![true; self.vertex_count];
        for &v in removed {
            self.check_vertex(v)?;
            keep[v] = false;
        }
        Ok(self.induced_by_mask(&keep))
    }

    /// Induced subgraph on the given vertices (order of `vertices` is
    /// irrelevant; new indices follow ascending old index).
    pub fn induced(&self, vertices: &[usize]) -> Result<(Graph, Vec<Option<usize>>), GraphError> {
        let mut keep = vec![false; self.vertex_count];
        for &v in vertices {
            self.check_vertex(v)?;
            keep[v] = true;
        }
        Ok(self.induced_by_mask(&keep))
    }

    fn induced_by_mask(&self, keep: &[bool]) -> (Graph, Vec<Option<usize>>) {
        let mut map = vec![None; self.vertex_count];
        let mut next = 0;
        for v in 0..self.vertex_count {
            if keep[v] {
                map[v] = Some(next);
                next += 1;
            }
        }
        let edges = self
            .edges
            .iter()
            .filter_map(|&(u, v)| Some((map[u]?, map[v]?)));
        let g = Graph::new(next, edges).expect("induced subgraph of a simple graph is simple");
        (g, map)
    }

    /// Every maximal k-star: a center together with all of its degree-1
    /// neighbors. `root` is set when the center has exactly one neighbor
    /// that is not one of those leaves.
    pub fn find_stars_and_branches(&self) -> Vec<Star> {
        let mut stars = Vec::new();
        for c in 0..self.vertex_count {
            let leaves: Vec<usize> = self.neighbors(c).iter().copied().filter(|&u| self.degree(u) == 1).collect();
            if leaves.is_empty() {
                continue;
            }
            // K2: both endpoints qualify as centers of the same star; keep one.
            if self.degree(c) == 1 && leaves[0] < c {
                continue;
            }
            let others: Vec<usize> = self.neighbors(c).iter().copied().filter(|&u| self.degree(u) != 1).collect();
            let root = if others.len() == 1 { Some(others[0]) } else { None };
            stars.push(Star { center: c, leaves, root });
        }
        stars
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("vertices", &self.vertex_count)
            .field("edges", &self.edges)
            .finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct Structure {
    pub is_connected: bool,
    pub is_tree: bool,
    pub max_degree: usize,
}

/// A k-star inside an ambient graph; a branch when `root` is present.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Star {
    pub center: usize,
    pub leaves: Vec<usize>,
    pub root: Option<usize>,
}

impl Star {
    pub fn is_branch(&self) -> bool {
        self.root.is_some()
    }

    /// Center followed by the leaves.
    pub fn vertices(&self) -> Vec<usize> {
        let mut vs = Vec::with_capacity(self.leaves.len() + 1);
        vs.push(self.center);
        vs.extend_from_slice(&self.leaves);
        vs
    }

    /// Checks the star against the ambient graph: leaves are nonempty,
    /// adjacent to the center and of degree 1; a root, if any, is the only
    /// neighbor of the center outside the star.
    pub fn validate(&self, g: &Graph) -> Result<(), String> {
        g.check_vertex(self.center).map_err(|e| e.to_string())?;
        if self.leaves.is_empty() {
            return Err("star has no leaves".into());
        }
        for &l in &self.leaves {
            g.check_vertex(l).map_err(|e| e.to_string())?;
            if !g.has_edge(self.center, l) {
                return Err(format!("leaf {l} is not adjacent to center {}", self.center));
            }
            if g.degree(l) != 1 {
                return Err(format!("leaf {l} has degree {}", g.degree(l)));
            }
        }
        if let Some(root) = self.root {
            let outside: Vec<usize> = g
                .neighbors(self.center)
                .iter()
                .copied()
                .filter(|u| !self.leaves.contains(u))
                .collect();
            if outside != [root] {
                return Err(format!("center's neighbors outside the star are {outside:?}, not [{root}]"));
            }
        }
        Ok(())
    }
}

/// Named graph families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    Path(usize),
    Cycle(usize),
    Star(usize),
    Complete(usize),
    TreeFromEdges(Vec<(usize, usize)>),
}

impl Family {
    pub fn build(&self) -> Result<Graph, GraphError> {
        match *self {
            Family::Path(m) => {
                require("path", m, 1)?;
                Graph::new(m, (1..m).map(|i| (i - 1, i)))
            }
            Family::Cycle(m) => {
                require("cycle", m, 3)?;
                Graph::new(m, (0..m).map(|i| (i, (i + 1) % m)))
            }
            Family::Star(k) => {
                require("star", k, 1)?;
                Graph::new(k + 1, (1..=k).map(|i| (0, i)))
            }
            Family::Complete(m) => {
                require("complete", m, 1)?;
                Graph::new(m, (0..m).flat_map(|u| (u + 1..m).map(move |v| (u, v))))
            }
            Family::TreeFromEdges(ref edges) => Graph::tree_from_edges(edges),
        }
    }
}

fn require(family: &'static str, size: usize, min: usize) -> Result<(), GraphError> {
    if size < min {
        Err(GraphError::InvalidSize { family, size, min })
    } else {
        Ok(())
    }
}

impl FromStr for Family {
    type Err = GraphError;

    /// Parses `path:5`, `cycle:4`, `star:3`, `complete:3` (alias `k:3`) or
    /// `tree:0-1,1-2,1-3`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, arg) = s.split_once(':').ok_or_else(|| GraphError::UnknownFamily(s.to_string()))?;
        let size = || {
            arg.trim().parse::<usize>().map_err(|e| GraphError::Parse { line: 0, message: format!("{s}: {e}") })
        };
        match name.trim().to_ascii_lowercase().as_str() {
            "path" => Ok(Family::Path(size()?)),
            "cycle" => Ok(Family::Cycle(size()?)),
            "star" => Ok(Family::Star(size()?)),
            "complete" | "k" => Ok(Family::Complete(size()?)),
            "tree" => {
                let mut edges = Vec::new();
                for pair in arg.split(',').filter(|p| !p.trim().is_empty()) {
                    let (u, v) = pair.split_once('-').ok_or_else(|| GraphError::Parse {
                        line: 0,
                        message: format!("expected `u-v`, got `{pair}`"),
                    })?;
                    let parse = |t: &str| {
                        t.trim().parse::<usize>().map_err(|e| GraphError::Parse { line: 0, message: e.to_string() })
                    };
                    edges.push((parse(u)?, parse(v)?));
                }
                Ok(Family::TreeFromEdges(edges))
            }
            other => Err(GraphError::UnknownFamily(other.to_string())),
        }
    }
}
