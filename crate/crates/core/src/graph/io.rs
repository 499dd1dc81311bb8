use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{Graph, GraphError};

/// JSON graph format: `{"vertices": int, "edges": [[u, v], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: usize,
    pub edges: Vec<[usize; 2]>,
}

impl From<&Graph> for GraphJson {
    fn from(g: &Graph) -> Self {
        GraphJson {
            vertices: g.vertex_count(),
            edges: g.edges().iter().map(|&(u, v)| [u, v]).collect(),
        }
    }
}

impl TryFrom<GraphJson> for Graph {
    type Error = GraphError;

    fn try_from(j: GraphJson) -> Result<Self, Self::Error> {
        Graph::new(j.vertices, j.edges.into_iter().map(|[u, v]| (u, v)))
    }
}

/// Parses the edge-list text format: one `u v` pair per line, blank lines
/// and `#` comments ignored. The vertex count is `1 + max index` unless a
/// header line `n <count>` is present.
pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut declared = None;
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let bad = |message: String| GraphError::Parse { line: line_no, message };
        if fields[0] == "n" {
            if fields.len() != 2 || declared.is_some() {
                return Err(bad("malformed or repeated `n <count>` header".into()));
            }
            declared = Some(fields[1].parse::<usize>().map_err(|e| bad(e.to_string()))?);
            continue;
        }
        if fields.len() != 2 {
            return Err(bad(format!("expected `u v`, got `{line}`")));
        }
        let u = fields[0].parse::<usize>().map_err(|e| bad(e.to_string()))?;
        let v = fields[1].parse::<usize>().map_err(|e| bad(e.to_string()))?;
        edges.push((u, v));
    }
    let inferred = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
    Graph::new(declared.unwrap_or(inferred), edges)
}

/// Edge-list text with an explicit `n` header, so isolated vertices survive
/// a round trip.
pub fn to_edge_list(g: &Graph) -> String {
    let mut out = format!("n {}\n", g.vertex_count());
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

/// Undirected DOT. When `labels` is given, vertex `v` is labelled
/// `"v: labels[v]"`, otherwise with its index.
pub fn to_dot(g: &Graph, name: &str, labels: Option<&[String]>) -> String {
    let mut out = format!("graph {name} {{\n");
    for v in 0..g.vertex_count() {
        match labels {
            Some(l) => {
                let _ = writeln!(out, "  {v} [label=\"{v}: {}\"];", l[v]);
            }
            None => {
                let _ = writeln!(out, "  {v} [label=\"{v}\"];");
            }
        }
    }
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "  {u} -- {v};");
    }
    out.push_str("}\n");
    out
}
