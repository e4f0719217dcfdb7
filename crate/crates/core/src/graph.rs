//! Simple undirected graphs over vertices `0..n` and the PACE `.gr` format.
//!
//! Vertex ids double as the global vertex order: every bag and every
//! partition encoding in this crate lists vertices in ascending id order.

use std::collections::HashSet;
use std::fmt::Write as _;

use thiserror::Error;

/// Vertex identifier; also its position in the global order.
pub type Vertex = usize;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("vertex {0} out of range")]
    VertexOutOfRange(Vertex),
    #[error("self-loop on vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(Vertex, Vertex),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
    m: usize,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            m: 0,
        }
    }

    /// Builds a graph from an edge list, rejecting loops and parallel edges.
    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self, GraphError> {
        let mut g = Graph::new(n);
        let mut seen = HashSet::with_capacity(edges.len());
        for &(u, v) in edges {
            if u >= n {
                return Err(GraphError::VertexOutOfRange(u));
            }
            if v >= n {
                return Err(GraphError::VertexOutOfRange(v));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
            }
            g.adj[u].push(v);
            g.adj[v].push(u);
            g.m += 1;
        }
        for list in &mut g.adj {
            list.sort_unstable();
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// All edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::with_capacity(self.m);
        for (u, list) in self.adj.iter().enumerate() {
            out.extend(list.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }

    /// Edges of `g` with both endpoints in `vs`, as `(u, v)` with `u < v`.
    pub fn induced_edges(&self, vs: &[Vertex]) -> Result<Vec<(Vertex, Vertex)>, GraphError> {
        let mut sorted = vs.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if let Some(&bad) = sorted.iter().find(|&&v| v >= self.n()) {
            return Err(GraphError::VertexOutOfRange(bad));
        }
        let mut out = Vec::new();
        for &u in &sorted {
            for &v in &self.adj[u] {
                if v > u && sorted.binary_search(&v).is_ok() {
                    out.push((u, v));
                }
            }
        }
        Ok(out)
    }

    /// Connected components, each sorted ascending, listed by minimum vertex.
    pub fn connected_components(&self) -> Vec<Vec<Vertex>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut comps = Vec::new();
        let mut stack = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            stack.push(s);
            let mut comp = Vec::new();
            while let Some(u) = stack.pop() {
                comp.push(u);
                for &v in &self.adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    /// Subgraph induced by the sorted vertex list `vs`, relabeled to `0..vs.len()`
    /// in the same relative order.
    pub fn induced_subgraph(&self, vs: &[Vertex]) -> Graph {
        let mut g = Graph::new(vs.len());
        for (i, &u) in vs.iter().enumerate() {
            for &v in &self.adj[u] {
                if let Ok(j) = vs.binary_search(&v) {
                    g.adj[i].push(j);
                    if j > i {
                        g.m += 1;
                    }
                }
            }
        }
        g
    }

    /// Parses a PACE `.gr` document (1-indexed on input, 0-indexed in memory).
    pub fn parse_pace(text: &str) -> Result<Self, GraphError> {
        let mut header: Option<(usize, usize)> = None;
        let mut edges = Vec::new();
        let mut seen = HashSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('c') {
                continue;
            }
            let perr = |msg: &str| GraphError::Parse {
                line,
                msg: msg.to_string(),
            };
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            match header {
                None => {
                    if fields.len() != 4 || fields[0] != "p" || fields[1] != "tw" {
                        return Err(perr("expected header `p tw <n> <m>`"));
                    }
                    let n = fields[2].parse().map_err(|_| perr("bad vertex count"))?;
                    let m = fields[3].parse().map_err(|_| perr("bad edge count"))?;
                    header = Some((n, m));
                }
                Some((n, _)) => {
                    if fields.len() != 2 {
                        return Err(perr("expected edge line `<u> <v>`"));
                    }
                    let u: usize = fields[0].parse().map_err(|_| perr("bad vertex id"))?;
                    let v: usize = fields[1].parse().map_err(|_| perr("bad vertex id"))?;
                    if u == 0 || v == 0 || u > n || v > n {
                        return Err(perr("vertex id out of range"));
                    }
                    if u == v {
                        return Err(perr("self-loop"));
                    }
                    let key = (u.min(v) - 1, u.max(v) - 1);
                    if !seen.insert(key) {
                        return Err(perr("duplicate edge"));
                    }
                    edges.push(key);
                }
            }
        }
        let (n, m) = header.ok_or(GraphError::Parse {
            line: 0,
            msg: "missing header".into(),
        })?;
        if edges.len() != m {
            return Err(GraphError::Parse {
                line: 0,
                msg: format!("header declares {m} edges, found {}", edges.len()),
            });
        }
        Graph::from_edges(n, &edges)
    }

    pub fn to_pace(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "p tw {} {}", self.n(), self.m());
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{} {}", u + 1, v + 1);
        }
        out
    }
}
