//! Graph construction, shift operators, and Cartesian products.
//!
//! Graphs are immutable after construction. Undirected graphs store each edge
//! once with implied symmetry; the directed flag exists for the cyclic shift
//! graph only.

use std::io::BufRead;
use std::path::Path;

use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;

/// Weighted edge `u -> v` (or `{u, v}` when the graph is undirected).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

/// Which shift operator spans the graph frequency basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShiftKind {
    Adjacency,
    Laplacian,
    /// Circulant delay matrix; valid only for the directed cycle.
    CyclicShift,
}

/// A simple finite weighted graph.
#[derive(Debug, Clone)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    directed: bool,
}

/// Output of [`Graph::random_geometric`]: the graph plus placement metadata.
#[derive(Debug, Clone)]
pub struct RandomGeometric {
    pub graph: Graph,
    pub connected: bool,
    pub points: Vec<(f64, f64)>,
}

impl Graph {
    /// Validates indices, self-loops, duplicates, and weight finiteness.
    pub fn new(n: usize, edges: Vec<Edge>, directed: bool) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph(
                "graph needs at least one vertex".into(),
            ));
        }
        let mut seen = std::collections::HashSet::new();
        for e in &edges {
            if e.u >= n || e.v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({}, {}) out of range for {n} vertices",
                    e.u, e.v
                )));
            }
            if e.u == e.v {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {}", e.u)));
            }
            if !e.w.is_finite() {
                return Err(Error::InvalidGraph(format!(
                    "non-finite weight on edge ({}, {})",
                    e.u, e.v
                )));
            }
            let key = if directed {
                (e.u, e.v)
            } else {
                (e.u.min(e.v), e.u.max(e.v))
            };
            if !seen.insert(key) {
                return Err(Error::InvalidGraph(format!(
                    "duplicate edge ({}, {})",
                    e.u, e.v
                )));
            }
        }
        Ok(Graph { n, edges, directed })
    }

    /// Path graph with unit-weight edges `(i, i+1)`.
    pub fn path(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidGraph("path graph needs n >= 2".into()));
        }
        let edges = (0..n - 1)
            .map(|i| Edge {
                u: i,
                v: i + 1,
                w: 1.0,
            })
            .collect();
        Graph::new(n, edges, false)
    }

    /// Cycle graph with unit-weight edges `(i, (i+1) mod n)`.
    pub fn cycle(n: usize, directed: bool) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidGraph("cycle graph needs n >= 3".into()));
        }
        let edges = (0..n)
            .map(|i| Edge {
                u: i,
                v: (i + 1) % n,
                w: 1.0,
            })
            .collect();
        Graph::new(n, edges, directed)
    }

    /// Cartesian product. Vertex `(u, v)` maps to flat index `u * n2 + v`;
    /// edges connect equal-`v` pairs along `self` and equal-`u` pairs along
    /// `other`, keeping the originating weights.
    pub fn cartesian_product(&self, other: &Graph) -> Result<Self> {
        if self.directed || other.directed {
            return Err(Error::InvalidGraph(
                "cartesian product requires undirected factors".into(),
            ));
        }
        let n2 = other.n;
        let mut edges = Vec::with_capacity(self.edges.len() * n2 + other.edges.len() * self.n);
        for e in &self.edges {
            for v in 0..n2 {
                edges.push(Edge {
                    u: e.u * n2 + v,
                    v: e.v * n2 + v,
                    w: e.w,
                });
            }
        }
        for u in 0..self.n {
            for e in &other.edges {
                edges.push(Edge {
                    u: u * n2 + e.u,
                    v: u * n2 + e.v,
                    w: e.w,
                });
            }
        }
        Graph::new(self.n * n2, edges, false)
    }

    /// Random geometric graph: `n` seeded uniform points in the unit square,
    /// unit-weight edge when the Euclidean distance is below `radius`.
    /// Deterministic for a fixed seed; a disconnected result is reported in
    /// the metadata rather than rejected.
    pub fn random_geometric(n: usize, radius: f64, seed: u64) -> Result<RandomGeometric> {
        if n < 2 {
            return Err(Error::InvalidGraph(
                "random geometric graph needs n >= 2".into(),
            ));
        }
        if !(radius > 0.0 && radius <= 2.0f64.sqrt()) {
            return Err(Error::InvalidGraph(
                "radius must lie in (0, sqrt(2)]".into(),
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let points: Vec<(f64, f64)> = (0..n)
            .map(|_| (rng.gen::<f64>(), rng.gen::<f64>()))
            .collect();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let dx = points[i].0 - points[j].0;
                let dy = points[i].1 - points[j].1;
                if (dx * dx + dy * dy).sqrt() < radius {
                    edges.push(Edge { u: i, v: j, w: 1.0 });
                }
            }
        }
        let graph = Graph::new(n, edges, false)?;
        let connected = graph.is_connected();
        Ok(RandomGeometric {
            graph,
            connected,
            points,
        })
    }

    /// Parse an undirected graph from CSV rows `u,v,w` (0-based indices, an
    /// optional header detected by a non-numeric first field). The vertex
    /// count is the maximum index plus one.
    pub fn from_edge_list(path: impl AsRef<Path>) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Graph::from_edge_list_reader(std::io::BufReader::new(file))
    }

    pub fn from_edge_list_reader(reader: impl BufRead) -> Result<Self> {
        let mut edges: Vec<Edge> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        let mut max_index = 0usize;
        for (idx, line) in reader.lines().enumerate() {
            let line_no = idx + 1;
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            let fields: Vec<&str> = trimmed.split(',').map(str::trim).collect();
            if idx == 0 && fields[0].parse::<usize>().is_err() {
                continue; // header row
            }
            if fields.len() != 3 {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("expected 3 fields, got {}", fields.len()),
                });
            }
            let u: usize = fields[0].parse().map_err(|e| Error::Parse {
                line: line_no,
                msg: format!("bad source index: {e}"),
            })?;
            let v: usize = fields[1].parse().map_err(|e| Error::Parse {
                line: line_no,
                msg: format!("bad target index: {e}"),
            })?;
            let w: f64 = fields[2].parse().map_err(|e| Error::Parse {
                line: line_no,
                msg: format!("bad weight: {e}"),
            })?;
            if !w.is_finite() {
                return Err(Error::Parse {
                    line: line_no,
                    msg: "non-finite weight".into(),
                });
            }
            if w < 0.0 {
                return Err(Error::NegativeWeight { line: line_no });
            }
            if u == v {
                return Err(Error::Parse {
                    line: line_no,
                    msg: "self-loop".into(),
                });
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::DuplicateEdge { line: line_no });
            }
            max_index = max_index.max(u).max(v);
            edges.push(Edge { u, v, w });
        }
        if edges.is_empty() {
            return Err(Error::Parse {
                line: 0,
                msg: "edge list is empty".into(),
            });
        }
        Graph::new(max_index + 1, edges, false)
    }

    /// Edge-list CSV rows `u,v,w`, one per stored edge.
    pub fn to_edge_list_string(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        for e in &self.edges {
            writeln!(out, "{},{},{}", e.u, e.v, crate::io::fmt_f64(e.w)).unwrap();
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn directed(&self) -> bool {
        self.directed
    }

    /// Shift matrix for the requested kind.
    ///
    /// Adjacency of an undirected graph is symmetric; a directed edge
    /// `u -> v` enters row `v`. The Laplacian is `diag(degree) - A`
    /// (undirected only). The cyclic shift is the circulant delay matrix of
    /// the directed cycle.
    pub fn shift_matrix(&self, kind: ShiftKind) -> Result<CMatrix> {
        match kind {
            ShiftKind::Adjacency => Ok(self.adjacency()),
            ShiftKind::Laplacian => {
                if self.directed {
                    return Err(Error::InvalidGraph(
                        "laplacian shift requires an undirected graph".into(),
                    ));
                }
                let a = self.adjacency();
                let mut l = -a.clone();
                for i in 0..self.n {
                    let degree: Complex64 = a.row(i).iter().sum();
                    l[(i, i)] = degree;
                }
                Ok(l)
            }
            ShiftKind::CyclicShift => {
                if !self.is_directed_cycle() {
                    return Err(Error::InvalidGraph(
                        "cyclic shift requires the directed cycle graph".into(),
                    ));
                }
                Ok(self.adjacency())
            }
        }
    }

    fn adjacency(&self) -> CMatrix {
        let mut a = CMatrix::zeros(self.n, self.n);
        for e in &self.edges {
            let w = Complex64::new(e.w, 0.0);
            a[(e.v, e.u)] += w;
            if !self.directed {
                a[(e.u, e.v)] += w;
            }
        }
        a
    }

    fn is_directed_cycle(&self) -> bool {
        if !self.directed || self.edges.len() != self.n || self.n < 3 {
            return false;
        }
        let mut next = vec![None; self.n];
        for e in &self.edges {
            if next[e.u].is_some() {
                return false;
            }
            next[e.u] = Some(e.v);
        }
        (0..self.n).all(|u| next[u] == Some((u + 1) % self.n))
    }

    /// Connectivity over the undirected support of the edge set.
    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return false;
        }
        let mut adj = vec![Vec::new(); self.n];
        for e in &self.edges {
            adj[e.u].push(e.v);
            adj[e.v].push(e.u);
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == self.n
    }
}
