//! Weighted simple graphs and the symmetric matrices they generate.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which matrix of a graph drives the walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MatrixKind {
    Adjacency,
    Laplacian,
}

impl MatrixKind {
    pub fn short_name(self) -> &'static str {
        match self {
            MatrixKind::Adjacency => "A",
            MatrixKind::Laplacian => "L",
        }
    }
}

impl fmt::Display for MatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for MatrixKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a" | "adj" | "adjacency" => Ok(MatrixKind::Adjacency),
            "l" | "lap" | "laplacian" => Ok(MatrixKind::Laplacian),
            _ => Err(Error::BadParam(format!("unknown matrix kind `{s}`"))),
        }
    }
}

/// An undirected edge with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

/// A simple undirected graph with nonzero real edge weights.
///
/// Edges are kept sorted by `(u, v)` with `u < v`; the constructor rejects
/// loops, duplicates, out-of-range endpoints and zero or non-finite weights.
/// A graph may carry a designated vertex pair, used by the named families
/// whose transfer happens between two specific vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<Edge>,
    label: Option<String>,
    pair: Option<(usize, usize)>,
}

impl WeightedGraph {
    pub fn new<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        if n == 0 {
            return Err(Error::InvalidGraph(
                "graph must have at least one vertex".into(),
            ));
        }
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for (a, b, w) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({a}, {b}) out of range for {n} vertices"
                )));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {a}")));
            }
            if !w.is_finite() || w == 0.0 {
                return Err(Error::InvalidGraph(format!(
                    "edge ({a}, {b}) has invalid weight {w}"
                )));
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            if !seen.insert((u, v)) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({u}, {v})")));
            }
            out.push(Edge { u, v, w });
        }
        out.sort_by_key(|e| (e.u, e.v));
        Ok(WeightedGraph {
            n,
            edges: out,
            label: None,
            pair: None,
        })
    }

    /// Unit-weight graph from an edge list.
    pub fn unweighted<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Self::new(n, edges.into_iter().map(|(u, v)| (u, v, 1.0)))
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn with_pair(mut self, u: usize, v: usize) -> Result<Self> {
        if u >= self.n || v >= self.n {
            return Err(Error::BadParam(format!(
                "pair ({u}, {v}) invalid for {} vertices",
                self.n
            )));
        }
        self.pair = Some((u, v));
        Ok(self)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// Designated vertex pair, when the graph comes from a named family.
    pub fn pair(&self) -> Option<(usize, usize)> {
        self.pair
    }

    pub fn is_unweighted(&self) -> bool {
        self.edges.iter().all(|e| e.w == 1.0)
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<f64> {
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        self.edges
            .binary_search_by_key(&(a, b), |e| (e.u, e.v))
            .ok()
            .map(|i| self.edges[i].w)
    }

    pub fn neighbours(&self, u: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|e| {
                if e.u == u {
                    Some(e.v)
                } else if e.v == u {
                    Some(e.u)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for e in &self.edges {
            d[e.u] += 1;
            d[e.v] += 1;
        }
        d
    }

    pub fn is_connected(&self) -> bool {
        let mut adj = vec![Vec::new(); self.n];
        for e in &self.edges {
            adj[e.u].push(e.v);
            adj[e.v].push(e.u);
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count == self.n
    }

    /// The adjacency or Laplacian matrix. The Laplacian uses weighted degrees.
    pub fn matrix(&self, kind: MatrixKind) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for e in &self.edges {
            match kind {
                MatrixKind::Adjacency => {
                    m[(e.u, e.v)] = e.w;
                    m[(e.v, e.u)] = e.w;
                }
                MatrixKind::Laplacian => {
                    m[(e.u, e.v)] = -e.w;
                    m[(e.v, e.u)] = -e.w;
                    m[(e.u, e.u)] += e.w;
                    m[(e.v, e.v)] += e.w;
                }
            }
        }
        m
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            n: self.n,
            edges: self.edges.iter().map(|e| (e.u, e.v, e.w)).collect(),
            pair: self.pair.map(|(u, v)| [u, v]),
            label: self.label.clone(),
        }
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let doc: GraphJson = serde_json::from_str(text)?;
        doc.into_graph()
    }
}

/// The weighted edge-list file format:
/// `{"n": 4, "edges": [[0, 1, -1.0], ...], "pair": [0, 2]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<(usize, usize, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair: Option<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl GraphJson {
    pub fn into_graph(self) -> Result<WeightedGraph> {
        let mut g = WeightedGraph::new(self.n, self.edges)?;
        if let Some([u, v]) = self.pair {
            g = g.with_pair(u, v)?;
        }
        if let Some(label) = self.label {
            g = g.with_label(label);
        }
        Ok(g)
    }
}
