//! Directed-graph data model: finite explicit graphs, oracle-backed
//! (possibly infinite) graphs, window materialization, transposition and
//! structural checks.
//!
//! Vertices and edges carry opaque `u64` identifiers. A [`FiniteGraph`]
//! interns its vertices into dense indices so that the counting DPs can run
//! on flat arrays; human-readable labels live in a side table.

pub mod io;
mod window;

pub use window::{materialize, materialize_with_cap, GraphOracle, GraphWindow, DEFAULT_DEGREE_CAP};

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Identifier of a vertex. Equality and hashing are stable for a process run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexId(pub u64);

/// Identifier of an edge. Parallel edges carry distinct ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeId(pub u64);

/// A directed edge `src -> dst`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub id: EdgeId,
    pub src: VertexId,
    pub dst: VertexId,
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("edge {edge:?} references vertex {vertex:?} which is not in the vertex set")]
    DanglingEndpoint { edge: EdgeId, vertex: VertexId },
    #[error("duplicate edge id {0:?}")]
    DuplicateEdgeId(EdgeId),
    #[error("oracle inconsistency at {vertex:?}: {detail}")]
    OracleInconsistency { vertex: VertexId, detail: String },
    #[error("vertex {vertex:?} reports {degree} incident edges, exceeding the hard cap {cap}")]
    LocalFinitenessViolation {
        vertex: VertexId,
        degree: usize,
        cap: usize,
    },
    #[error("base vertex set must be nonempty")]
    EmptyBase,
    #[error("parse error at line {line}: {detail}")]
    Parse { line: usize, detail: String },
}

/// A finite directed graph, immutable after construction.
///
/// Edge order as given to [`FiniteGraph::build`] is preserved in [`FiniteGraph::edges`];
/// all counting operations are insensitive to it.
#[derive(Debug, Clone)]
pub struct FiniteGraph {
    vertices: Vec<VertexId>,
    index: HashMap<VertexId, usize>,
    edges: Vec<Edge>,
    out: Vec<Vec<usize>>,
    inn: Vec<Vec<usize>>,
    labels: BTreeMap<VertexId, String>,
}

impl FiniteGraph {
    /// Validate and build a graph from explicit vertex and edge lists.
    pub fn build(vertices: Vec<VertexId>, edges: Vec<Edge>) -> Result<Self, GraphError> {
        let mut vs = vertices;
        vs.sort_unstable();
        vs.dedup();
        let index: HashMap<VertexId, usize> = vs.iter().enumerate().map(|(i, &v)| (v, i)).collect();

        let mut seen = HashMap::new();
        for e in &edges {
            if seen.insert(e.id, ()).is_some() {
                return Err(GraphError::DuplicateEdgeId(e.id));
            }
            for v in [e.src, e.dst] {
                if !index.contains_key(&v) {
                    return Err(GraphError::DanglingEndpoint { edge: e.id, vertex: v });
                }
            }
        }

        let mut out = vec![Vec::new(); vs.len()];
        let mut inn = vec![Vec::new(); vs.len()];
        for (i, e) in edges.iter().enumerate() {
            out[index[&e.src]].push(i);
            inn[index[&e.dst]].push(i);
        }

        Ok(Self {
            vertices: vs,
            index,
            edges,
            out,
            inn,
            labels: BTreeMap::new(),
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.index.contains_key(&v)
    }

    /// Dense index of `v`, panicking if absent.
    pub fn dense(&self, v: VertexId) -> usize {
        self.index[&v]
    }

    pub fn dense_opt(&self, v: VertexId) -> Option<usize> {
        self.index.get(&v).copied()
    }

    pub fn vertex_at(&self, dense: usize) -> VertexId {
        self.vertices[dense]
    }

    pub fn edge(&self, idx: usize) -> &Edge {
        &self.edges[idx]
    }

    /// Indices into [`FiniteGraph::edges`] of the edges leaving `v` (by dense index).
    pub fn out_edge_indices(&self, dense: usize) -> &[usize] {
        &self.out[dense]
    }

    pub fn in_edge_indices(&self, dense: usize) -> &[usize] {
        &self.inn[dense]
    }

    pub fn out_edges_of(&self, v: VertexId) -> impl Iterator<Item = &Edge> {
        self.out[self.dense(v)].iter().map(move |&i| &self.edges[i])
    }

    pub fn in_edges_of(&self, v: VertexId) -> impl Iterator<Item = &Edge> {
        self.inn[self.dense(v)].iter().map(move |&i| &self.edges[i])
    }

    pub fn set_label(&mut self, v: VertexId, label: impl Into<String>) {
        self.labels.insert(v, label.into());
    }

    pub fn label(&self, v: VertexId) -> Option<&str> {
        self.labels.get(&v).map(|s| s.as_str())
    }

    /// Label if present, otherwise the numeric id.
    pub fn display_vertex(&self, v: VertexId) -> String {
        match self.label(v) {
            Some(s) => s.to_string(),
            None => v.0.to_string(),
        }
    }

    pub fn find_by_label(&self, label: &str) -> Option<VertexId> {
        self.labels
            .iter()
            .find(|(_, l)| l.as_str() == label)
            .map(|(&v, _)| v)
    }

    /// Same vertex set, every edge reversed (ids preserved). An involution.
    pub fn transpose(&self) -> FiniteGraph {
        let edges = self
            .edges
            .iter()
            .map(|e| Edge {
                id: e.id,
                src: e.dst,
                dst: e.src,
            })
            .collect();
        let mut g = FiniteGraph::build(self.vertices.clone(), edges)
            .expect("transpose of a valid graph is valid");
        g.labels = self.labels.clone();
        g
    }

    /// Strongly connected components, one `Vec` per component (Tarjan).
    pub fn scc(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut state = TarjanState {
            index: 0,
            stack: Vec::new(),
            on_stack: vec![false; n],
            idx: vec![None; n],
            low: vec![0; n],
            comps: Vec::new(),
        };
        for v in 0..n {
            if state.idx[v].is_none() {
                self.strongconnect(v, &mut state);
            }
        }
        state.comps
    }

    /// True iff the graph is strongly connected and every vertex lies on a
    /// directed cycle of positive length. For a single vertex this requires a
    /// self-loop; for two or more vertices it is plain strong connectivity.
    pub fn is_irreducible(&self) -> bool {
        if self.vertices.is_empty() {
            return false;
        }
        if self.scc().len() != 1 {
            return false;
        }
        self.vertex_count() > 1 || !self.edges.is_empty()
    }

    /// The 0/1 matrix over edges with `A[e][f] = 1` iff `r(e) = s(f)`.
    pub fn edge_matrix(&self) -> EdgeMatrix {
        let rows = self
            .edges
            .iter()
            .map(|e| self.out[self.index[&e.dst]].clone())
            .collect();
        EdgeMatrix {
            dim: self.edges.len(),
            rows,
        }
    }

    /// Restriction to a subset of vertices (by dense index): the induced subgraph.
    pub fn induced(&self, keep: &[usize]) -> FiniteGraph {
        let set: std::collections::HashSet<usize> = keep.iter().copied().collect();
        let vertices: Vec<VertexId> = keep.iter().map(|&i| self.vertices[i]).collect();
        let edges: Vec<Edge> = self
            .edges
            .iter()
            .filter(|e| set.contains(&self.index[&e.src]) && set.contains(&self.index[&e.dst]))
            .cloned()
            .collect();
        let mut g = FiniteGraph::build(vertices, edges).expect("induced subgraph is valid");
        for v in g.vertices.clone() {
            if let Some(l) = self.label(v) {
                g.set_label(v, l);
            }
        }
        g
    }

    fn strongconnect(&self, v: usize, state: &mut TarjanState) {
        state.idx[v] = Some(state.index);
        state.low[v] = state.index;
        state.index += 1;
        state.stack.push(v);
        state.on_stack[v] = true;

        for &ei in &self.out[v] {
            let w = self.index[&self.edges[ei].dst];
            if state.idx[w].is_none() {
                self.strongconnect(w, state);
                state.low[v] = state.low[v].min(state.low[w]);
            } else if state.on_stack[w] {
                state.low[v] = state.low[v].min(state.idx[w].unwrap());
            }
        }

        if state.low[v] == state.idx[v].unwrap() {
            let mut comp = Vec::new();
            loop {
                let w = state.stack.pop().expect("tarjan stack underflow");
                state.on_stack[w] = false;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            state.comps.push(comp);
        }
    }
}

struct TarjanState {
    index: usize,
    stack: Vec<usize>,
    on_stack: Vec<bool>,
    idx: Vec<Option<usize>>,
    low: Vec<usize>,
    comps: Vec<Vec<usize>>,
}

/// Edge adjacency matrix in successor-list form: `rows[e]` holds the indices
/// of the edges `f` with `r(e) = s(f)`. The sum of all entries of the n-th
/// power counts paths of length `n + 1`.
#[derive(Debug, Clone)]
pub struct EdgeMatrix {
    pub dim: usize,
    pub rows: Vec<Vec<usize>>,
}

/// Convenience constructor used throughout the tests: `a=0`, `b=1` with edges
/// `e1: a->a`, `e2: a->b`, `e3: b->a`. Source counts at `a` follow the
/// Fibonacci recurrence.
pub fn fibonacci_graph() -> FiniteGraph {
    let a = VertexId(0);
    let b = VertexId(1);
    let mut g = FiniteGraph::build(
        vec![a, b],
        vec![
            Edge { id: EdgeId(0), src: a, dst: a },
            Edge { id: EdgeId(1), src: a, dst: b },
            Edge { id: EdgeId(2), src: b, dst: a },
        ],
    )
    .expect("fibonacci graph is valid");
    g.set_label(a, "a");
    g.set_label(b, "b");
    g
}
