//! Oracle-backed graphs and finite window materialization.
//!
//! An infinite locally finite graph is presented through a [`GraphOracle`]:
//! deterministic out/in edge queries per vertex. A [`GraphWindow`] is the
//! induced subgraph on the union of the forward and backward balls of a base
//! vertex set. Any path of length `<= radius` that touches a base vertex lies
//! entirely inside the window, so path counts taken on the window are exact
//! counts in the ambient graph.

use std::collections::{HashMap, VecDeque};

use super::{Edge, FiniteGraph, GraphError, VertexId};

/// Hard cap on the degree an oracle may report for one vertex; converts a
/// non-locally-finite oracle bug into a clean error.
pub const DEFAULT_DEGREE_CAP: usize = 1_000_000;

/// A deterministic, pure view of a (possibly infinite) locally finite graph.
///
/// Repeated queries must return identical lists in identical order, and the
/// out/in lists must agree: `e` is in `out_edges(v)` iff `s(e) = v` and `e`
/// is in `in_edges(r(e))`. Both are checked on every materialized window.
pub trait GraphOracle {
    /// A designated base vertex (written `0` for the built-in families).
    fn root(&self) -> VertexId;
    fn out_edges(&self, v: VertexId) -> Vec<Edge>;
    fn in_edges(&self, v: VertexId) -> Vec<Edge>;
    fn label(&self, _v: VertexId) -> Option<String> {
        None
    }
}

impl GraphOracle for FiniteGraph {
    fn root(&self) -> VertexId {
        self.vertices()[0]
    }

    fn out_edges(&self, v: VertexId) -> Vec<Edge> {
        match self.dense_opt(v) {
            Some(_) => self.out_edges_of(v).cloned().collect(),
            None => Vec::new(),
        }
    }

    fn in_edges(&self, v: VertexId) -> Vec<Edge> {
        match self.dense_opt(v) {
            Some(_) => self.in_edges_of(v).cloned().collect(),
            None => Vec::new(),
        }
    }

    fn label(&self, v: VertexId) -> Option<String> {
        FiniteGraph::label(self, v).map(str::to_string)
    }
}

/// A finite, faithfully materialized neighborhood of an oracle graph.
#[derive(Debug, Clone)]
pub struct GraphWindow {
    base: Vec<VertexId>,
    radius: usize,
    graph: FiniteGraph,
    boundary: Vec<VertexId>,
    dist_fwd: HashMap<VertexId, usize>,
    dist_bwd: HashMap<VertexId, usize>,
    saturated: bool,
}

impl GraphWindow {
    /// A window holding a whole finite graph; sufficient for any count length.
    pub fn whole(graph: &FiniteGraph) -> GraphWindow {
        let base: Vec<VertexId> = graph.vertices().to_vec();
        let bound = graph.vertex_count() + graph.edge_count() + 1;
        materialize(graph, &base, bound).expect("a finite graph saturates its own window")
    }

    pub fn base(&self) -> &[VertexId] {
        &self.base
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn graph(&self) -> &FiniteGraph {
        &self.graph
    }

    /// Vertices at graph distance exactly `radius` from the base set.
    pub fn boundary(&self) -> &[VertexId] {
        &self.boundary
    }

    /// True when both the forward and backward closures were exhausted before
    /// the radius ran out; counts are then exact at every length.
    pub fn is_saturated(&self) -> bool {
        self.saturated
    }

    /// Whether counts of paths of length `<= n` touching the base are exact
    /// on this window.
    pub fn sufficient_for(&self, n: usize) -> bool {
        self.saturated || n <= self.radius
    }

    /// Whether `v` may serve as the distinguished vertex of a count.
    pub fn admits_vertex(&self, v: VertexId) -> bool {
        if self.saturated {
            self.graph.contains_vertex(v)
        } else {
            self.base.contains(&v)
        }
    }

    /// Whether the window is guaranteed to contain every ambient in-edge of `v`.
    pub fn in_edges_complete(&self, v: VertexId) -> bool {
        if self.saturated {
            return self.graph.contains_vertex(v);
        }
        match self.dist_bwd.get(&v) {
            Some(&d) => d < self.radius,
            None => false,
        }
    }

    pub fn dist_fwd(&self, v: VertexId) -> Option<usize> {
        self.dist_fwd.get(&v).copied()
    }

    pub fn dist_bwd(&self, v: VertexId) -> Option<usize> {
        self.dist_bwd.get(&v).copied()
    }

    /// The same window over the edge-reversed graph. Forward and backward
    /// balls swap, so base, radius and sufficiency carry over.
    pub fn transposed(&self) -> GraphWindow {
        GraphWindow {
            base: self.base.clone(),
            radius: self.radius,
            graph: self.graph.transpose(),
            boundary: self.boundary.clone(),
            dist_fwd: self.dist_bwd.clone(),
            dist_bwd: self.dist_fwd.clone(),
            saturated: self.saturated,
        }
    }
}

/// Materialize the induced subgraph on the union of the forward and backward
/// balls of `base` with the given radius, using the default degree cap.
pub fn materialize(
    oracle: &dyn GraphOracle,
    base: &[VertexId],
    radius: usize,
) -> Result<GraphWindow, GraphError> {
    materialize_with_cap(oracle, base, radius, DEFAULT_DEGREE_CAP)
}

pub fn materialize_with_cap(
    oracle: &dyn GraphOracle,
    base: &[VertexId],
    radius: usize,
    degree_cap: usize,
) -> Result<GraphWindow, GraphError> {
    if base.is_empty() {
        return Err(GraphError::EmptyBase);
    }

    let dist_fwd = ball(oracle, base, radius, degree_cap, Direction::Forward)?;
    let dist_bwd = ball(oracle, base, radius, degree_cap, Direction::Backward)?;

    let mut vertices: Vec<VertexId> = dist_fwd.keys().chain(dist_bwd.keys()).copied().collect();
    vertices.sort_unstable();
    vertices.dedup();
    let in_window: HashMap<VertexId, ()> = vertices.iter().map(|&v| (v, ())).collect();

    // Collect the induced edge set from both oracle views and cross-check
    // them against each other.
    let mut edges: HashMap<crate::graph::EdgeId, Edge> = HashMap::new();
    let mut from_out: HashMap<crate::graph::EdgeId, ()> = HashMap::new();
    let mut from_in: HashMap<crate::graph::EdgeId, ()> = HashMap::new();
    let mut fwd_open = false;
    let mut bwd_open = false;

    for &v in &vertices {
        let out = oracle.out_edges(v);
        check_degree(v, out.len(), degree_cap)?;
        for e in out {
            if e.src != v {
                return Err(GraphError::OracleInconsistency {
                    vertex: v,
                    detail: format!("out_edges({:?}) returned edge {:?} with source {:?}", v, e.id, e.src),
                });
            }
            if dist_fwd.contains_key(&v) && !dist_fwd.contains_key(&e.dst) {
                fwd_open = true;
            }
            if in_window.contains_key(&e.dst) {
                insert_edge(&mut edges, e, v)?;
                from_out.insert(e.id, ());
            }
        }
        let inn = oracle.in_edges(v);
        check_degree(v, inn.len(), degree_cap)?;
        for e in inn {
            if e.dst != v {
                return Err(GraphError::OracleInconsistency {
                    vertex: v,
                    detail: format!("in_edges({:?}) returned edge {:?} with range {:?}", v, e.id, e.dst),
                });
            }
            if dist_bwd.contains_key(&v) && !dist_bwd.contains_key(&e.src) {
                bwd_open = true;
            }
            if in_window.contains_key(&e.src) {
                insert_edge(&mut edges, e, v)?;
                from_in.insert(e.id, ());
            }
        }
    }

    // Every induced edge must have been reported by both endpoint views.
    for (id, e) in &edges {
        if !from_out.contains_key(id) || !from_in.contains_key(id) {
            return Err(GraphError::OracleInconsistency {
                vertex: e.src,
                detail: format!(
                    "edge {:?} ({:?} -> {:?}) is missing from one of the endpoint edge lists",
                    id, e.src, e.dst
                ),
            });
        }
    }

    let mut edge_list: Vec<Edge> = edges.into_values().collect();
    edge_list.sort_by_key(|e| e.id);

    let mut graph = FiniteGraph::build(vertices.clone(), edge_list)?;
    for &v in &vertices {
        if let Some(l) = oracle.label(v) {
            graph.set_label(v, l);
        }
    }

    let boundary: Vec<VertexId> = vertices
        .iter()
        .copied()
        .filter(|v| {
            let d = match (dist_fwd.get(v), dist_bwd.get(v)) {
                (Some(&a), Some(&b)) => a.min(b),
                (Some(&a), None) => a,
                (None, Some(&b)) => b,
                (None, None) => unreachable!("window vertex without a distance"),
            };
            d == radius
        })
        .collect();

    let mut base_sorted = base.to_vec();
    base_sorted.sort_unstable();
    base_sorted.dedup();

    Ok(GraphWindow {
        base: base_sorted,
        radius,
        graph,
        boundary,
        dist_fwd,
        dist_bwd,
        saturated: !fwd_open && !bwd_open,
    })
}

enum Direction {
    Forward,
    Backward,
}

fn ball(
    oracle: &dyn GraphOracle,
    base: &[VertexId],
    radius: usize,
    degree_cap: usize,
    dir: Direction,
) -> Result<HashMap<VertexId, usize>, GraphError> {
    let mut dist: HashMap<VertexId, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    for &v in base {
        if dist.insert(v, 0).is_none() {
            queue.push_back(v);
        }
    }
    while let Some(v) = queue.pop_front() {
        let d = dist[&v];
        if d == radius {
            continue;
        }
        let step = match dir {
            Direction::Forward => oracle.out_edges(v),
            Direction::Backward => oracle.in_edges(v),
        };
        check_degree(v, step.len(), degree_cap)?;
        for e in step {
            let w = match dir {
                Direction::Forward => e.dst,
                Direction::Backward => e.src,
            };
            if let std::collections::hash_map::Entry::Vacant(slot) = dist.entry(w) {
                slot.insert(d + 1);
                queue.push_back(w);
            }
        }
    }
    Ok(dist)
}

fn check_degree(v: VertexId, degree: usize, cap: usize) -> Result<(), GraphError> {
    if degree > cap {
        Err(GraphError::LocalFinitenessViolation { vertex: v, degree, cap })
    } else {
        Ok(())
    }
}

fn insert_edge(
    edges: &mut HashMap<crate::graph::EdgeId, Edge>,
    e: Edge,
    at: VertexId,
) -> Result<(), GraphError> {
    if let Some(prev) = edges.insert(e.id, e) {
        if prev != e {
            return Err(GraphError::OracleInconsistency {
                vertex: at,
                detail: format!("edge id {:?} reported with two different endpoint pairs", e.id),
            });
        }
    }
    Ok(())
}
