//! Reference counters by exhaustive path enumeration.
//!
//! Exponential in the length; intended for cross-checking the DP counters on
//! small inputs, and for enumerating the short paths the matrix-unit
//! representation needs. Independent of the DP code path by construction.

use num_bigint::BigUint;
use num_traits::Zero;

use super::PathClass;
use crate::graph::{FiniteGraph, VertexId};

/// All paths of exactly length `n` starting at `v`, as edge-index sequences.
pub fn paths_from(g: &FiniteGraph, v: VertexId, n: usize) -> Vec<Vec<usize>> {
    let mut acc = Vec::new();
    let mut stack = Vec::new();
    extend(g, g.dense(v), n, &mut stack, &mut acc);
    acc
}

fn extend(g: &FiniteGraph, at: usize, left: usize, stack: &mut Vec<usize>, acc: &mut Vec<Vec<usize>>) {
    if left == 0 {
        acc.push(stack.clone());
        return;
    }
    for &ei in g.out_edge_indices(at) {
        stack.push(ei);
        extend(g, g.dense(g.edge(ei).dst), left - 1, stack, acc);
        stack.pop();
    }
}

/// All paths of exactly length `n` ending at `v`, as edge-index sequences.
pub fn paths_into(g: &FiniteGraph, v: VertexId, n: usize) -> Vec<Vec<usize>> {
    let mut acc = Vec::new();
    let mut stack = Vec::new();
    extend_back(g, g.dense(v), n, &mut stack, &mut acc);
    for p in &mut acc {
        p.reverse();
    }
    acc
}

fn extend_back(g: &FiniteGraph, at: usize, left: usize, stack: &mut Vec<usize>, acc: &mut Vec<Vec<usize>>) {
    if left == 0 {
        acc.push(stack.clone());
        return;
    }
    for &ei in g.in_edge_indices(at) {
        stack.push(ei);
        extend_back(g, g.dense(g.edge(ei).src), left - 1, stack, acc);
        stack.pop();
    }
}

/// The vertex sequence of a path given by edge indices (panics on empty).
fn vertex_seq(g: &FiniteGraph, path: &[usize]) -> Vec<VertexId> {
    let mut vs = vec![g.edge(path[0]).src];
    for &ei in path {
        vs.push(g.edge(ei).dst);
    }
    vs
}

/// Count a path class at `v` by enumerating all length-`n` paths in the graph.
pub fn count_class_brute(g: &FiniteGraph, v: VertexId, class: PathClass, n: usize) -> BigUint {
    if n == 0 {
        // the empty path at v belongs to every class
        return BigUint::from(1u32);
    }
    let mut total = BigUint::zero();
    for &start in g.vertices() {
        // classes anchored at the source need only paths from v
        match class {
            PathClass::Source | PathClass::SourceStar | PathClass::Loop if start != v => continue,
            _ => {}
        }
        for path in paths_from(g, start, n) {
            let vs = vertex_seq(g, &path);
            let keep = match class {
                PathClass::Through => vs.contains(&v),
                PathClass::Source => vs[0] == v,
                PathClass::SourceStar => vs[0] == v && vs[1..].iter().all(|&u| u != v),
                PathClass::Range => vs[n] == v,
                PathClass::RangeStar => vs[n] == v && vs[..n].iter().all(|&u| u != v),
                PathClass::Loop => vs[0] == v && vs[n] == v,
            };
            if keep {
                total += 1u32;
            }
        }
    }
    total
}

/// First-return loop count at `v` of length `m`, by enumeration.
pub fn first_return_brute(g: &FiniteGraph, v: VertexId, m: usize) -> BigUint {
    if m == 0 {
        return BigUint::zero();
    }
    let mut total = BigUint::zero();
    for path in paths_from(g, v, m) {
        let vs = vertex_seq(g, &path);
        if vs[m] == v && vs[1..m].iter().all(|&u| u != v) {
            total += 1u32;
        }
    }
    total
}

/// Total number of length-`n` paths in the graph (all start vertices).
pub fn total_paths(g: &FiniteGraph, n: usize) -> BigUint {
    if n == 0 {
        return BigUint::from(g.vertex_count() as u64);
    }
    let mut total = BigUint::zero();
    for &start in g.vertices() {
        total += paths_from(g, start, n).len() as u64;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fibonacci_graph;

    #[test]
    fn fibonacci_length_two_paths() {
        let g = fibonacci_graph();
        assert_eq!(total_paths(&g, 2), BigUint::from(5u32));
        assert_eq!(
            count_class_brute(&g, VertexId(0), PathClass::Through, 2),
            BigUint::from(5u32)
        );
    }

    #[test]
    fn edge_matrix_power_counts_paths() {
        // total length-n paths equals the all-entries sum of A^(n-1)
        let g = fibonacci_graph();
        let m = g.edge_matrix();
        // row vector of ones times A^(n-1), summed
        let mut row = vec![1u64; m.dim];
        for n in 1..=6usize {
            let total: u64 = row.iter().sum();
            assert_eq!(BigUint::from(total), total_paths(&g, n), "n = {n}");
            let mut next = vec![0u64; m.dim];
            for (re, adj) in row.iter().zip(&m.rows) {
                for &f in adj {
                    next[f] += re;
                }
            }
            row = next;
        }
    }
}
