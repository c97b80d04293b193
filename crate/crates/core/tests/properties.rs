//! Property tests over arbitrary small digraphs.

use num_bigint::BigUint;
use proptest::prelude::*;

use graphent_core::af::{adjoint, omega};
use graphent_core::count::{count_class, enumerate, PathClass};
use graphent_core::entropy::growth_rate;
use graphent_core::graph::{Edge, EdgeId, FiniteGraph, GraphWindow, VertexId};

fn arb_graph() -> impl Strategy<Value = FiniteGraph> {
    (1usize..6, proptest::collection::vec((0u64..6, 0u64..6), 0..12)).prop_map(|(n, raw)| {
        let vertices: Vec<VertexId> = (0..n as u64).map(VertexId).collect();
        let edges: Vec<Edge> = raw
            .into_iter()
            .enumerate()
            .map(|(i, (s, d))| Edge {
                id: EdgeId(i as u64),
                src: VertexId(s % n as u64),
                dst: VertexId(d % n as u64),
            })
            .collect();
        FiniteGraph::build(vertices, edges).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transpose_involution_and_degree_swap(g in arb_graph()) {
        let t = g.transpose();
        let tt = t.transpose();
        prop_assert_eq!(g.vertices(), tt.vertices());
        prop_assert_eq!(g.edges(), tt.edges());
        for &v in g.vertices() {
            prop_assert_eq!(g.out_edges_of(v).count(), t.in_edges_of(v).count());
            prop_assert_eq!(g.in_edges_of(v).count(), t.out_edges_of(v).count());
        }
    }

    #[test]
    fn dp_equals_enumeration_on_arbitrary_graphs(g in arb_graph(), n in 0usize..6) {
        let w = GraphWindow::whole(&g);
        for &v in g.vertices() {
            for class in [
                PathClass::Through,
                PathClass::Source,
                PathClass::SourceStar,
                PathClass::Range,
                PathClass::RangeStar,
                PathClass::Loop,
            ] {
                let series = count_class(&w, v, class, n).unwrap();
                prop_assert_eq!(
                    series.counts[n].clone(),
                    enumerate::count_class_brute(&g, v, class, n)
                );
            }
        }
    }

    #[test]
    fn total_paths_equal_edge_matrix_power_sums(g in arb_graph()) {
        let m = g.edge_matrix();
        let mut row = vec![1u64; m.dim];
        for n in 1..=6usize {
            let total: u64 = row.iter().sum();
            prop_assert_eq!(BigUint::from(total), enumerate::total_paths(&g, n));
            let mut next = vec![0u64; m.dim];
            for (re, adj) in row.iter().zip(&m.rows) {
                for &f in adj {
                    next[f] += re;
                }
            }
            row = next;
        }
    }

    #[test]
    fn growth_estimate_is_scale_invariant(lambda in 1u64..6, c in 1u64..50) {
        // multiplying every count by a constant moves the estimate by no more
        // than log(c) / n_lo
        let counts: Vec<BigUint> = (0..=40u32).map(|n| BigUint::from(lambda).pow(n)).collect();
        let scaled: Vec<BigUint> = counts.iter().map(|x| x * BigUint::from(c)).collect();
        let base = growth_rate(&counts, None, 0.25).unwrap();
        let moved = growth_rate(&scaled, None, 0.25).unwrap();
        let bound = (c as f64).ln() / base.n_range.0 as f64 + 1e-9;
        prop_assert!((base.value - moved.value).abs() <= bound);
    }

    #[test]
    fn adjoint_is_involutive_on_generators(g in arb_graph(), n in 0usize..3) {
        let w = GraphWindow::whole(&g);
        for &v in g.vertices() {
            if let Ok(om) = omega(&w, v, n) {
                for pair in om {
                    prop_assert_eq!(adjoint(&adjoint(&pair)), pair);
                }
            }
        }
    }
}
