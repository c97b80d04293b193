//! Text format for finite graphs: one edge per line `src dst [multiplicity]`,
//! `#` comments and blank lines ignored, isolated vertices via `vertex v`.
//! Vertex labels are interned to dense ids in first-appearance order.

use std::collections::HashMap;

use super::{Edge, EdgeId, FiniteGraph, GraphError, VertexId};

pub fn parse_edge_list(text: &str) -> Result<FiniteGraph, GraphError> {
    let mut intern: HashMap<String, VertexId> = HashMap::new();
    let mut order: Vec<String> = Vec::new();
    let mut edges: Vec<Edge> = Vec::new();
    let mut next_edge = 0u64;

    let id_of = |tok: &str, intern: &mut HashMap<String, VertexId>, order: &mut Vec<String>| {
        if let Some(&v) = intern.get(tok) {
            return v;
        }
        let v = VertexId(intern.len() as u64);
        intern.insert(tok.to_string(), v);
        order.push(tok.to_string());
        v
    };

    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let err = |detail: String| GraphError::Parse {
            line: lineno + 1,
            detail,
        };
        match toks.as_slice() {
            ["vertex", name] => {
                id_of(name, &mut intern, &mut order);
            }
            [src, dst] | [src, dst, _] => {
                let mult: u64 = if toks.len() == 3 {
                    toks[2]
                        .parse()
                        .map_err(|_| err(format!("bad multiplicity {:?}", toks[2])))?
                } else {
                    1
                };
                if mult == 0 {
                    return Err(err("multiplicity must be positive".into()));
                }
                let s = id_of(src, &mut intern, &mut order);
                let d = id_of(dst, &mut intern, &mut order);
                for _ in 0..mult {
                    edges.push(Edge {
                        id: EdgeId(next_edge),
                        src: s,
                        dst: d,
                    });
                    next_edge += 1;
                }
            }
            _ => return Err(err(format!("expected `src dst [multiplicity]` or `vertex v`, got {:?}", line))),
        }
    }

    let vertices: Vec<VertexId> = (0..order.len() as u64).map(VertexId).collect();
    let mut g = FiniteGraph::build(vertices, edges)?;
    for (i, name) in order.iter().enumerate() {
        g.set_label(VertexId(i as u64), name.clone());
    }
    Ok(g)
}

/// Serialize back to the edge-list format. Parallel edges between the same
/// endpoints are grouped into a multiplicity; groups appear in order of their
/// smallest edge id.
pub fn write_edge_list(g: &FiniteGraph) -> String {
    let mut out = String::new();
    let mut groups: Vec<(EdgeId, VertexId, VertexId, u64)> = Vec::new();
    let mut by_pair: HashMap<(VertexId, VertexId), usize> = HashMap::new();
    let mut edges: Vec<&Edge> = g.edges().iter().collect();
    edges.sort_by_key(|e| e.id);
    for e in edges {
        match by_pair.get(&(e.src, e.dst)) {
            Some(&i) => groups[i].3 += 1,
            None => {
                by_pair.insert((e.src, e.dst), groups.len());
                groups.push((e.id, e.src, e.dst, 1));
            }
        }
    }
    for (_, src, dst, mult) in &groups {
        if *mult == 1 {
            out.push_str(&format!("{} {}\n", g.display_vertex(*src), g.display_vertex(*dst)));
        } else {
            out.push_str(&format!(
                "{} {} {}\n",
                g.display_vertex(*src),
                g.display_vertex(*dst),
                mult
            ));
        }
    }
    for &v in g.vertices() {
        let isolated = g.out_edges_of(v).next().is_none() && g.in_edges_of(v).next().is_none();
        if isolated {
            out.push_str(&format!("vertex {}\n", g.display_vertex(v)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fibonacci_edge_list() {
        let g = parse_edge_list("# fibonacci\na a\na b\nb a\n").unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.find_by_label("a"), Some(VertexId(0)));
    }

    #[test]
    fn multiplicity_expands_to_parallel_edges() {
        let g = parse_edge_list("x y 8\n").unwrap();
        assert_eq!(g.edge_count(), 8);
        let ids: Vec<u64> = g.edges().iter().map(|e| e.id.0).collect();
        assert_eq!(ids, (0..8).collect::<Vec<_>>());
    }

    #[test]
    fn isolated_vertex_line() {
        let g = parse_edge_list("vertex z\n").unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn round_trip_preserves_structure() {
        let g = parse_edge_list("a b 3\nb a\nvertex c\n").unwrap();
        let text = write_edge_list(&g);
        let h = parse_edge_list(&text).unwrap();
        assert_eq!(g.vertex_count(), h.vertex_count());
        assert_eq!(g.edge_count(), h.edge_count());
    }

    #[test]
    fn bad_lines_are_reported_with_numbers() {
        let err = parse_edge_list("a b\na b c d\n").unwrap_err();
        match err {
            GraphError::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }
}
