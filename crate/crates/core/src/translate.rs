//! Translation between oriented graphs and wiring diagrams.
//!
//! [`graph_to_wd`] turns vertices into input boxes and the graph boundary into
//! the output box (with in and out swapped, since a graph input is a strand
//! leaving the output circle). [`wd_to_graph`] goes back, turning strands
//! between two points of the output circle into free edges and circles into
//! free loops.

use std::collections::BTreeMap;

use crate::graphs::{DirectedGraph, GraphBuilder, Sign};
use crate::wiring::{Endpoint, Interface, Polarity, WiringDiagram};

/// The diagram of a graph: box `v + 1` for vertex `v`.
pub fn graph_to_wd(g: &DirectedGraph) -> WiringDiagram {
    let bd = g.boundary();
    let output = Interface::new(bd.inputs, bd.outputs);
    let inputs = (0..g.vertex_count())
        .map(|v| {
            let nb = g.neighbourhood(v);
            Interface::new(nb.outputs, nb.inputs)
        })
        .collect();
    let mut matching = Vec::new();
    for v in 0..g.vertex_count() {
        for &x in g.vertex(v) {
            if g.delta(x) != Some(Sign::Neg) {
                continue;
            }
            let a = g.lambda(x).unwrap().clone();
            let y = g.iota(x);
            let target = if y == x {
                Endpoint(0, Polarity::In, g.beta(x).unwrap().clone())
            } else {
                Endpoint(g.owner(y).unwrap() + 1, Polarity::In, g.lambda(y).unwrap().clone())
            };
            matching.push((Endpoint(v + 1, Polarity::Out, a), target));
        }
    }
    for &z in g.flags() {
        if !g.is_boundary(z) || g.delta(z) != Some(Sign::Pos) {
            continue;
        }
        let a = g.beta(z).unwrap().clone();
        let target = match g.owner(z) {
            Some(v) => Endpoint(v + 1, Polarity::In, g.lambda(z).unwrap().clone()),
            None => Endpoint(0, Polarity::In, g.beta(g.pi(z).unwrap()).unwrap().clone()),
        };
        matching.push((Endpoint(0, Polarity::Out, a), target));
    }
    WiringDiagram::new(output, inputs, matching, g.loop_count()).expect("valid graphs give valid diagrams")
}

/// The graph of a diagram: vertex `i - 1` for input box `i`.
pub fn wd_to_graph(d: &WiringDiagram) -> DirectedGraph {
    let mut b = GraphBuilder::new();
    let mut ids = BTreeMap::new();
    for (k, iface) in d.inputs().iter().enumerate() {
        let v = b.add_vertex();
        for a in &iface.out_labels {
            ids.insert(Endpoint(k + 1, Polarity::Out, a.clone()), b.add_flag(v, Sign::Neg, a.clone()));
        }
        for a in &iface.in_labels {
            ids.insert(Endpoint(k + 1, Polarity::In, a.clone()), b.add_flag(v, Sign::Pos, a.clone()));
        }
    }
    for (x, y) in d.matching() {
        match (x.0, y.0) {
            (0, 0) => {
                b.add_free_edge(x.2.clone(), y.2.clone());
            }
            (0, _) => b.set_boundary(ids[y], x.2.clone()),
            (_, 0) => b.set_boundary(ids[x], y.2.clone()),
            _ => b.join(ids[x], ids[y]),
        }
    }
    b.add_loops(d.circles());
    b.build().expect("valid diagrams give valid graphs")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{corolla, free_loops_graph, is_isomorphic_strict, substitute};
    use crate::label::{l, labels};
    use crate::wiring::{compose, identity_diagram};

    #[test]
    fn corolla_becomes_one_straight_box() {
        let i = labels(&["i1", "i2"]);
        let j = labels(&["j1"]);
        let d = graph_to_wd(&corolla(&i, &j));
        assert_eq!(d.inputs(), &[Interface::new(j.clone(), i.clone())]);
        assert_eq!(d, identity_diagram(&i, &j));
        assert_eq!(graph_to_wd(&free_loops_graph(1)), WiringDiagram::circles_only(1));
    }

    #[test]
    fn identity_diagram_becomes_a_corolla() {
        let s = labels(&["a", "b"]);
        let t = labels(&["c"]);
        let g = wd_to_graph(&identity_diagram(&s, &t));
        assert_eq!(g.vertex_count(), 1);
        assert!(g.free_edges().is_empty());
        assert!(is_isomorphic_strict(&g, &corolla(&s, &t)));
    }

    #[test]
    fn circles_become_loops() {
        let g = wd_to_graph(&WiringDiagram::circles_only(3));
        assert_eq!(g.exceptional().len(), 6);
        assert_eq!(g.loop_count(), 3);
    }

    #[test]
    fn output_to_output_strand_is_a_free_edge() {
        let d = WiringDiagram::new(
            Interface::of(&["a"], &["b"]),
            vec![],
            vec![(Endpoint(0, Polarity::Out, l("a")), Endpoint(0, Polarity::In, l("b")))],
            0,
        )
        .unwrap();
        let g = wd_to_graph(&d);
        assert_eq!(g.free_edges().len(), 1);
        assert_eq!(graph_to_wd(&g), d);
    }

    #[test]
    fn composing_a_cap_matches_substitution() {
        let d = WiringDiagram::new(
            Interface::default(),
            vec![Interface::of(&["a"], &["b"])],
            vec![(Endpoint(1, Polarity::Out, l("a")), Endpoint(1, Polarity::In, l("b")))],
            0,
        )
        .unwrap();
        let d2 = WiringDiagram::new(
            Interface::of(&["b"], &["a"]),
            vec![],
            vec![(Endpoint(0, Polarity::Out, l("b")), Endpoint(0, Polarity::In, l("a")))],
            0,
        )
        .unwrap();
        let lhs = wd_to_graph(&compose(&d, 1, &d2).unwrap());
        let rhs = substitute(&wd_to_graph(&d), 0, &wd_to_graph(&d2)).unwrap();
        assert!(is_isomorphic_strict(&lhs, &rhs));
        assert_eq!(lhs.loop_count(), 1);
    }
}
