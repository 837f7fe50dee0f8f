// SPDX-License-Identifier: Apache-2.0

//! Graphviz rendering of a truth table on the subset lattice.

use std::fmt::Write;

use crate::truthtable::{CoveringChain, TruthTable, Vertex};

/// Hasse diagram of `2^n`, one rank per level, top vertex first. Vertices
/// with value 1 are filled; edges and vertices of `chain` are drawn bold.
pub fn hypercube_dot(table: &TruthTable, chain: Option<&CoveringChain>) -> String {
    let n = table.dim();
    let on_chain = |v: usize| chain.is_some_and(|c| c.vertices().iter().any(|u| u.index() == v));
    let chain_edge = |a: usize, b: usize| {
        chain.is_some_and(|c| c.vertices().windows(2).any(|w| w[0].index() == a && w[1].index() == b))
    };
    let name = |v: usize| Vertex::new(n, v as u32).expect("in range").to_string();
    let mut s = String::from("digraph hypercube {\n  rankdir=BT;\n  node [shape=box, style=filled];\n");
    for level in 0..=n {
        s.push_str("  { rank=same;");
        for v in (0..1usize << n).filter(|v| v.count_ones() as usize == level) {
            let _ = write!(s, " \"{}\";", name(v));
        }
        s.push_str(" }\n");
    }
    for v in 0..1usize << n {
        let fill = if table.get(v) { "black" } else { "white" };
        let font = if table.get(v) { "white" } else { "black" };
        let pen = if on_chain(v) { ", penwidth=3, color=red" } else { "" };
        let _ = writeln!(s, "  \"{}\" [fillcolor={fill}, fontcolor={font}{pen}];", name(v));
    }
    for v in 0..1usize << n {
        for c in 0..n {
            let w = v | 1 << c;
            if w == v {
                continue;
            }
            let style = if chain_edge(v, w) { " [penwidth=3, color=red]" } else { "" };
            let _ = writeln!(s, "  \"{}\" -> \"{}\"{style};", name(v), name(w));
        }
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_with_chain() {
        let t = TruthTable::iff2();
        let chain = t.optimal_covering_chain();
        let dot = hypercube_dot(&t, Some(&chain));
        assert!(dot.starts_with("digraph hypercube {"));
        assert_eq!(dot.matches(" -> ").count(), 4);
        assert_eq!(dot.matches("[penwidth=3, color=red]").count(), 2);
        assert!(dot.contains("\"11\" [fillcolor=black"));
        assert!(dot.contains("\"10\" [fillcolor=white"));
    }
}
