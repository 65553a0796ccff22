//! Graphviz output for graphs of groups and move graphs.

use std::fmt::Write;

use deformspace_core::gog::{GraphOfGroups, Side};
use deformspace_core::moves::Enumeration;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Vertices labelled `name : |G_v|`, edges `|G_e| [i:j]` with the indices
/// of the edge group in its two end groups.
pub fn gog_dot(name: &str, g: &GraphOfGroups) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {} {{", quote(name)).unwrap();
    writeln!(out, "  node [shape=ellipse];").unwrap();
    for (i, v) in g.vertices().iter().enumerate() {
        writeln!(out, "  n{i} [label={}];", quote(&format!("{} : {}", v.name, v.group.order()))).unwrap();
    }
    for e in g.edges() {
        let (a, b) = (e.end(Side::A), e.end(Side::B));
        let label = format!("{} [{}:{}]", e.group.order(), a.index(), b.index());
        writeln!(out, "  n{} -> n{} [label={}, tooltip={}];", a.vertex.0, b.vertex.0, quote(&label), quote(&e.name))
            .unwrap();
    }
    out.push_str("}\n");
    out
}

/// Classes labelled by id and fingerprint; reduced classes doubly circled.
pub fn moves_dot(name: &str, space: &Enumeration) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {} {{", quote(name)).unwrap();
    for (i, c) in space.classes.iter().enumerate() {
        let shape = if c.reduced { "doublecircle" } else { "circle" };
        let label = format!("{i}\\n{:016x}", c.fingerprint.hash64());
        writeln!(out, "  c{i} [shape={shape}, label=\"{label}\"];").unwrap();
    }
    for m in &space.moves {
        let style = if m.collapse { "solid" } else { "dashed" };
        writeln!(out, "  c{} -> c{} [style={style}, label={}];", m.from, m.to, quote(&m.label)).unwrap();
    }
    out.push_str("}\n");
    out
}
