use std::fmt::Write;

use crate::graph::Graph;
use crate::io::write_graph_gml;

use super::{DerivationGraph, Hyperedge};

type VertexText = Box<dyn Fn(&Graph, &DerivationGraph) -> String>;
type VertexFlag = Box<dyn Fn(&Graph, &DerivationGraph) -> bool>;
type EdgeText = Box<dyn Fn(&Hyperedge, &DerivationGraph) -> String>;
type EdgeFlag = Box<dyn Fn(&Hyperedge, &DerivationGraph) -> bool>;

/// Printing hooks, applied in push order.
///
/// Labels from every hook are appended to the default label. The first
/// non-empty colour wins. An element is visible when every visibility
/// hook accepts it, and a hyperedge is hidden whenever one of its
/// vertices is.
#[derive(Default)]
pub struct ExportOptions {
    vertex_label: Vec<VertexText>,
    vertex_colour: Vec<VertexText>,
    vertex_visible: Vec<VertexFlag>,
    edge_label: Vec<EdgeText>,
    edge_visible: Vec<EdgeFlag>,
}

impl ExportOptions {
    pub fn new() -> ExportOptions {
        ExportOptions::default()
    }

    pub fn push_vertex_label(&mut self, f: impl Fn(&Graph, &DerivationGraph) -> String + 'static) {
        self.vertex_label.push(Box::new(f));
    }

    pub fn push_vertex_colour(&mut self, f: impl Fn(&Graph, &DerivationGraph) -> String + 'static) {
        self.vertex_colour.push(Box::new(f));
    }

    pub fn push_vertex_visible(&mut self, f: impl Fn(&Graph, &DerivationGraph) -> bool + 'static) {
        self.vertex_visible.push(Box::new(f));
    }

    pub fn push_edge_label(
        &mut self,
        f: impl Fn(&Hyperedge, &DerivationGraph) -> String + 'static,
    ) {
        self.edge_label.push(Box::new(f));
    }

    pub fn push_edge_visible(
        &mut self,
        f: impl Fn(&Hyperedge, &DerivationGraph) -> bool + 'static,
    ) {
        self.edge_visible.push(Box::new(f));
    }
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            _ => out.push(c),
        }
    }
    out.push('"');
    out
}

fn join(base: String, extra: impl Iterator<Item = String>) -> String {
    extra.filter(|s| !s.is_empty()).fold(base, |mut acc, s| {
        if !acc.is_empty() {
            acc.push_str(", ");
        }
        acc.push_str(&s);
        acc
    })
}

/// Graphviz rendering. Vertices are `v<id>`; a hyperedge with exactly one
/// tail and one head is a single arc, any other is a box node `he<id>`.
/// Arcs carry the multiplicity of their endpoint when it exceeds one.
pub fn export_dot(dg: &DerivationGraph, opts: &ExportOptions) -> String {
    let visible: Vec<bool> = dg
        .vertices()
        .iter()
        .map(|v| opts.vertex_visible.iter().all(|f| f(&v.graph, dg)))
        .collect();
    let mut out = String::from("digraph dg {\n");
    for v in dg.vertices() {
        if !visible[v.id] {
            continue;
        }
        let g = v.graph.as_ref();
        let name = if g.name().is_empty() {
            format!("v{}", v.id)
        } else {
            g.name().to_string()
        };
        let label = join(name, opts.vertex_label.iter().map(|f| f(g, dg)));
        let _ = write!(
            out,
            "  v{} [label={}, tooltip={}",
            v.id,
            quote(&label),
            quote(&write_graph_gml(g))
        );
        if let Some(c) = opts
            .vertex_colour
            .iter()
            .map(|f| f(g, dg))
            .find(|c| !c.is_empty())
        {
            let _ = write!(out, ", color={}", quote(&c));
        }
        out.push_str("];\n");
    }
    for e in dg.hyperedges() {
        if e.tails.iter().chain(&e.heads).any(|&v| !visible[v])
            || !opts.edge_visible.iter().all(|f| f(e, dg))
        {
            continue;
        }
        let label = join(
            dg.rule_of(e).name().to_string(),
            opts.edge_label.iter().map(|f| f(e, dg)),
        );
        if e.tails.len() == 1 && e.heads.len() == 1 {
            let _ = writeln!(
                out,
                "  v{} -> v{} [label={}];",
                e.tails[0],
                e.heads[0],
                quote(&label)
            );
            continue;
        }
        let _ = writeln!(out, "  he{} [shape=box, label={}];", e.id, quote(&label));
        for (v, n) in runs(&e.tails) {
            let _ = write!(out, "  v{v} -> he{}", e.id);
            arc_end(&mut out, n);
        }
        for (v, n) in runs(&e.heads) {
            let _ = write!(out, "  he{} -> v{v}", e.id);
            arc_end(&mut out, n);
        }
    }
    out.push_str("}\n");
    out
}

fn arc_end(out: &mut String, n: usize) {
    if n > 1 {
        let _ = writeln!(out, " [label=\"{n}\"];");
    } else {
        out.push_str(";\n");
    }
}

/// `(value, count)` for a sorted slice.
fn runs(xs: &[usize]) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = Vec::new();
    for &x in xs {
        match out.last_mut() {
            Some((y, n)) if *y == x => *n += 1,
            _ => out.push((x, 1)),
        }
    }
    out
}
