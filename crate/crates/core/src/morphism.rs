//! Monomorphism and isomorphism search between labelled graphs.
//!
//! The search is a VF2-style state-space exploration. Pattern vertices are
//! visited in a fixed order that prefers vertices connected to the already
//! matched part (most matched neighbours, then highest degree, then lowest
//! id). Candidates for a vertex are taken from the host neighbourhood of
//! an already matched neighbour when one exists, in ascending host id, so
//! enumeration order is deterministic.

use std::ops::ControlFlow;

use crate::graph::{EdgeId, Graph, VertexId};

/// An injective, label- and adjacency-preserving map from a pattern graph
/// into a host graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Morphism {
    pub vertex_map: Vec<VertexId>,
    pub edge_map: Vec<EdgeId>,
}

impl Morphism {
    fn from_vertex_map(pattern: &Graph, host: &Graph, vertex_map: &[VertexId]) -> Morphism {
        let edge_map = pattern
            .edges()
            .iter()
            .map(|e| {
                host.edge_between(vertex_map[e.source], vertex_map[e.target])
                    .expect("morphism preserves adjacency")
            })
            .collect();
        Morphism {
            vertex_map: vertex_map.to_vec(),
            edge_map,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Mode {
    Mono,
    Iso,
}

/// Search order of the pattern vertices and, for each, the earlier vertex
/// whose image seeds the candidate set.
fn matching_order(pattern: &Graph) -> Vec<(VertexId, Option<VertexId>)> {
    let n = pattern.num_vertices();
    let mut placed = vec![false; n];
    let mut conn = vec![0usize; n];
    let mut parent: Vec<Option<VertexId>> = vec![None; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let mut best: Option<VertexId> = None;
        for v in 0..n {
            if placed[v] {
                continue;
            }
            best = match best {
                None => Some(v),
                Some(b) => {
                    let kb = (conn[b], pattern.degree(b));
                    let kv = (conn[v], pattern.degree(v));
                    if kv > kb {
                        Some(v)
                    } else {
                        Some(b)
                    }
                }
            };
        }
        let v = best.expect("an unplaced vertex remains");
        placed[v] = true;
        order.push((v, parent[v]));
        for &(w, _) in pattern.neighbours(v) {
            if !placed[w] {
                conn[w] += 1;
                if parent[w].is_none() {
                    parent[w] = Some(v);
                }
            }
        }
    }
    order
}

struct Search<'a, VC, EC> {
    pattern: &'a Graph,
    host: &'a Graph,
    vertex_ok: VC,
    edge_ok: EC,
    mode: Mode,
    order: Vec<(VertexId, Option<VertexId>)>,
    map: Vec<VertexId>,
    used: Vec<bool>,
}

impl<'a, VC, EC> Search<'a, VC, EC>
where
    VC: Fn(VertexId, VertexId) -> bool,
    EC: Fn(EdgeId, EdgeId) -> bool,
{
    fn feasible(&self, p: VertexId, h: VertexId) -> bool {
        if self.used[h] {
            return false;
        }
        let (dp, dh) = (self.pattern.degree(p), self.host.degree(h));
        let degree_ok = match self.mode {
            Mode::Mono => dp <= dh,
            Mode::Iso => dp == dh,
        };
        if !degree_ok || !(self.vertex_ok)(p, h) {
            return false;
        }
        for &(q, pe) in self.pattern.neighbours(p) {
            let hq = self.map[q];
            if hq == usize::MAX {
                continue;
            }
            match self.host.edge_between(h, hq) {
                Some(he) if (self.edge_ok)(pe, he) => {}
                _ => return false,
            }
        }
        true
    }

    fn run<F>(&mut self, depth: usize, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[VertexId]) -> ControlFlow<()>,
    {
        if depth == self.order.len() {
            return visit(&self.map);
        }
        let (p, parent) = self.order[depth];
        match parent {
            Some(q) => {
                let hq = self.map[q];
                let host = self.host;
                for &(h, _) in host.neighbours(hq) {
                    self.try_extend(depth, p, h, visit)?;
                }
            }
            None => {
                for h in self.host.vertices() {
                    self.try_extend(depth, p, h, visit)?;
                }
            }
        }
        ControlFlow::Continue(())
    }

    fn try_extend<F>(
        &mut self,
        depth: usize,
        p: VertexId,
        h: VertexId,
        visit: &mut F,
    ) -> ControlFlow<()>
    where
        F: FnMut(&[VertexId]) -> ControlFlow<()>,
    {
        if !self.feasible(p, h) {
            return ControlFlow::Continue(());
        }
        self.map[p] = h;
        self.used[h] = true;
        let r = self.run(depth + 1, visit);
        self.map[p] = usize::MAX;
        self.used[h] = false;
        r
    }
}

/// Core search with caller-supplied compatibility predicates. The visitor
/// receives the vertex map (pattern vertex -> host vertex).
pub(crate) fn search_with<VC, EC, F>(
    pattern: &Graph,
    host: &Graph,
    mode: Mode,
    vertex_ok: VC,
    edge_ok: EC,
    mut visit: F,
) where
    VC: Fn(VertexId, VertexId) -> bool,
    EC: Fn(EdgeId, EdgeId) -> bool,
    F: FnMut(&[VertexId]) -> ControlFlow<()>,
{
    match mode {
        Mode::Mono => {
            if pattern.num_vertices() > host.num_vertices()
                || pattern.num_edges() > host.num_edges()
            {
                return;
            }
        }
        Mode::Iso => {
            if pattern.num_vertices() != host.num_vertices()
                || pattern.num_edges() != host.num_edges()
            {
                return;
            }
        }
    }
    let mut s = Search {
        pattern,
        host,
        vertex_ok,
        edge_ok,
        mode,
        order: matching_order(pattern),
        map: vec![usize::MAX; pattern.num_vertices()],
        used: vec![false; host.num_vertices()],
    };
    let _ = s.run(0, &mut visit);
}

fn search_labelled<F>(pattern: &Graph, host: &Graph, mode: Mode, visit: F)
where
    F: FnMut(&[VertexId]) -> ControlFlow<()>,
{
    if mode == Mode::Iso && pattern.label_histogram() != host.label_histogram() {
        return;
    }
    search_with(
        pattern,
        host,
        mode,
        |p, h| pattern.label(p) == host.label(h),
        |pe, he| pattern.edge(pe).label == host.edge(he).label,
        visit,
    );
}

/// Streams every monomorphism `pattern -> host` to `visitor` until it
/// breaks.
pub fn enumerate_monomorphisms<F>(pattern: &Graph, host: &Graph, mut visitor: F)
where
    F: FnMut(&Morphism) -> ControlFlow<()>,
{
    search_labelled(pattern, host, Mode::Mono, |m| {
        visitor(&Morphism::from_vertex_map(pattern, host, m))
    });
}

/// Streams every isomorphism `g1 -> g2` to `visitor` until it breaks.
pub fn enumerate_isomorphisms<F>(g1: &Graph, g2: &Graph, mut visitor: F)
where
    F: FnMut(&Morphism) -> ControlFlow<()>,
{
    search_labelled(g1, g2, Mode::Iso, |m| {
        visitor(&Morphism::from_vertex_map(g1, g2, m))
    });
}

/// All monomorphisms `pattern -> host` in enumeration order.
pub fn monomorphisms(pattern: &Graph, host: &Graph) -> Vec<Morphism> {
    let mut out = Vec::new();
    enumerate_monomorphisms(pattern, host, |m| {
        out.push(m.clone());
        ControlFlow::Continue(())
    });
    out
}

fn count(pattern: &Graph, host: &Graph, mode: Mode, max: usize) -> usize {
    if max == 0 {
        return 0;
    }
    let mut n = 0;
    search_labelled(pattern, host, mode, |_| {
        n += 1;
        if n >= max {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    n
}

/// Number of monomorphisms `pattern -> host`, saturating at `max_matches`.
pub fn count_monomorphisms(pattern: &Graph, host: &Graph, max_matches: usize) -> usize {
    count(pattern, host, Mode::Mono, max_matches)
}

/// Number of isomorphisms `g1 -> g2`, saturating at `max_matches`.
pub fn count_isomorphisms(g1: &Graph, g2: &Graph, max_matches: usize) -> usize {
    count(g1, g2, Mode::Iso, max_matches)
}

pub fn is_isomorphic(g1: &Graph, g2: &Graph) -> bool {
    count_isomorphisms(g1, g2, 1) == 1
}

impl Graph {
    /// Monomorphism count into `host`; `max_matches` defaults to 1 in
    /// callers that mirror the "first morphism only" behaviour.
    pub fn monomorphism(&self, host: &Graph, max_matches: usize) -> usize {
        count_monomorphisms(self, host, max_matches)
    }

    pub fn isomorphism(&self, other: &Graph, max_matches: usize) -> usize {
        count_isomorphisms(self, other, max_matches)
    }
}
