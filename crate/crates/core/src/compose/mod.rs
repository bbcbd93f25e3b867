//! Rule composition along a span `R1 <- D -> L2`.

use std::ops::ControlFlow;

use thiserror::Error;

use crate::graph::Graph;
use crate::morphism::{search_with, Mode};
use crate::rule::{Rule, RuleEdge, RuleVertex};

pub mod expr;

pub use expr::{parse_rc_expression, RcEvaluator, RcExpression, RcOperator};

/// `(∅ <- ∅ -> G)`.
pub fn rc_bind(g: &Graph) -> Rule {
    from_graph(g, format!("rcBind({})", g.name()), false, true)
}

/// `(G <- ∅ -> ∅)`.
pub fn rc_unbind(g: &Graph) -> Rule {
    from_graph(g, format!("rcUnbind({})", g.name()), true, false)
}

/// `(G <- G -> G)`.
pub fn rc_id(g: &Graph) -> Rule {
    from_graph(g, format!("rcId({})", g.name()), true, true)
}

fn from_graph(g: &Graph, name: String, left: bool, right: bool) -> Rule {
    let side = |l: &str, on: bool| on.then(|| l.to_string());
    let vertices = g
        .vertices()
        .map(|v| RuleVertex::new(v as i64, side(g.label(v), left), side(g.label(v), right)))
        .collect();
    let edges = g
        .edges()
        .iter()
        .map(|e| {
            RuleEdge::new(
                e.source,
                e.target,
                side(&e.label, left),
                side(&e.label, right),
            )
        })
        .collect();
    Rule::new(name, vertices, edges).expect("graphs are simple")
}

/// A correspondence between elements of `R1` and `L2`, given as pairs of
/// core indices `(p1, p2)`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Overlap {
    pub vertices: Vec<(usize, usize)>,
    pub edges: Vec<(usize, usize)>,
}

impl Overlap {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Number of elements of `D`.
    pub fn size(&self) -> usize {
        self.vertices.len() + self.edges.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComposeError {
    #[error("overlap is not label compatible or not a graph")]
    Mismatch,
    #[error("an element would exist only between the two rules")]
    Transient,
    #[error("composition requires a parallel edge")]
    ParallelEdge,
    #[error("a deleted vertex would keep an edge")]
    Dangling,
}

/// Checks that `o` is an injective, label-compatible span between the
/// right side of `p1` and the left side of `p2`.
pub fn check_overlap(p1: &Rule, p2: &Rule, o: &Overlap) -> Result<(), ComposeError> {
    let mut v1 = vec![None; p1.num_vertices()];
    let mut v2 = vec![false; p2.num_vertices()];
    for &(a, b) in &o.vertices {
        if a >= v1.len() || b >= v2.len() || v1[a].is_some() || v2[b] {
            return Err(ComposeError::Mismatch);
        }
        let (r, l) = (&p1.vertex(a).right, &p2.vertex(b).left);
        if r.is_none() || r != l {
            return Err(ComposeError::Mismatch);
        }
        v1[a] = Some(b);
        v2[b] = true;
    }
    let mut e1 = vec![false; p1.num_edges()];
    let mut e2 = vec![false; p2.num_edges()];
    for &(a, b) in &o.edges {
        if a >= e1.len() || b >= e2.len() || e1[a] || e2[b] {
            return Err(ComposeError::Mismatch);
        }
        let (x, y) = (&p1.edges()[a], &p2.edges()[b]);
        if x.right.is_none() || x.right != y.left {
            return Err(ComposeError::Mismatch);
        }
        let ends = (v1[x.source], v1[x.target]);
        if ends != (Some(y.source), Some(y.target)) && ends != (Some(y.target), Some(y.source)) {
            return Err(ComposeError::Mismatch);
        }
        e1[a] = true;
        e2[b] = true;
    }
    Ok(())
}

#[derive(Clone)]
struct Slot {
    left: Option<String>,
    right: Option<String>,
    gone: bool,
}

struct ESlot {
    source: usize,
    target: usize,
    slot: Slot,
}

/// Composes `p1` then `p2` along `o`. The result applied to a host has
/// the same effect as applying `p1` and then `p2` at a match that agrees
/// with `o` on the intermediate graph.
pub fn compose(
    p1: &Rule,
    p2: &Rule,
    o: &Overlap,
    name: impl Into<String>,
) -> Result<Rule, ComposeError> {
    check_overlap(p1, p2, o)?;
    let mut vs: Vec<Slot> = p1
        .vertices()
        .iter()
        .map(|v| Slot {
            left: v.left.clone(),
            right: v.right.clone(),
            gone: false,
        })
        .collect();
    let mut es: Vec<ESlot> = p1
        .edges()
        .iter()
        .map(|e| ESlot {
            source: e.source,
            target: e.target,
            slot: Slot {
                left: e.left.clone(),
                right: e.right.clone(),
                gone: false,
            },
        })
        .collect();

    fn rewrite(s: &mut Slot, right: &Option<String>) {
        s.right = right.clone();
        if s.left.is_none() && s.right.is_none() {
            s.gone = true;
        }
    }

    // p2 vertex -> composite vertex
    let mut at = vec![usize::MAX; p2.num_vertices()];
    for &(a, b) in &o.vertices {
        at[b] = a;
    }
    for (b, v) in p2.vertices().iter().enumerate() {
        if at[b] == usize::MAX {
            at[b] = vs.len();
            vs.push(Slot {
                left: v.left.clone(),
                right: v.right.clone(),
                gone: false,
            });
        } else {
            rewrite(&mut vs[at[b]], &v.right);
        }
    }

    let mut matched2 = vec![None; p2.num_edges()];
    for &(a, b) in &o.edges {
        matched2[b] = Some(a);
    }
    // matched edges and unmatched edges of L2 first, creations last
    for (b, e) in p2.edges().iter().enumerate() {
        if let Some(a) = matched2[b] {
            rewrite(&mut es[a].slot, &e.right);
        }
    }
    let find = |es: &[ESlot], x: usize, y: usize| {
        es.iter().position(|e| {
            !e.slot.gone && ((e.source, e.target) == (x, y) || (e.source, e.target) == (y, x))
        })
    };
    for (b, e) in p2.edges().iter().enumerate() {
        if matched2[b].is_some() || e.left.is_none() {
            continue;
        }
        let (x, y) = (at[e.source], at[e.target]);
        if vs[x].left.is_none() || vs[y].left.is_none() {
            return Err(ComposeError::Transient);
        }
        if find(&es, x, y).is_some() {
            return Err(ComposeError::ParallelEdge);
        }
        es.push(ESlot {
            source: x,
            target: y,
            slot: Slot {
                left: e.left.clone(),
                right: e.right.clone(),
                gone: false,
            },
        });
    }
    for e in p2.edges() {
        if e.left.is_some() {
            continue;
        }
        let (x, y) = (at[e.source], at[e.target]);
        match find(&es, x, y) {
            Some(i) if es[i].slot.right.is_none() => es[i].slot.right = e.right.clone(),
            Some(_) => return Err(ComposeError::ParallelEdge),
            None => es.push(ESlot {
                source: x,
                target: y,
                slot: Slot {
                    left: None,
                    right: e.right.clone(),
                    gone: false,
                },
            }),
        }
    }

    for e in es.iter().filter(|e| !e.slot.gone) {
        let (s, t) = (&vs[e.source], &vs[e.target]);
        if s.gone || t.gone {
            return Err(ComposeError::Dangling);
        }
        if e.slot.right.is_some() && (s.right.is_none() || t.right.is_none()) {
            return Err(ComposeError::Dangling);
        }
        if e.slot.left.is_some() && (s.left.is_none() || t.left.is_none()) {
            return Err(ComposeError::Transient);
        }
    }

    let mut index = vec![usize::MAX; vs.len()];
    let mut vertices = Vec::new();
    for (i, v) in vs.into_iter().enumerate() {
        if !v.gone {
            index[i] = vertices.len();
            vertices.push(RuleVertex::new(vertices.len() as i64, v.left, v.right));
        }
    }
    let edges = es
        .into_iter()
        .filter(|e| !e.slot.gone)
        .map(|e| RuleEdge::new(index[e.source], index[e.target], e.slot.left, e.slot.right))
        .collect();
    Ok(Rule::new(name, vertices, edges).expect("composition keeps rules well formed"))
}

/// Which common subgraphs to consider.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RcOverlapKind {
    /// The empty overlap only.
    Parallel,
    /// `L2` (or, when partial, some of its components) embedded into `R1`.
    Super { allow_partial: bool },
    /// `R1` (or some of its components) embedded into `L2`.
    Sub { allow_partial: bool },
    /// Every nonempty common subgraph up to a size cap.
    Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OverlapLimits {
    /// Maximum number of vertices plus edges in a common subgraph.
    pub common_cap: usize,
    /// Restrict common subgraphs to connected ones.
    pub connected_only: bool,
}

impl Default for OverlapLimits {
    fn default() -> Self {
        OverlapLimits {
            common_cap: 8,
            connected_only: false,
        }
    }
}

/// All overlaps of the given kind between `p1` and `p2`.
pub fn enumerate_overlaps(
    p1: &Rule,
    p2: &Rule,
    kind: RcOverlapKind,
    limits: OverlapLimits,
) -> Vec<Overlap> {
    let (r1, l2) = (p1.right(), p2.left());
    let mut out = Vec::new();
    match kind {
        RcOverlapKind::Parallel => out.push(Overlap::default()),
        RcOverlapKind::Super { allow_partial } => {
            for part in component_choices(&l2.graph, allow_partial) {
                embed(&l2.graph, &part, &r1.graph, |pv, hv| {
                    out.push(overlap_from(
                        p1,
                        p2,
                        hv.iter().zip(pv).map(|(&h, &p)| (h, p)),
                    ));
                });
            }
        }
        RcOverlapKind::Sub { allow_partial } => {
            for part in component_choices(&r1.graph, allow_partial) {
                embed(&r1.graph, &part, &l2.graph, |pv, hv| {
                    out.push(overlap_from(
                        p1,
                        p2,
                        pv.iter().zip(hv).map(|(&p, &h)| (p, h)),
                    ));
                });
            }
        }
        RcOverlapKind::Common => {
            common_subgraphs(&r1.graph, &l2.graph, limits, |pairs| {
                out.push(overlap_from(p1, p2, pairs.iter().copied()));
            });
        }
    }
    out
}

/// Builds an overlap from side-view vertex pairs `(R1 vertex, L2 vertex)`,
/// pairing every edge present between corresponding endpoints on both
/// sides.
fn overlap_from(p1: &Rule, p2: &Rule, pairs: impl Iterator<Item = (usize, usize)>) -> Overlap {
    let (r1, l2) = (p1.right(), p2.left());
    let pairs: Vec<(usize, usize)> = pairs.collect();
    let mut o = Overlap::default();
    for &(a, b) in &pairs {
        o.vertices
            .push((r1.vertex_to_core[a], l2.vertex_to_core[b]));
    }
    for (i, &(a, b)) in pairs.iter().enumerate() {
        for &(c, d) in &pairs[i + 1..] {
            if let (Some(x), Some(y)) = (r1.graph.edge_between(a, c), l2.graph.edge_between(b, d)) {
                o.edges.push((r1.edge_to_core[x], l2.edge_to_core[y]));
            }
        }
    }
    o
}

/// Vertex sets of the connected-component selections of `g`: all of
/// them, or every nonempty subset when partial.
fn component_choices(g: &Graph, allow_partial: bool) -> Vec<Vec<usize>> {
    let comps = g.components_with_maps();
    if !allow_partial || comps.is_empty() {
        return vec![g.vertices().collect()];
    }
    let n = comps.len();
    assert!(n < 20, "too many components");
    (1u32..(1 << n))
        .map(|mask| {
            let mut vs: Vec<usize> = (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .flat_map(|i| comps[i].1.iter().copied())
                .collect();
            vs.sort_unstable();
            vs
        })
        .collect()
}

/// Monomorphisms of `pattern[part]` into `host`; reports the pattern
/// vertices and their images.
fn embed<F: FnMut(&[usize], &[usize])>(pattern: &Graph, part: &[usize], host: &Graph, mut f: F) {
    let sub = pattern.induced(part);
    search_with(
        &sub,
        host,
        Mode::Mono,
        |p, h| sub.label(p) == host.label(h),
        |pe, he| sub.edge(pe).label == host.edge(he).label,
        |m| {
            f(part, m);
            ControlFlow::Continue(())
        },
    );
}

/// Nonempty partial injections between vertices of `a` and `b` with equal
/// labels, such that corresponding vertex pairs that are adjacent on both
/// sides carry equal edge labels. Each is reported once as sorted pairs.
fn common_subgraphs<F: FnMut(&[(usize, usize)])>(
    a: &Graph,
    b: &Graph,
    limits: OverlapLimits,
    mut f: F,
) {
    struct St<'g> {
        a: &'g Graph,
        b: &'g Graph,
        used: Vec<bool>,
        pairs: Vec<(usize, usize)>,
        size: usize,
    }
    fn go<F: FnMut(&[(usize, usize)])>(st: &mut St, i: usize, limits: OverlapLimits, f: &mut F) {
        if i == st.a.num_vertices() {
            if !st.pairs.is_empty() && (!limits.connected_only || connected(st.a, &st.pairs)) {
                f(&st.pairs);
            }
            return;
        }
        go(st, i + 1, limits, f);
        for j in st.b.vertices() {
            if st.used[j] || st.a.label(i) != st.b.label(j) {
                continue;
            }
            let mut added = 1;
            let mut ok = true;
            for &(x, y) in &st.pairs {
                if let (Some(e), Some(g)) = (st.a.edge_between(i, x), st.b.edge_between(j, y)) {
                    if st.a.edge(e).label != st.b.edge(g).label {
                        ok = false;
                        break;
                    }
                    added += 1;
                }
            }
            if !ok || st.size + added > limits.common_cap {
                continue;
            }
            st.used[j] = true;
            st.pairs.push((i, j));
            st.size += added;
            go(st, i + 1, limits, f);
            st.size -= added;
            st.pairs.pop();
            st.used[j] = false;
        }
    }
    fn connected(a: &Graph, pairs: &[(usize, usize)]) -> bool {
        let vs: Vec<usize> = pairs.iter().map(|p| p.0).collect();
        let mut seen = vec![false; vs.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(k) = stack.pop() {
            for (m, &w) in vs.iter().enumerate() {
                if !seen[m] && a.edge_between(vs[k], w).is_some() {
                    seen[m] = true;
                    stack.push(m);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
    let mut st = St {
        a,
        b,
        used: vec![false; b.num_vertices()],
        pairs: Vec::new(),
        size: 0,
    };
    go(&mut st, 0, limits, &mut f);
}

/// All successful compositions of `p1` and `p2` under `kind`, in overlap
/// order and without deduplication.
pub fn compose_all(
    p1: &Rule,
    p2: &Rule,
    kind: RcOverlapKind,
    limits: OverlapLimits,
) -> Vec<(Overlap, Rule)> {
    enumerate_overlaps(p1, p2, kind, limits)
        .into_iter()
        .filter_map(|o| compose(p1, p2, &o, "").ok().map(|r| (o, r)))
        .collect()
}
