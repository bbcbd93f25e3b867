//! Rule application over multisets of connected graphs.
//!
//! A host for a rule is assembled on demand from copies of universe
//! graphs. Each connected component of `L` is embedded into one copy;
//! copies are allocated in first-use order, so the copies are exactly the
//! educts (tails) and every one of them is hit by the match. A candidate
//! match becomes a derivation when the dangling condition holds and the
//! second pushout exists (no created edge would run parallel to an
//! existing one).

use std::collections::HashMap;
use std::ops::ControlFlow;
use std::sync::Arc;

use crate::graph::{Graph, GraphBuilder, VertexId};
use crate::morphism::{search_with, Mode};
use crate::registry::{ClassId, GraphRegistry};
use crate::rule::{Membership, Rule};

/// An injective occurrence of `L` in a multiset of graph copies.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DerivationMatch {
    /// Class of each copy, in allocation order.
    pub tails: Vec<ClassId>,
    /// For every vertex of `L` (indexed as in `rule.left_graph()`), the
    /// copy and vertex it is mapped to.
    pub vertex_map: Vec<(usize, VertexId)>,
}

impl DerivationMatch {
    /// Assembles the host graph (disjoint union of the copies) and the
    /// match as a map from `L` vertices into it.
    pub fn assemble(&self, registry: &GraphRegistry) -> (Graph, Vec<VertexId>) {
        let copies: Vec<&Graph> = self
            .tails
            .iter()
            .map(|&c| registry.get(c).as_ref())
            .collect();
        self.assemble_from(&copies)
    }

    pub fn assemble_from(&self, copies: &[&Graph]) -> (Graph, Vec<VertexId>) {
        let mut offsets = Vec::with_capacity(copies.len());
        let mut total = 0;
        for g in copies {
            offsets.push(total);
            total += g.num_vertices();
        }
        let host = Graph::disjoint_union(copies.iter().copied());
        let map = self
            .vertex_map
            .iter()
            .map(|&(c, v)| offsets[c] + v)
            .collect();
        (host, map)
    }
}

/// A proper direct derivation, identified by its rule and the tail and
/// head classes (both sorted); `witness` is the first match found.
#[derive(Debug, Clone)]
pub struct Derivation {
    pub rule: Arc<Rule>,
    pub tails: Vec<ClassId>,
    pub heads: Vec<ClassId>,
    pub witness: DerivationMatch,
}

/// Caps on the candidate space.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EnumerationLimits {
    /// Maximum number of copies; defaults to the number of components of
    /// `L`, which properness already forces.
    pub max_copies: Option<usize>,
    /// Universe graphs with more vertices than this are not used as
    /// educts.
    pub max_universe_vertices: Option<usize>,
}

/// True iff every host edge incident to the image of a deleted vertex is
/// itself the image of an `L` edge. `map` sends `L` vertices to `host`.
pub fn check_dangling(rule: &Rule, host: &Graph, map: &[VertexId]) -> bool {
    let left = rule.left();
    left.vertex_to_core.iter().enumerate().all(|(lv, &cv)| {
        rule.vertex(cv).membership() != Membership::Left
            || host.degree(map[lv]) == left.graph.degree(lv)
    })
}

/// True iff no created edge joins two preserved vertices whose images are
/// already adjacent. Such an edge would need to be parallel to the
/// existing one, and the pushout of simple graphs is then undefined.
pub fn check_pushout_exists(rule: &Rule, host: &Graph, map: &[VertexId]) -> bool {
    let left = rule.left();
    rule.edges().iter().all(|e| {
        if e.membership() != Membership::Right {
            return true;
        }
        match (left.core_to_vertex[e.source], left.core_to_vertex[e.target]) {
            (Some(a), Some(b)) => host.edge_between(map[a], map[b]).is_none(),
            _ => true,
        }
    })
}

/// All matches of `L` into a single host graph that satisfy both
/// application conditions, without any properness requirement.
pub fn for_each_host_match<F>(rule: &Rule, host: &Graph, mut visit: F)
where
    F: FnMut(&[VertexId]) -> ControlFlow<()>,
{
    let l = rule.left_graph();
    search_with(
        l,
        host,
        Mode::Mono,
        |p, h| l.label(p) == host.label(h),
        |pe, he| l.edge(pe).label == host.edge(he).label,
        |m| {
            if check_dangling(rule, host, m) && check_pushout_exists(rule, host, m) {
                visit(m)
            } else {
                ControlFlow::Continue(())
            }
        },
    );
}

/// Rewrites `host` at the match `map`: deletes the images of `L \ K`,
/// relabels kept elements that change label and adds `R \ K`. The caller
/// must have checked both application conditions.
pub fn apply_match(rule: &Rule, host: &Graph, map: &[VertexId]) -> Graph {
    let left = rule.left();
    let mut deleted_vertex = vec![false; host.num_vertices()];
    let mut vertex_label: Vec<&str> = host.labels().iter().map(String::as_str).collect();
    for (lv, &cv) in left.vertex_to_core.iter().enumerate() {
        let rv = rule.vertex(cv);
        match &rv.right {
            None => deleted_vertex[map[lv]] = true,
            Some(r) => vertex_label[map[lv]] = r,
        }
    }
    let mut deleted_edge = vec![false; host.num_edges()];
    let mut edge_label: Vec<&str> = host.edges().iter().map(|e| e.label.as_str()).collect();
    for &ce in &left.edge_to_core {
        let e = &rule.edges()[ce];
        let (a, b) = (
            map[left.core_to_vertex[e.source].unwrap()],
            map[left.core_to_vertex[e.target].unwrap()],
        );
        let he = host.edge_between(a, b).expect("match preserves adjacency");
        match &e.right {
            None => deleted_edge[he] = true,
            Some(r) => edge_label[he] = r,
        }
    }

    let mut b = GraphBuilder::new();
    let mut new_index = vec![usize::MAX; host.num_vertices()];
    for v in host.vertices() {
        if !deleted_vertex[v] {
            new_index[v] = b.add_vertex_unchecked(vertex_label[v], host.external_id(v));
        }
    }
    for (i, e) in host.edges().iter().enumerate() {
        if !deleted_edge[i] {
            let (s, t) = (new_index[e.source], new_index[e.target]);
            assert!(
                s != usize::MAX && t != usize::MAX,
                "dangling condition violated"
            );
            b.add_edge_unchecked(s, t, edge_label[i]);
        }
    }
    // core vertex -> result vertex
    let mut core_image = vec![usize::MAX; rule.num_vertices()];
    for (lv, &cv) in left.vertex_to_core.iter().enumerate() {
        core_image[cv] = new_index[map[lv]];
    }
    for (cv, v) in rule.vertices().iter().enumerate() {
        if v.membership() == Membership::Right {
            core_image[cv] = b.add_vertex_unchecked(v.right.as_deref().unwrap(), -1);
        }
    }
    for e in rule.edges() {
        if e.membership() == Membership::Right {
            let (s, t) = (core_image[e.source], core_image[e.target]);
            assert!(!b.has_edge(s, t), "pushout does not exist");
            b.add_edge_unchecked(s, t, e.right.as_deref().unwrap());
        }
    }
    b.build()
}

/// Enumerates candidate matches of `rule` over multisets of copies of the
/// `universe` graphs, restricted to those with at least one tail for which
/// `active` holds. Every reported match satisfies the dangling condition
/// and the pushout-existence condition. The visitor also receives the
/// copies' graphs.
pub fn for_each_match<A, F>(
    rule: &Rule,
    universe: &[(ClassId, Arc<Graph>)],
    active: A,
    limits: EnumerationLimits,
    mut visit: F,
) where
    A: Fn(ClassId) -> bool,
    F: FnMut(&DerivationMatch, &[&Graph]) -> ControlFlow<()>,
{
    let components = rule.left_graph().components_with_maps();
    let k = components.len();
    if k == 0 {
        // no copies means no active tail
        return;
    }
    let max_copies = limits.max_copies.unwrap_or(k).min(k);
    let usable: Vec<usize> = (0..universe.len())
        .filter(|&u| {
            limits
                .max_universe_vertices
                .is_none_or(|cap| universe[u].1.num_vertices() <= cap)
        })
        .collect();

    // monomorphisms of each L component into each universe graph
    let mut monos: Vec<Vec<Vec<Vec<VertexId>>>> = vec![vec![Vec::new(); universe.len()]; k];
    for (i, (comp, _)) in components.iter().enumerate() {
        for &u in &usable {
            let host = universe[u].1.as_ref();
            let mut found = Vec::new();
            search_with(
                comp,
                host,
                Mode::Mono,
                |p, h| comp.label(p) == host.label(h),
                |pe, he| comp.edge(pe).label == host.edge(he).label,
                |m| {
                    found.push(m.to_vec());
                    ControlFlow::Continue(())
                },
            );
            monos[i][u] = found;
        }
    }

    let mut state = AssignState {
        rule,
        universe,
        components: &components,
        monos: &monos,
        usable: &usable,
        max_copies,
        copies: Vec::new(),
        used: Vec::new(),
        vertex_map: vec![(usize::MAX, usize::MAX); rule.left_graph().num_vertices()],
    };
    let _ = state.assign(0, &active, &mut visit);
}

struct AssignState<'a> {
    rule: &'a Rule,
    universe: &'a [(ClassId, Arc<Graph>)],
    components: &'a [(Graph, Vec<VertexId>)],
    monos: &'a [Vec<Vec<Vec<VertexId>>>],
    usable: &'a [usize],
    max_copies: usize,
    copies: Vec<usize>,
    used: Vec<Vec<bool>>,
    vertex_map: Vec<(usize, VertexId)>,
}

impl<'a> AssignState<'a> {
    fn assign<A, F>(&mut self, i: usize, active: &A, visit: &mut F) -> ControlFlow<()>
    where
        A: Fn(ClassId) -> bool,
        F: FnMut(&DerivationMatch, &[&Graph]) -> ControlFlow<()>,
    {
        if i == self.components.len() {
            return self.finish(active, visit);
        }
        for j in 0..self.copies.len() {
            let u = self.copies[j];
            for m in &self.monos[i][u] {
                if m.iter().any(|&h| self.used[j][h]) {
                    continue;
                }
                self.place(i, j, m, true);
                let r = self.assign(i + 1, active, visit);
                self.place(i, j, m, false);
                r?;
            }
        }
        if self.copies.len() < self.max_copies {
            for &u in self.usable {
                if self.monos[i][u].is_empty() {
                    continue;
                }
                let j = self.copies.len();
                self.copies.push(u);
                self.used
                    .push(vec![false; self.universe[u].1.num_vertices()]);
                for m in &self.monos[i][u] {
                    self.place(i, j, m, true);
                    let r = self.assign(i + 1, active, visit);
                    self.place(i, j, m, false);
                    if r.is_break() {
                        self.copies.pop();
                        self.used.pop();
                        return r;
                    }
                }
                self.copies.pop();
                self.used.pop();
            }
        }
        ControlFlow::Continue(())
    }

    fn place(&mut self, i: usize, copy: usize, m: &[VertexId], on: bool) {
        let to_left = &self.components[i].1;
        for (cv, &h) in m.iter().enumerate() {
            self.used[copy][h] = on;
            self.vertex_map[to_left[cv]] = if on {
                (copy, h)
            } else {
                (usize::MAX, usize::MAX)
            };
        }
    }

    fn finish<A, F>(&mut self, active: &A, visit: &mut F) -> ControlFlow<()>
    where
        A: Fn(ClassId) -> bool,
        F: FnMut(&DerivationMatch, &[&Graph]) -> ControlFlow<()>,
    {
        if !self.copies.iter().any(|&u| active(self.universe[u].0)) {
            return ControlFlow::Continue(());
        }
        let rule = self.rule;
        let left = rule.left();
        let copies: Vec<&Graph> = self
            .copies
            .iter()
            .map(|&u| self.universe[u].1.as_ref())
            .collect();
        // dangling, per copy
        for (lv, &cv) in left.vertex_to_core.iter().enumerate() {
            if rule.vertex(cv).membership() == Membership::Left {
                let (c, h) = self.vertex_map[lv];
                if copies[c].degree(h) != left.graph.degree(lv) {
                    return ControlFlow::Continue(());
                }
            }
        }
        // pushout existence, per copy
        for e in rule.edges() {
            if e.membership() != Membership::Right {
                continue;
            }
            if let (Some(a), Some(b)) =
                (left.core_to_vertex[e.source], left.core_to_vertex[e.target])
            {
                let ((ca, ha), (cb, hb)) = (self.vertex_map[a], self.vertex_map[b]);
                if ca == cb && copies[ca].edge_between(ha, hb).is_some() {
                    return ControlFlow::Continue(());
                }
            }
        }
        let m = DerivationMatch {
            tails: self.copies.iter().map(|&u| self.universe[u].0).collect(),
            vertex_map: self.vertex_map.clone(),
        };
        visit(&m, &copies)
    }
}

/// Head graphs of a match: the connected components of the result.
pub fn heads_of(rule: &Rule, m: &DerivationMatch, copies: &[&Graph]) -> Vec<Graph> {
    let (host, map) = m.assemble_from(copies);
    apply_match(rule, &host, &map).connected_components()
}

/// Sorted class multiset key of a derivation.
pub type DerivationKey = (Vec<ClassId>, Vec<ClassId>);

/// All proper derivations of `rule` over `universe` with at least one
/// tail in `active`, deduplicated by (tails, heads). Head graphs are
/// registered in `registry`.
pub fn enumerate_derivations(
    rule: &Arc<Rule>,
    universe: &[ClassId],
    active: &[ClassId],
    registry: &mut GraphRegistry,
    limits: EnumerationLimits,
) -> Vec<Derivation> {
    let graphs: Vec<(ClassId, Arc<Graph>)> = universe
        .iter()
        .map(|&c| (c, registry.get(c).clone()))
        .collect();
    let active: std::collections::HashSet<ClassId> = active.iter().copied().collect();
    let mut found: Vec<(DerivationMatch, Vec<Graph>)> = Vec::new();
    for_each_match(
        rule,
        &graphs,
        |c| active.contains(&c),
        limits,
        |m, copies| {
            found.push((m.clone(), heads_of(rule, m, copies)));
            ControlFlow::Continue(())
        },
    );
    let mut seen: HashMap<DerivationKey, usize> = HashMap::new();
    let mut out = Vec::new();
    for (m, heads) in found {
        let mut heads: Vec<ClassId> = heads
            .into_iter()
            .map(|h| registry.insert_derived(h).0)
            .collect();
        heads.sort_unstable();
        let mut tails = m.tails.clone();
        tails.sort_unstable();
        let key = (tails, heads);
        if seen.contains_key(&key) {
            continue;
        }
        seen.insert(key.clone(), out.len());
        out.push(Derivation {
            rule: rule.clone(),
            tails: key.0,
            heads: key.1,
            witness: m,
        });
    }
    out
}
