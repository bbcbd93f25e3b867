//! Slow reference implementations. They only use the plain graph and
//! rule accessors, never the library's matchers or rewriting code.

use std::collections::BTreeMap;

use grammod::{Graph, GraphBuilder, Rule};

fn edge_label(g: &Graph, u: usize, v: usize) -> Option<&str> {
    g.edge_between(u, v).map(|e| g.edge(e).label.as_str())
}

/// Calls `visit` with every injective map `0..n -> 0..m`.
pub fn for_each_injection(n: usize, m: usize, visit: &mut dyn FnMut(&[usize])) {
    fn go(
        n: usize,
        m: usize,
        cur: &mut Vec<usize>,
        used: &mut [bool],
        visit: &mut dyn FnMut(&[usize]),
    ) {
        if cur.len() == n {
            visit(cur);
            return;
        }
        for t in 0..m {
            if !used[t] {
                used[t] = true;
                cur.push(t);
                go(n, m, cur, used, visit);
                cur.pop();
                used[t] = false;
            }
        }
    }
    if n <= m {
        go(n, m, &mut Vec::new(), &mut vec![false; m], visit);
    }
}

fn is_mono(p: &Graph, h: &Graph, f: &[usize]) -> bool {
    p.vertices().all(|v| p.label(v) == h.label(f[v]))
        && p.edges()
            .iter()
            .all(|e| edge_label(h, f[e.source], f[e.target]) == Some(e.label.as_str()))
}

/// Monomorphisms by trying all injections.
pub fn count_mono(p: &Graph, h: &Graph) -> usize {
    let mut n = 0;
    for_each_injection(p.num_vertices(), h.num_vertices(), &mut |f| {
        if is_mono(p, h, f) {
            n += 1;
        }
    });
    n
}

/// Isomorphisms by trying all bijections.
pub fn count_iso(a: &Graph, b: &Graph) -> usize {
    if a.num_vertices() != b.num_vertices() || a.num_edges() != b.num_edges() {
        return 0;
    }
    count_mono(a, b)
}

/// Backtracking isomorphism test for graphs too large for `count_iso`.
pub fn isomorphic(a: &Graph, b: &Graph) -> bool {
    if a.num_vertices() != b.num_vertices() || a.num_edges() != b.num_edges() {
        return false;
    }
    let hist = |g: &Graph| {
        let mut m: BTreeMap<(String, usize), usize> = BTreeMap::new();
        for v in g.vertices() {
            *m.entry((g.label(v).to_owned(), g.degree(v))).or_default() += 1;
        }
        m
    };
    if hist(a) != hist(b) {
        return false;
    }
    fn go(a: &Graph, b: &Graph, f: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let v = f.len();
        if v == a.num_vertices() {
            return true;
        }
        for t in b.vertices() {
            if used[t] || a.label(v) != b.label(t) || a.degree(v) != b.degree(t) {
                continue;
            }
            if (0..v).any(|u| edge_label(a, u, v) != edge_label(b, f[u], t)) {
                continue;
            }
            used[t] = true;
            f.push(t);
            if go(a, b, f, used) {
                return true;
            }
            f.pop();
            used[t] = false;
        }
        false
    }
    go(a, b, &mut Vec::new(), &mut vec![false; b.num_vertices()])
}

/// Multiset equality of graphs up to isomorphism.
pub fn same_multiset(a: &[Graph], b: &[Graph]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    a.iter().all(
        |x| match (0..b.len()).find(|&i| !used[i] && isomorphic(x, &b[i])) {
            Some(i) => {
                used[i] = true;
                true
            }
            None => false,
        },
    )
}

/// The left-hand side of `r` as core vertex ids, labels and edges.
struct LeftSide {
    core: Vec<usize>,
    labels: Vec<String>,
    edges: Vec<(usize, usize, String)>,
}

fn left_side(r: &Rule) -> LeftSide {
    let core: Vec<usize> = (0..r.num_vertices())
        .filter(|&v| r.vertex(v).left.is_some())
        .collect();
    let pos = |c: usize| core.iter().position(|&x| x == c).unwrap();
    LeftSide {
        labels: core
            .iter()
            .map(|&c| r.vertex(c).left.clone().unwrap())
            .collect(),
        edges: r
            .edges()
            .iter()
            .filter_map(|e| {
                e.left
                    .as_ref()
                    .map(|l| (pos(e.source), pos(e.target), l.clone()))
            })
            .collect(),
        core,
    }
}

/// Every label-preserving injective map from the rule's left side into
/// `host`, as host vertex per core vertex (`None` for created vertices).
pub fn left_matches(r: &Rule, host: &Graph) -> Vec<Vec<Option<usize>>> {
    let l = left_side(r);
    let n = l.core.len();
    let mut out = Vec::new();
    fn go(
        l: &LeftSide,
        host: &Graph,
        f: &mut Vec<usize>,
        used: &mut [bool],
        out: &mut Vec<Vec<usize>>,
    ) {
        let v = f.len();
        if v == l.core.len() {
            out.push(f.clone());
            return;
        }
        for t in host.vertices() {
            if used[t] || host.label(t) != l.labels[v] {
                continue;
            }
            let ok = l.edges.iter().all(|(a, b, lab)| {
                let (a, b) = (*a, *b);
                if a.max(b) != v {
                    return true;
                }
                let o = if a == v { b } else { a };
                edge_label(host, f[o], t) == Some(lab.as_str())
            });
            if ok {
                used[t] = true;
                f.push(t);
                go(l, host, f, used, out);
                f.pop();
                used[t] = false;
            }
        }
    }
    let mut raw = Vec::new();
    go(
        &l,
        host,
        &mut Vec::new(),
        &mut vec![false; host.num_vertices()],
        &mut raw,
    );
    for f in raw {
        let mut m = vec![None; r.num_vertices()];
        for i in 0..n {
            m[l.core[i]] = Some(f[i]);
        }
        out.push(m);
    }
    out
}

/// Dangling condition: every host edge at a deleted vertex is matched.
pub fn dangling_ok(r: &Rule, host: &Graph, m: &[Option<usize>]) -> bool {
    (0..r.num_vertices())
        .filter(|&c| r.vertex(c).left.is_some() && r.vertex(c).right.is_none())
        .all(|c| {
            let hv = m[c].unwrap();
            host.neighbours(hv).iter().all(|&(w, _)| {
                r.edges().iter().any(|e| {
                    e.left.is_some()
                        && ((m[e.source] == Some(hv) && m[e.target] == Some(w))
                            || (m[e.target] == Some(hv) && m[e.source] == Some(w)))
                })
            })
        })
}

/// Pushout existence: no created edge lands on an existing host edge.
pub fn pushout_ok(r: &Rule, host: &Graph, m: &[Option<usize>]) -> bool {
    r.edges().iter().all(|e| {
        if e.left.is_some() {
            return true;
        }
        match (m[e.source], m[e.target]) {
            (Some(a), Some(b)) => edge_label(host, a, b).is_none(),
            _ => true,
        }
    })
}

/// Rewrites `host` along `m`. Returns the result and, per core vertex of
/// the rule, its image in the result (`None` for deleted vertices).
pub fn rewrite(r: &Rule, host: &Graph, m: &[Option<usize>]) -> (Graph, Vec<Option<usize>>) {
    let mut keep = vec![true; host.num_vertices()];
    let mut vlabel: Vec<String> = host.labels().to_vec();
    for (c, v) in r.vertices().iter().enumerate() {
        if let Some(h) = m[c] {
            match &v.right {
                None => keep[h] = false,
                Some(l) => vlabel[h] = l.clone(),
            }
        }
    }
    let mut elabel: BTreeMap<(usize, usize), Option<String>> = BTreeMap::new();
    for e in host.edges() {
        elabel.insert(
            (e.source.min(e.target), e.source.max(e.target)),
            Some(e.label.clone()),
        );
    }
    for e in r.edges() {
        if e.left.is_some() {
            let (a, b) = (m[e.source].unwrap(), m[e.target].unwrap());
            elabel.insert((a.min(b), a.max(b)), e.right.clone());
        }
    }
    let mut b = GraphBuilder::new();
    let mut idx = vec![usize::MAX; host.num_vertices()];
    for v in host.vertices() {
        if keep[v] {
            idx[v] = b.add_vertex(&vlabel[v]).unwrap();
        }
    }
    for ((u, v), l) in &elabel {
        if let Some(l) = l {
            assert!(keep[*u] && keep[*v], "dangling edge");
            b.add_edge(idx[*u], idx[*v], l).unwrap();
        }
    }
    let mut image = vec![None; r.num_vertices()];
    for c in 0..r.num_vertices() {
        let v = r.vertex(c);
        image[c] = match (m[c], &v.right) {
            (Some(h), Some(_)) => Some(idx[h]),
            (None, Some(l)) => Some(b.add_vertex(l).unwrap()),
            _ => None,
        };
    }
    for e in r.edges() {
        if e.left.is_none() {
            let (u, v) = (image[e.source].unwrap(), image[e.target].unwrap());
            b.add_edge(u, v, e.right.as_deref().unwrap())
                .expect("pushout exists");
        }
    }
    (b.build(), image)
}

/// Host union of `copies` and the copy each host vertex came from.
pub fn union(copies: &[&Graph]) -> (Graph, Vec<usize>) {
    let mut owner = Vec::new();
    for (i, g) in copies.iter().enumerate() {
        owner.extend(std::iter::repeat_n(i, g.num_vertices()));
    }
    (Graph::disjoint_union(copies.iter().copied()), owner)
}

fn touches_all(owner: &[usize], ncopies: usize, hit: impl Iterator<Item = usize>) -> bool {
    let mut seen = vec![false; ncopies];
    for v in hit {
        seen[owner[v]] = true;
    }
    seen.into_iter().all(|x| x)
}

/// Head multisets of every proper derivation of `r` on exactly the given
/// copies.
pub fn derive(r: &Rule, copies: &[&Graph]) -> Vec<Vec<Graph>> {
    let (host, owner) = union(copies);
    let mut out = Vec::new();
    for m in left_matches(r, &host) {
        if !touches_all(&owner, copies.len(), m.iter().flatten().copied()) {
            continue;
        }
        if dangling_ok(r, &host, &m) && pushout_ok(r, &host, &m) {
            out.push(rewrite(r, &host, &m).0.connected_components());
        }
    }
    out
}

/// Head multisets of applying `p1` and then `p2` on the given copies,
/// where the second match glues exactly the pairs in `overlap` (core ids
/// of `p1` and `p2`) and is otherwise disjoint from the first comatch.
pub fn derive_sequential(
    p1: &Rule,
    p2: &Rule,
    overlap: &[(usize, usize)],
    copies: &[&Graph],
) -> Vec<Vec<Graph>> {
    let (host, owner) = union(copies);
    let mut out = Vec::new();
    for m1 in left_matches(p1, &host) {
        if !dangling_ok(p1, &host, &m1) || !pushout_ok(p1, &host, &m1) {
            continue;
        }
        let (x, image1) = rewrite(p1, &host, &m1);
        // result vertex -> host vertex, for surviving host vertices
        let mut back = vec![None; x.num_vertices()];
        {
            let mut k = 0;
            let deleted: Vec<usize> = (0..p1.num_vertices())
                .filter(|&c| p1.vertex(c).right.is_none())
                .map(|c| m1[c].unwrap())
                .collect();
            for v in host.vertices() {
                if !deleted.contains(&v) {
                    back[k] = Some(v);
                    k += 1;
                }
            }
        }
        let comatch: Vec<usize> = image1.iter().flatten().copied().collect();
        for m2 in left_matches(p2, &x) {
            let glued = (0..p2.num_vertices()).all(|c2| {
                let Some(h) = m2[c2] else { return true };
                match overlap.iter().find(|&&(_, b)| b == c2) {
                    Some(&(c1, _)) => image1[c1] == Some(h),
                    None => !comatch.contains(&h),
                }
            });
            if !glued || !dangling_ok(p2, &x, &m2) || !pushout_ok(p2, &x, &m2) {
                continue;
            }
            let hit = m1
                .iter()
                .flatten()
                .copied()
                .chain(m2.iter().flatten().filter_map(|&h| back[h]));
            if !touches_all(&owner, copies.len(), hit) {
                continue;
            }
            out.push(rewrite(p2, &x, &m2).0.connected_components());
        }
    }
    out
}

/// Distinct entries of `sets` up to multiset isomorphism.
pub fn distinct(sets: Vec<Vec<Graph>>) -> Vec<Vec<Graph>> {
    let mut out: Vec<Vec<Graph>> = Vec::new();
    for s in sets {
        if !out.iter().any(|o| same_multiset(o, &s)) {
            out.push(s);
        }
    }
    out
}
