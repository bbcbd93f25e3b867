//! Labelled simple undirected graphs.
//!
//! A [`Graph`] is immutable once built. Vertex ids are dense (`0..n`) and
//! stable; the ids used by whatever produced the graph (a GML file, a
//! SMILES string) are kept in a side table for error messages and for
//! writing the graph back out.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, HashMap};
use std::hash::{Hash, Hasher};

use thiserror::Error;

/// Dense vertex index into a [`Graph`].
pub type VertexId = usize;
/// Dense edge index into a [`Graph`].
pub type EdgeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("duplicate vertex id {0}")]
    DuplicateVertex(i64),
    #[error("edge endpoint {0} is not a declared vertex")]
    UnknownVertex(i64),
    #[error("loop edge on vertex {0}")]
    Loop(i64),
    #[error("parallel edge between {0} and {1}")]
    ParallelEdge(i64, i64),
    #[error("empty label on {0}")]
    EmptyLabel(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub source: VertexId,
    pub target: VertexId,
    pub label: String,
}

impl Edge {
    /// The endpoint that is not `v`.
    pub fn other(&self, v: VertexId) -> VertexId {
        if self.source == v {
            self.target
        } else {
            self.source
        }
    }
}

#[derive(Debug, Clone)]
pub struct Graph {
    name: String,
    labels: Vec<String>,
    edges: Vec<Edge>,
    // (neighbour, edge), sorted by neighbour
    adjacency: Vec<Vec<(VertexId, EdgeId)>>,
    external_ids: Vec<i64>,
}

impl Graph {
    /// Builds a graph from externally numbered vertices and edges.
    ///
    /// Vertex ids may be arbitrary integers; they are kept as external ids
    /// while the graph itself is indexed densely in declaration order.
    pub fn from_parts<'a, V, E>(vertices: V, edges: E) -> Result<Graph, GraphError>
    where
        V: IntoIterator<Item = (i64, &'a str)>,
        E: IntoIterator<Item = (i64, i64, &'a str)>,
    {
        let mut builder = GraphBuilder::new();
        let mut index = HashMap::new();
        for (id, label) in vertices {
            if index.contains_key(&id) {
                return Err(GraphError::DuplicateVertex(id));
            }
            let v = builder.add_vertex_with_id(label, id)?;
            index.insert(id, v);
        }
        for (s, t, label) in edges {
            let a = *index.get(&s).ok_or(GraphError::UnknownVertex(s))?;
            let b = *index.get(&t).ok_or(GraphError::UnknownVertex(t))?;
            builder.add_edge(a, b, label)?;
        }
        Ok(builder.build())
    }

    pub fn empty() -> Graph {
        GraphBuilder::new().build()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Graph {
        self.name = name.into();
        self
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn num_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn vertices(&self) -> std::ops::Range<VertexId> {
        0..self.labels.len()
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e]
    }

    pub fn neighbours(&self, v: VertexId) -> &[(VertexId, EdgeId)] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v].len()
    }

    pub fn external_id(&self, v: VertexId) -> i64 {
        self.external_ids[v]
    }

    pub fn edge_between(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        let adj = &self.adjacency[u];
        adj.binary_search_by_key(&v, |&(w, _)| w)
            .ok()
            .map(|i| adj[i].1)
    }

    /// Number of vertices whose label is exactly `label`.
    pub fn v_label_count(&self, label: &str) -> usize {
        self.labels.iter().filter(|l| *l == label).count()
    }

    pub fn is_connected(&self) -> bool {
        self.component_assignment().1 <= 1
    }

    /// Component index of every vertex and the number of components.
    /// Components are numbered by their lowest vertex id.
    pub fn component_assignment(&self) -> (Vec<usize>, usize) {
        let n = self.num_vertices();
        let mut comp = vec![usize::MAX; n];
        let mut count = 0;
        let mut stack = Vec::new();
        for root in 0..n {
            if comp[root] != usize::MAX {
                continue;
            }
            comp[root] = count;
            stack.push(root);
            while let Some(v) = stack.pop() {
                for &(w, _) in &self.adjacency[v] {
                    if comp[w] == usize::MAX {
                        comp[w] = count;
                        stack.push(w);
                    }
                }
            }
            count += 1;
        }
        (comp, count)
    }

    /// Connected components, ordered by lowest contained vertex id.
    pub fn connected_components(&self) -> Vec<Graph> {
        self.components_with_maps()
            .into_iter()
            .map(|(g, _)| g)
            .collect()
    }

    /// Connected components together with the map from component vertex to
    /// vertex of `self`.
    pub fn components_with_maps(&self) -> Vec<(Graph, Vec<VertexId>)> {
        let (comp, count) = self.component_assignment();
        let mut members: Vec<Vec<VertexId>> = vec![Vec::new(); count];
        for v in self.vertices() {
            members[comp[v]].push(v);
        }
        members
            .into_iter()
            .map(|vs| {
                let g = self.induced(&vs);
                (g, vs)
            })
            .collect()
    }

    /// Subgraph induced by `vs`, vertices renumbered in the given order.
    pub fn induced(&self, vs: &[VertexId]) -> Graph {
        let mut local = vec![usize::MAX; self.num_vertices()];
        let mut b = GraphBuilder::new();
        for &v in vs {
            local[v] = b.add_vertex_unchecked(&self.labels[v], self.external_ids[v]);
        }
        for e in &self.edges {
            let (a, c) = (local[e.source], local[e.target]);
            if a != usize::MAX && c != usize::MAX {
                b.add_edge_unchecked(a, c, &e.label);
            }
        }
        b.build().with_name(self.name.clone())
    }

    /// Disjoint union; vertex ids of the i-th graph are shifted by the
    /// total size of the graphs before it.
    pub fn disjoint_union<'a>(graphs: impl IntoIterator<Item = &'a Graph>) -> Graph {
        let mut b = GraphBuilder::new();
        for g in graphs {
            let offset = b.num_vertices();
            for v in g.vertices() {
                b.add_vertex_unchecked(&g.labels[v], g.external_ids[v]);
            }
            for e in &g.edges {
                b.add_edge_unchecked(e.source + offset, e.target + offset, &e.label);
            }
        }
        b.build()
    }

    /// Isomorphism invariant: vertex/edge counts plus a few rounds of
    /// label refinement. Isomorphic graphs always share the value.
    pub fn invariant(&self) -> u64 {
        let n = self.num_vertices();
        let mut colours: Vec<u64> = self
            .labels
            .iter()
            .zip(&self.adjacency)
            .map(|(l, adj)| hash_of(&(l, adj.len())))
            .collect();
        let rounds = 3.min(n);
        for _ in 0..rounds {
            let next: Vec<u64> = (0..n)
                .map(|v| {
                    let mut nb: Vec<u64> = self.adjacency[v]
                        .iter()
                        .map(|&(w, e)| hash_of(&(colours[w], &self.edges[e].label)))
                        .collect();
                    nb.sort_unstable();
                    hash_of(&(colours[v], nb))
                })
                .collect();
            colours = next;
        }
        colours.sort_unstable();
        hash_of(&(n, self.num_edges(), colours))
    }

    /// Multiset of vertex labels.
    pub fn label_histogram(&self) -> BTreeMap<&str, usize> {
        let mut h = BTreeMap::new();
        for l in &self.labels {
            *h.entry(l.as_str()).or_insert(0) += 1;
        }
        h
    }
}

fn hash_of<T: Hash>(t: &T) -> u64 {
    let mut h = DefaultHasher::new();
    t.hash(&mut h);
    h.finish()
}

/// Incremental construction of a [`Graph`] with dense vertex ids.
#[derive(Debug, Default, Clone)]
pub struct GraphBuilder {
    name: String,
    labels: Vec<String>,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<(VertexId, EdgeId)>>,
    external_ids: Vec<i64>,
}

impl GraphBuilder {
    pub fn new() -> GraphBuilder {
        GraphBuilder::default()
    }

    pub fn named(name: impl Into<String>) -> GraphBuilder {
        GraphBuilder {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn add_vertex(&mut self, label: &str) -> Result<VertexId, GraphError> {
        let id = self.labels.len() as i64;
        self.add_vertex_with_id(label, id)
    }

    pub fn add_vertex_with_id(&mut self, label: &str, id: i64) -> Result<VertexId, GraphError> {
        if label.is_empty() {
            return Err(GraphError::EmptyLabel(format!("vertex {id}")));
        }
        Ok(self.add_vertex_unchecked(label, id))
    }

    pub(crate) fn add_vertex_unchecked(&mut self, label: &str, id: i64) -> VertexId {
        self.labels.push(label.to_owned());
        self.adjacency.push(Vec::new());
        self.external_ids.push(id);
        self.labels.len() - 1
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.adjacency[u].iter().any(|&(w, _)| w == v)
    }

    pub fn add_edge(
        &mut self,
        u: VertexId,
        v: VertexId,
        label: &str,
    ) -> Result<EdgeId, GraphError> {
        let n = self.labels.len();
        if u >= n {
            return Err(GraphError::UnknownVertex(u as i64));
        }
        if v >= n {
            return Err(GraphError::UnknownVertex(v as i64));
        }
        if u == v {
            return Err(GraphError::Loop(self.external_ids[u]));
        }
        if self.has_edge(u, v) {
            return Err(GraphError::ParallelEdge(
                self.external_ids[u],
                self.external_ids[v],
            ));
        }
        if label.is_empty() {
            return Err(GraphError::EmptyLabel(format!(
                "edge {}-{}",
                self.external_ids[u], self.external_ids[v]
            )));
        }
        Ok(self.add_edge_unchecked(u, v, label))
    }

    pub(crate) fn add_edge_unchecked(&mut self, u: VertexId, v: VertexId, label: &str) -> EdgeId {
        let e = self.edges.len();
        self.edges.push(Edge {
            source: u,
            target: v,
            label: label.to_owned(),
        });
        self.adjacency[u].push((v, e));
        self.adjacency[v].push((u, e));
        e
    }

    pub fn build(mut self) -> Graph {
        for adj in &mut self.adjacency {
            adj.sort_unstable();
        }
        Graph {
            name: self.name,
            labels: self.labels,
            edges: self.edges,
            adjacency: self.adjacency,
            external_ids: self.external_ids,
        }
    }
}
