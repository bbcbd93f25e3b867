//! DPO rules `L <- K -> R`.
//!
//! A rule is stored as a single core graph whose vertices and edges carry
//! an optional left label and an optional right label. An element with
//! only a left label is deleted, one with only a right label is created,
//! and one with both is kept (changing label when the two differ). The
//! spans `l: K -> L` and `r: K -> R` are identities on the shared core
//! ids and therefore injective by construction.

use std::fmt;

use thiserror::Error;

use crate::graph::{Graph, GraphBuilder};
use crate::morphism::{count_isomorphisms, count_monomorphisms};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Membership {
    /// In `L` only.
    Left,
    /// In `K`, hence in both `L` and `R`.
    Context,
    /// In `R` only.
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("vertex {0} is on neither side")]
    NoSide(i64),
    #[error("duplicate vertex id {0}")]
    DuplicateVertex(i64),
    #[error("empty label on vertex {0}")]
    EmptyLabel(i64),
    #[error("empty label on edge {0}-{1}")]
    EmptyEdgeLabel(i64, i64),
    #[error("edge {0} refers to a vertex index out of range")]
    UnknownEndpoint(usize),
    #[error("loop edge on vertex {0}")]
    Loop(i64),
    #[error("edge {0}-{1} is on neither side")]
    EdgeNoSide(i64, i64),
    #[error("parallel edges between {0} and {1}")]
    ParallelEdge(i64, i64),
    #[error("edge {0}-{1} is on the {2} side but an endpoint is not")]
    MissingEndpoint(i64, i64, &'static str),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RuleVertex {
    pub external_id: i64,
    pub left: Option<String>,
    pub right: Option<String>,
}

impl RuleVertex {
    pub fn new(external_id: i64, left: Option<String>, right: Option<String>) -> RuleVertex {
        RuleVertex {
            external_id,
            left,
            right,
        }
    }

    pub fn membership(&self) -> Membership {
        membership_of(&self.left, &self.right)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RuleEdge {
    pub source: usize,
    pub target: usize,
    pub left: Option<String>,
    pub right: Option<String>,
}

impl RuleEdge {
    pub fn new(
        source: usize,
        target: usize,
        left: Option<String>,
        right: Option<String>,
    ) -> RuleEdge {
        RuleEdge {
            source,
            target,
            left,
            right,
        }
    }

    pub fn membership(&self) -> Membership {
        membership_of(&self.left, &self.right)
    }
}

fn membership_of(left: &Option<String>, right: &Option<String>) -> Membership {
    match (left.is_some(), right.is_some()) {
        (true, true) => Membership::Context,
        (true, false) => Membership::Left,
        (false, true) => Membership::Right,
        (false, false) => panic!("rule element on neither side"),
    }
}

/// One of `L`, `K`, `R` as a standalone graph plus the maps back to the
/// rule core.
#[derive(Debug, Clone)]
pub struct SideView {
    pub graph: Graph,
    pub vertex_to_core: Vec<usize>,
    pub edge_to_core: Vec<usize>,
    pub core_to_vertex: Vec<Option<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Left,
    Context,
    Right,
}

#[derive(Debug, Clone)]
pub struct Rule {
    name: String,
    vertices: Vec<RuleVertex>,
    edges: Vec<RuleEdge>,
    left: SideView,
    context: SideView,
    right: SideView,
    // membership and label pair encoded into plain labels
    core: Graph,
}

const SEP: char = '\u{1f}';
const ABSENT: &str = "\u{0}";

fn encode(left: &Option<String>, right: &Option<String>) -> String {
    format!(
        "{}{SEP}{}",
        left.as_deref().unwrap_or(ABSENT),
        right.as_deref().unwrap_or(ABSENT)
    )
}

impl Rule {
    /// Builds a rule from its core description, checking every invariant.
    pub fn new(
        name: impl Into<String>,
        vertices: Vec<RuleVertex>,
        edges: Vec<RuleEdge>,
    ) -> Result<Rule, RuleError> {
        let mut seen = std::collections::HashSet::new();
        for v in &vertices {
            if !seen.insert(v.external_id) {
                return Err(RuleError::DuplicateVertex(v.external_id));
            }
            if v.left.is_none() && v.right.is_none() {
                return Err(RuleError::NoSide(v.external_id));
            }
            if [&v.left, &v.right].iter().any(|l| l.as_deref() == Some("")) {
                return Err(RuleError::EmptyLabel(v.external_id));
            }
        }
        let mut pairs = std::collections::HashSet::new();
        for (i, e) in edges.iter().enumerate() {
            if e.source >= vertices.len() || e.target >= vertices.len() {
                return Err(RuleError::UnknownEndpoint(i));
            }
            let (a, b) = (&vertices[e.source], &vertices[e.target]);
            let ids = (a.external_id, b.external_id);
            if e.source == e.target {
                return Err(RuleError::Loop(ids.0));
            }
            if e.left.is_none() && e.right.is_none() {
                return Err(RuleError::EdgeNoSide(ids.0, ids.1));
            }
            if [&e.left, &e.right].iter().any(|l| l.as_deref() == Some("")) {
                return Err(RuleError::EmptyEdgeLabel(ids.0, ids.1));
            }
            if e.left.is_some() && (a.left.is_none() || b.left.is_none()) {
                return Err(RuleError::MissingEndpoint(ids.0, ids.1, "left"));
            }
            if e.right.is_some() && (a.right.is_none() || b.right.is_none()) {
                return Err(RuleError::MissingEndpoint(ids.0, ids.1, "right"));
            }
            if !pairs.insert((e.source.min(e.target), e.source.max(e.target))) {
                return Err(RuleError::ParallelEdge(ids.0, ids.1));
            }
        }
        Ok(Rule::assemble(name.into(), vertices, edges))
    }

    fn assemble(name: String, vertices: Vec<RuleVertex>, edges: Vec<RuleEdge>) -> Rule {
        let left = side_view(&vertices, &edges, Side::Left);
        let context = side_view(&vertices, &edges, Side::Context);
        let right = side_view(&vertices, &edges, Side::Right);
        let mut b = GraphBuilder::named(name.clone());
        for v in &vertices {
            b.add_vertex_unchecked(&encode(&v.left, &v.right), v.external_id);
        }
        for e in &edges {
            b.add_edge_unchecked(e.source, e.target, &encode(&e.left, &e.right));
        }
        Rule {
            name,
            vertices,
            edges,
            left,
            context,
            right,
            core: b.build(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(self, name: impl Into<String>) -> Rule {
        let name = name.into();
        Rule::assemble(name, self.vertices, self.edges)
    }

    pub fn vertices(&self) -> &[RuleVertex] {
        &self.vertices
    }

    pub fn vertex(&self, v: usize) -> &RuleVertex {
        &self.vertices[v]
    }

    pub fn edges(&self) -> &[RuleEdge] {
        &self.edges
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn left(&self) -> &SideView {
        &self.left
    }

    /// `K`; kept elements carry their left label.
    pub fn context(&self) -> &SideView {
        &self.context
    }

    pub fn right(&self) -> &SideView {
        &self.right
    }

    pub fn left_graph(&self) -> &Graph {
        &self.left.graph
    }

    pub fn context_graph(&self) -> &Graph {
        &self.context.graph
    }

    pub fn right_graph(&self) -> &Graph {
        &self.right.graph
    }

    /// The core graph with membership and label pairs folded into the
    /// labels; isomorphisms of these are rule isomorphisms.
    pub fn core_graph(&self) -> &Graph {
        &self.core
    }

    /// Core edge between two core vertices.
    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        self.core.edge_between(u, v)
    }

    /// `(R <- K -> L)`.
    pub fn inverse(&self) -> Rule {
        let vertices = self
            .vertices
            .iter()
            .map(|v| RuleVertex::new(v.external_id, v.right.clone(), v.left.clone()))
            .collect();
        let edges = self
            .edges
            .iter()
            .map(|e| RuleEdge::new(e.source, e.target, e.right.clone(), e.left.clone()))
            .collect();
        Rule::assemble(self.name.clone(), vertices, edges)
    }

    /// Whether any kept vertex or edge changes label.
    pub fn changes_labels(&self) -> bool {
        self.vertices
            .iter()
            .map(|v| (&v.left, &v.right))
            .chain(self.edges.iter().map(|e| (&e.left, &e.right)))
            .any(|(l, r)| l.is_some() && r.is_some() && l != r)
    }

    /// Number of rule monomorphisms `self -> other`: commuting triples of
    /// monomorphisms on `L`, `K` and `R`, saturating at `max_matches`.
    pub fn monomorphism(&self, other: &Rule, max_matches: usize) -> usize {
        count_monomorphisms(&self.core, &other.core, max_matches)
    }

    pub fn isomorphism(&self, other: &Rule, max_matches: usize) -> usize {
        count_isomorphisms(&self.core, &other.core, max_matches)
    }

    pub fn is_isomorphic(&self, other: &Rule) -> bool {
        self.isomorphism(other, 1) == 1
    }

    /// Isomorphism invariant of the rule.
    pub fn invariant(&self) -> u64 {
        self.core.invariant()
    }
}

fn side_view(vertices: &[RuleVertex], edges: &[RuleEdge], side: Side) -> SideView {
    let vlabel = |v: &RuleVertex| -> Option<String> {
        match side {
            Side::Left => v.left.clone(),
            Side::Right => v.right.clone(),
            Side::Context => v.right.as_ref().and(v.left.clone()),
        }
    };
    let elabel = |e: &RuleEdge| -> Option<String> {
        match side {
            Side::Left => e.left.clone(),
            Side::Right => e.right.clone(),
            Side::Context => e.right.as_ref().and(e.left.clone()),
        }
    };
    let mut b = GraphBuilder::new();
    let mut core_to_vertex = vec![None; vertices.len()];
    let mut vertex_to_core = Vec::new();
    for (i, v) in vertices.iter().enumerate() {
        if let Some(l) = vlabel(v) {
            core_to_vertex[i] = Some(b.add_vertex_unchecked(&l, v.external_id));
            vertex_to_core.push(i);
        }
    }
    let mut edge_to_core = Vec::new();
    for (i, e) in edges.iter().enumerate() {
        if let Some(l) = elabel(e) {
            let (a, c) = (core_to_vertex[e.source], core_to_vertex[e.target]);
            b.add_edge_unchecked(
                a.expect("endpoint on side"),
                c.expect("endpoint on side"),
                &l,
            );
            edge_to_core.push(i);
        }
    }
    SideView {
        graph: b.build(),
        vertex_to_core,
        edge_to_core,
        core_to_vertex,
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (|V_L|={}, |E_L|={}, |V_R|={}, |E_R|={})",
            if self.name.is_empty() {
                "<unnamed>"
            } else {
                &self.name
            },
            self.left.graph.num_vertices(),
            self.left.graph.num_edges(),
            self.right.graph.num_vertices(),
            self.right.graph.num_edges()
        )
    }
}
