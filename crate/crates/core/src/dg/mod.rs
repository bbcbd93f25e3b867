//! Derivation graphs: directed multi-hypergraphs whose vertices are graph
//! classes and whose hyperedges are derivations.

use std::collections::HashMap;
use std::sync::Arc;

use crate::derivation::DerivationMatch;
use crate::graph::Graph;
use crate::registry::ClassId;
use crate::rule::Rule;

mod dot;
mod dpo;
mod json;

pub use dot::{export_dot, ExportOptions};
pub use dpo::{dpo_diagram, export_derivation_dpo, DpoDiagram};
pub use json::{export_json, import_json, JsonError, SCHEMA};

pub type VertexId = usize;
pub type HyperedgeId = usize;

#[derive(Debug, Clone)]
pub struct DgVertex {
    pub id: VertexId,
    /// Class id in the registry of the run that produced the graph.
    pub class: ClassId,
    pub graph: Arc<Graph>,
}

/// A recorded derivation. Tails and heads are sorted vertex ids with
/// multiplicity. The witness refers to tails by vertex id, in copy order.
#[derive(Debug, Clone)]
pub struct Hyperedge {
    pub id: HyperedgeId,
    pub rule: usize,
    pub tails: Vec<VertexId>,
    pub heads: Vec<VertexId>,
    pub witness: Option<DerivationMatch>,
}

#[derive(Debug, Clone, Default)]
pub struct DerivationGraph {
    vertices: Vec<DgVertex>,
    by_class: HashMap<ClassId, VertexId>,
    rules: Vec<Arc<Rule>>,
    edges: Vec<Hyperedge>,
    keys: HashMap<(usize, Vec<VertexId>, Vec<VertexId>), HyperedgeId>,
}

impl DerivationGraph {
    pub fn new() -> DerivationGraph {
        DerivationGraph::default()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_hyperedges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[DgVertex] {
        &self.vertices
    }

    pub fn vertex(&self, v: VertexId) -> &DgVertex {
        &self.vertices[v]
    }

    pub fn graph(&self, v: VertexId) -> &Arc<Graph> {
        &self.vertices[v].graph
    }

    pub fn hyperedges(&self) -> &[Hyperedge] {
        &self.edges
    }

    pub fn hyperedge(&self, e: HyperedgeId) -> Option<&Hyperedge> {
        self.edges.get(e)
    }

    pub fn rules(&self) -> &[Arc<Rule>] {
        &self.rules
    }

    pub fn rule_of(&self, e: &Hyperedge) -> &Arc<Rule> {
        &self.rules[e.rule]
    }

    pub fn vertex_of_class(&self, class: ClassId) -> Option<VertexId> {
        self.by_class.get(&class).copied()
    }

    /// The vertex for `class`, added if new.
    pub fn add_vertex(&mut self, class: ClassId, graph: &Arc<Graph>) -> VertexId {
        if let Some(&v) = self.by_class.get(&class) {
            return v;
        }
        let id = self.vertices.len();
        self.vertices.push(DgVertex {
            id,
            class,
            graph: graph.clone(),
        });
        self.by_class.insert(class, id);
        id
    }

    fn rule_index(&mut self, rule: &Arc<Rule>) -> usize {
        match self.rules.iter().position(|r| Arc::ptr_eq(r, rule)) {
            Some(i) => i,
            None => {
                self.rules.push(rule.clone());
                self.rules.len() - 1
            }
        }
    }

    /// Records a hyperedge between existing vertices unless an equal one
    /// (same rule, tails and heads) exists. Returns its id and whether it
    /// is new.
    pub fn add_hyperedge(
        &mut self,
        rule: &Arc<Rule>,
        mut tails: Vec<VertexId>,
        mut heads: Vec<VertexId>,
        witness: Option<DerivationMatch>,
    ) -> (HyperedgeId, bool) {
        let rule = self.rule_index(rule);
        tails.sort_unstable();
        heads.sort_unstable();
        let key = (rule, tails, heads);
        if let Some(&e) = self.keys.get(&key) {
            return (e, false);
        }
        let id = self.edges.len();
        self.edges.push(Hyperedge {
            id,
            rule,
            tails: key.1.clone(),
            heads: key.2.clone(),
            witness,
        });
        self.keys.insert(key, id);
        (id, true)
    }

    pub fn find_hyperedge(
        &self,
        rule: &Arc<Rule>,
        tails: &[VertexId],
        heads: &[VertexId],
    ) -> Option<HyperedgeId> {
        let r = self.rules.iter().position(|x| Arc::ptr_eq(x, rule))?;
        let (mut t, mut h) = (tails.to_vec(), heads.to_vec());
        t.sort_unstable();
        h.sort_unstable();
        self.keys.get(&(r, t, h)).copied()
    }

    /// Hyperedges as `(rule name, tails, heads)`, sorted; equal for
    /// derivation graphs that agree up to hyperedge order.
    pub fn hyperedge_multiset(&self) -> Vec<(String, Vec<VertexId>, Vec<VertexId>)> {
        let mut out: Vec<_> = self
            .edges
            .iter()
            .map(|e| {
                (
                    self.rules[e.rule].name().to_string(),
                    e.tails.clone(),
                    e.heads.clone(),
                )
            })
            .collect();
        out.sort();
        out
    }

    /// Heads and tails of `e` as graphs.
    pub fn left_graphs(&self, e: &Hyperedge) -> Vec<&Graph> {
        e.tails
            .iter()
            .map(|&v| self.vertices[v].graph.as_ref())
            .collect()
    }

    pub fn right_graphs(&self, e: &Hyperedge) -> Vec<&Graph> {
        e.heads
            .iter()
            .map(|&v| self.vertices[v].graph.as_ref())
            .collect()
    }
}
