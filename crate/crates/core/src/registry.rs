//! Isomorphism-class registry.
//!
//! Every graph that enters a derivation graph or strategy state is reduced
//! to a [`ClassId`]. Two graphs share a class exactly when they are
//! isomorphic. Lookups bucket by [`Graph::invariant`] so only graphs with
//! equal invariants are compared pairwise.

use std::collections::HashMap;
use std::sync::Arc;

use crate::graph::Graph;
use crate::morphism::is_isomorphic;

/// Index of an isomorphism class, assigned in first-registration order.
pub type ClassId = usize;

#[derive(Debug, Default, Clone)]
pub struct GraphRegistry {
    classes: Vec<Arc<Graph>>,
    buckets: HashMap<u64, Vec<ClassId>>,
}

impl GraphRegistry {
    pub fn new() -> GraphRegistry {
        GraphRegistry::default()
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn get(&self, id: ClassId) -> &Arc<Graph> {
        &self.classes[id]
    }

    pub fn graphs(&self) -> &[Arc<Graph>] {
        &self.classes
    }

    /// Class of `g` if an isomorphic graph is registered.
    pub fn find(&self, g: &Graph) -> Option<ClassId> {
        self.find_with_invariant(g, g.invariant())
    }

    fn find_with_invariant(&self, g: &Graph, key: u64) -> Option<ClassId> {
        self.buckets
            .get(&key)?
            .iter()
            .copied()
            .find(|&c| is_isomorphic(g, &self.classes[c]))
    }

    /// Registers `g`, returning its class and whether the class is new.
    /// The representative (and hence the class name) is the first graph
    /// registered for the class.
    pub fn insert(&mut self, g: Arc<Graph>) -> (ClassId, bool) {
        let key = g.invariant();
        if let Some(c) = self.find_with_invariant(&g, key) {
            return (c, false);
        }
        let id = self.classes.len();
        self.classes.push(g);
        self.buckets.entry(key).or_default().push(id);
        (id, true)
    }

    /// Registers an unnamed graph produced by a derivation; new classes
    /// are named `g<id>`.
    pub fn insert_derived(&mut self, g: Graph) -> (ClassId, bool) {
        let key = g.invariant();
        if let Some(c) = self.find_with_invariant(&g, key) {
            return (c, false);
        }
        let id = self.classes.len();
        let g = if g.name().is_empty() {
            g.with_name(format!("g{id}"))
        } else {
            g
        };
        self.classes.push(Arc::new(g));
        self.buckets.entry(key).or_default().push(id);
        (id, true)
    }
}
