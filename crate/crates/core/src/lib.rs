//! Double pushout graph transformation over multisets of connected,
//! labelled, simple undirected graphs.

pub mod chem;
pub mod compose;
pub mod derivation;
pub mod dg;
pub mod graph;
pub mod io;
pub mod morphism;
pub mod registry;
pub mod rule;
pub mod strategy;

pub use derivation::{Derivation, DerivationMatch, EnumerationLimits};
pub use graph::{Graph, GraphBuilder, GraphError};
pub use registry::{ClassId, GraphRegistry};
pub use rule::{Membership, Rule, RuleEdge, RuleError, RuleVertex};

/// Named graphs and rules that textual programs may refer to.
#[derive(Debug, Clone, Copy)]
pub struct Scope<'a> {
    pub graphs: &'a [std::sync::Arc<Graph>],
    pub rules: &'a [std::sync::Arc<Rule>],
}
