//! Loading and writing graphs and rules.
//!
//! * GML for general graphs and for rules (`left`/`context`/`right`).
//! * SMILES for molecules, with implicit hydrogens made explicit.
//! * GraphDFS, a SMILES-like line notation for arbitrary labels.

use thiserror::Error;

pub mod dfs;
pub mod gml;

pub use dfs::{parse_graph_dfs, parse_smiles};
pub use gml::{
    parse_graph_gml, parse_graph_gml_with, parse_rule_gml, parse_rule_gml_with, write_graph_gml,
    write_rule_gml, GmlOptions, Loaded,
};

/// A load failure with a 1-based position in the input text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}
