use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::derivation::DerivationMatch;
use crate::io::{parse_graph_gml, parse_rule_gml, write_graph_gml, write_rule_gml, ParseError};

use super::DerivationGraph;

pub const SCHEMA: &str = "grammod-dg/1";

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema '{0}'")]
    Schema(String),
    #[error("embedded GML of {what}: {source}")]
    Gml { what: String, source: ParseError },
    #[error("{0}")]
    Reference(String),
}

#[derive(Serialize, Deserialize)]
struct Doc {
    schema: String,
    vertices: Vec<VertexDoc>,
    rules: Vec<RuleDoc>,
    hyperedges: Vec<EdgeDoc>,
}

#[derive(Serialize, Deserialize)]
struct VertexDoc {
    id: usize,
    class: usize,
    name: String,
    gml: String,
}

#[derive(Serialize, Deserialize)]
struct RuleDoc {
    name: String,
    gml: String,
}

#[derive(Serialize, Deserialize)]
struct EdgeDoc {
    id: usize,
    rule: usize,
    #[serde(rename = "ruleName")]
    rule_name: String,
    tails: Vec<usize>,
    heads: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    witness: Option<WitnessDoc>,
}

#[derive(Serialize, Deserialize)]
struct WitnessDoc {
    copies: Vec<usize>,
    #[serde(rename = "vertexMap")]
    vertex_map: Vec<(usize, usize)>,
}

/// Lossless dump: graphs and rules as embedded GML, hyperedges by index.
pub fn export_json(dg: &DerivationGraph) -> String {
    let doc = Doc {
        schema: SCHEMA.to_string(),
        vertices: dg
            .vertices()
            .iter()
            .map(|v| VertexDoc {
                id: v.id,
                class: v.class,
                name: v.graph.name().to_string(),
                gml: write_graph_gml(&v.graph),
            })
            .collect(),
        rules: dg
            .rules()
            .iter()
            .map(|r| RuleDoc {
                name: r.name().to_string(),
                gml: write_rule_gml(r),
            })
            .collect(),
        hyperedges: dg
            .hyperedges()
            .iter()
            .map(|e| EdgeDoc {
                id: e.id,
                rule: e.rule,
                rule_name: dg.rule_of(e).name().to_string(),
                tails: e.tails.clone(),
                heads: e.heads.clone(),
                witness: e.witness.as_ref().map(|w| WitnessDoc {
                    copies: w.tails.clone(),
                    vertex_map: w.vertex_map.clone(),
                }),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("serialisable")
}

/// Rebuilds a derivation graph written by [`export_json`].
pub fn import_json(text: &str) -> Result<DerivationGraph, JsonError> {
    let doc: Doc = serde_json::from_str(text)?;
    if doc.schema != SCHEMA {
        return Err(JsonError::Schema(doc.schema));
    }
    let mut dg = DerivationGraph::new();
    for (i, v) in doc.vertices.iter().enumerate() {
        if v.id != i {
            return Err(JsonError::Reference(format!(
                "vertex {} listed at position {i}",
                v.id
            )));
        }
        let g = parse_graph_gml(&v.gml).map_err(|source| JsonError::Gml {
            what: format!("vertex {i}"),
            source,
        })?;
        if dg.vertex_of_class(v.class).is_some() {
            return Err(JsonError::Reference(format!(
                "class {} appears twice",
                v.class
            )));
        }
        dg.add_vertex(v.class, &Arc::new(g.with_name(v.name.clone())));
    }
    let rules = doc
        .rules
        .iter()
        .map(|r| {
            parse_rule_gml(&r.gml, false)
                .map(|x| Arc::new(x.with_name(r.name.clone())))
                .map_err(|source| JsonError::Gml {
                    what: format!("rule '{}'", r.name),
                    source,
                })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let n = dg.num_vertices();
    for e in &doc.hyperedges {
        let rule = rules.get(e.rule).ok_or_else(|| {
            JsonError::Reference(format!("hyperedge {} uses unknown rule {}", e.id, e.rule))
        })?;
        let w = e.witness.as_ref();
        if e.tails
            .iter()
            .chain(&e.heads)
            .chain(w.iter().flat_map(|w| &w.copies))
            .any(|&v| v >= n)
        {
            return Err(JsonError::Reference(format!(
                "hyperedge {} refers to an unknown vertex",
                e.id
            )));
        }
        let witness = w.map(|w| DerivationMatch {
            tails: w.copies.clone(),
            vertex_map: w.vertex_map.clone(),
        });
        let (id, new) = dg.add_hyperedge(rule, e.tails.clone(), e.heads.clone(), witness);
        if !new || id != e.id {
            return Err(JsonError::Reference(format!(
                "hyperedge {} is duplicated or out of order",
                e.id
            )));
        }
    }
    Ok(dg)
}
