//! Named graphs and rules, persisted as a manifest of load commands.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use grammod::io::{parse_graph_dfs, parse_graph_gml, parse_rule_gml, parse_smiles};
use grammod::{Graph, Rule};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphSource {
    Gml,
    Smiles,
    Dfs,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphEntry {
    pub name: String,
    pub kind: GraphSource,
    /// A file path for GML, the line notation otherwise.
    pub source: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RuleEntry {
    pub name: String,
    pub path: String,
    #[serde(default)]
    pub invert: bool,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Manifest {
    #[serde(default, rename = "graph")]
    pub graphs: Vec<GraphEntry>,
    #[serde(default, rename = "rule")]
    pub rules: Vec<RuleEntry>,
}

impl Manifest {
    pub fn read(path: &Path) -> Result<Manifest, CliError> {
        if !path.exists() {
            return Ok(Manifest::default());
        }
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        let text = toml::to_string(self).expect("manifest serialises");
        fs::write(path, text).map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))
    }

    pub fn has_name(&self, name: &str) -> bool {
        self.graphs.iter().any(|g| g.name == name) || self.rules.iter().any(|r| r.name == name)
    }
}

pub struct Workspace {
    pub graphs: Vec<Arc<Graph>>,
    pub rules: Vec<Arc<Rule>>,
}

fn read_file(path: &str) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::runtime(format!("{path}: {e}")))
}

pub fn load_graph(entry: &GraphEntry) -> Result<Graph, CliError> {
    let (g, origin) = match entry.kind {
        GraphSource::Gml => (
            parse_graph_gml(&read_file(&entry.source)?),
            entry.source.clone(),
        ),
        GraphSource::Smiles => (
            parse_smiles(&entry.source),
            format!("SMILES '{}'", entry.source),
        ),
        GraphSource::Dfs => (
            parse_graph_dfs(&entry.source),
            format!("GraphDFS '{}'", entry.source),
        ),
    };
    let g = g.map_err(|e| CliError::usage(format!("{origin}:{e}")))?;
    if !g.is_connected() {
        return Err(CliError::usage(format!("{origin}: graph is not connected")));
    }
    Ok(g.with_name(entry.name.clone()))
}

pub fn load_rule(entry: &RuleEntry) -> Result<Rule, CliError> {
    let text = read_file(&entry.path)?;
    let r = parse_rule_gml(&text, entry.invert)
        .map_err(|e| CliError::usage(format!("{}:{e}", entry.path)))?;
    Ok(r.with_name(entry.name.clone()))
}

impl Workspace {
    pub fn from_manifest(m: &Manifest) -> Result<Workspace, CliError> {
        Ok(Workspace {
            graphs: m
                .graphs
                .iter()
                .map(|e| load_graph(e).map(Arc::new))
                .collect::<Result<_, _>>()?,
            rules: m
                .rules
                .iter()
                .map(|e| load_rule(e).map(Arc::new))
                .collect::<Result<_, _>>()?,
        })
    }

    pub fn scope(&self) -> grammod::Scope<'_> {
        grammod::Scope {
            graphs: &self.graphs,
            rules: &self.rules,
        }
    }

    pub fn graph(&self, name: &str) -> Option<&Arc<Graph>> {
        self.graphs.iter().find(|g| g.name() == name)
    }

    pub fn rule(&self, name: &str) -> Option<&Arc<Rule>> {
        self.rules.iter().find(|r| r.name() == name)
    }
}

/// Absolute form of a path given on the command line.
pub fn absolute(path: &str) -> PathBuf {
    let p = PathBuf::from(path);
    if p.is_absolute() {
        p
    } else {
        std::env::current_dir().map(|d| d.join(&p)).unwrap_or(p)
    }
}
