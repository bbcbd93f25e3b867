use std::fs;
use std::path::Path;

use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    /// Default `--max` for morphism counting.
    #[serde(rename = "maxMatches")]
    pub max_matches: usize,
    /// Largest common subgraph (vertices plus edges) for `*rcCommon*`.
    #[serde(rename = "commonOverlapCap")]
    pub common_overlap_cap: usize,
    /// Restrict `*rcCommon*` to connected common subgraphs.
    #[serde(rename = "connectedOverlapsOnly")]
    pub connected_overlaps_only: bool,
    /// Iteration bound for unbounded `repeat`.
    #[serde(rename = "repeatCap")]
    pub repeat_cap: usize,
    #[serde(rename = "subset-new-only")]
    pub subset_new_only: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            max_matches: 1,
            common_overlap_cap: 8,
            connected_overlaps_only: false,
            repeat_cap: 1 << 20,
            subset_new_only: false,
        }
    }
}

impl Config {
    pub fn read(path: &Path) -> Result<Config, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))?;
        Config::parse(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Config, String> {
        let c: Config = toml::from_str(text).map_err(|e| e.to_string())?;
        if c.max_matches == 0 {
            return Err("maxMatches must be at least 1".into());
        }
        if c.common_overlap_cap == 0 {
            return Err("commonOverlapCap must be at least 1".into());
        }
        if c.repeat_cap == 0 {
            return Err("repeatCap must be at least 1".into());
        }
        Ok(c)
    }
}
