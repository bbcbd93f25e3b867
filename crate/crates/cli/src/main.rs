mod commands;
mod config;
mod workspace;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

/// A failure with its exit status: 2 for usage and parse errors, 1 for
/// everything else.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> CliError {
        CliError {
            code: 2,
            message: message.into(),
        }
    }

    pub fn runtime(message: impl Into<String>) -> CliError {
        CliError {
            code: 1,
            message: message.into(),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "grammod", version, about = "DPO graph transformation toolkit")]
pub struct Cli {
    /// Workspace manifest listing loaded graphs and rules.
    #[arg(long, global = true, default_value = "grammod.toml")]
    pub manifest: PathBuf,
    /// Configuration file (TOML).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory; GRAMMOD_OUT takes precedence.
    #[arg(long, global = true, default_value = "grammod-out")]
    pub out: PathBuf,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MorphismKind {
    Iso,
    Mono,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExportFormat {
    Dot,
    Dpo,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Add a graph or rule to the workspace manifest.
    Load {
        #[arg(long, group = "source")]
        gml: Option<String>,
        #[arg(long, group = "source")]
        smiles: Option<String>,
        #[arg(long, group = "source")]
        dfs: Option<String>,
        #[arg(long = "rule-gml", group = "source")]
        rule_gml: Option<String>,
        /// Swap the left and right sides of a loaded rule.
        #[arg(long, requires = "rule_gml")]
        invert: bool,
        #[arg(long)]
        name: Option<String>,
    },
    /// Count isomorphisms or monomorphisms between two named objects.
    Morphism {
        kind: MorphismKind,
        pattern: String,
        host: String,
        /// Stop counting after this many; defaults to maxMatches.
        #[arg(long)]
        max: Option<usize>,
    },
    /// List the derivations of a rule over the given graphs.
    Apply {
        rule: String,
        #[arg(required = true)]
        graphs: Vec<String>,
        /// Write every head graph as GML.
        #[arg(long)]
        all: bool,
    },
    /// Evaluate a rule composition expression.
    Compose { expression: PathBuf },
    /// Run a strategy program and export the derivation graph.
    Explore { program: PathBuf },
    /// Export a saved derivation graph.
    Export {
        format: ExportFormat,
        /// A `dg.json` written by `explore`.
        dg: PathBuf,
        /// Hyperedge id, for `dpo`.
        #[arg(long)]
        hyperedge: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut stdout = std::io::stdout().lock();
    match commands::run(cli, &mut stdout) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
