use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use grammod::compose::{parse_rc_expression, OverlapLimits, RcEvaluator};
use grammod::derivation::enumerate_derivations;
use grammod::dg::{export_derivation_dpo, export_dot, export_json, import_json, ExportOptions};
use grammod::io::{write_graph_gml, write_rule_gml};
use grammod::morphism::{count_isomorphisms, count_monomorphisms};
use grammod::strategy::{parse_strategy, DgRuleComp, StrategyConfig};
use grammod::{ClassId, GraphRegistry};

use crate::config::Config;
use crate::workspace::{
    absolute, load_graph, GraphEntry, GraphSource, Manifest, RuleEntry, Workspace,
};
use crate::{Cli, CliError, Command, ExportFormat, MorphismKind};

struct Context {
    manifest_path: PathBuf,
    config: Config,
    out: PathBuf,
}

impl Context {
    fn workspace(&self) -> Result<Workspace, CliError> {
        Workspace::from_manifest(&Manifest::read(&self.manifest_path)?)
    }

    fn out_dir(&self) -> Result<&Path, CliError> {
        fs::create_dir_all(&self.out)
            .map_err(|e| CliError::runtime(format!("{}: {e}", self.out.display())))?;
        Ok(&self.out)
    }
}

fn io_err(e: std::io::Error) -> CliError {
    CliError::runtime(e.to_string())
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))
}

/// A file name derived from an object name.
fn file_stem_for(name: &str) -> String {
    let s: String = name
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == '.' {
                c
            } else {
                '_'
            }
        })
        .collect();
    if s.is_empty() {
        "unnamed".into()
    } else {
        s
    }
}

fn stem_of(path: &str) -> String {
    Path::new(path)
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.to_owned())
}

pub fn run(cli: Cli, out: &mut impl Write) -> Result<(), CliError> {
    let config = match &cli.config {
        Some(p) => Config::read(p)?,
        None => Config::default(),
    };
    let ctx = Context {
        manifest_path: cli.manifest,
        config,
        out: std::env::var_os("GRAMMOD_OUT")
            .map(PathBuf::from)
            .unwrap_or(cli.out),
    };
    match cli.command {
        Command::Load {
            gml,
            smiles,
            dfs,
            rule_gml,
            invert,
            name,
        } => load(&ctx, gml, smiles, dfs, rule_gml, invert, name, out),
        Command::Morphism {
            kind,
            pattern,
            host,
            max,
        } => morphism(&ctx, kind, &pattern, &host, max, out),
        Command::Apply { rule, graphs, all } => apply(&ctx, &rule, &graphs, all, out),
        Command::Compose { expression } => compose(&ctx, &expression, out),
        Command::Explore { program } => explore(&ctx, &program, out),
        Command::Export {
            format,
            dg,
            hyperedge,
        } => export(format, &dg, hyperedge, out),
    }
}

#[allow(clippy::too_many_arguments)]
fn load(
    ctx: &Context,
    gml: Option<String>,
    smiles: Option<String>,
    dfs: Option<String>,
    rule_gml: Option<String>,
    invert: bool,
    name: Option<String>,
    out: &mut impl Write,
) -> Result<(), CliError> {
    let mut manifest = Manifest::read(&ctx.manifest_path)?;
    let what;
    let registered = if let Some(path) = rule_gml {
        let path = absolute(&path).to_string_lossy().into_owned();
        let mut entry = RuleEntry {
            name: String::new(),
            path,
            invert,
        };
        let text = read_file(Path::new(&entry.path))?;
        let parsed = grammod::io::parse_rule_gml(&text, invert)
            .map_err(|e| CliError::usage(format!("{}:{e}", entry.path)))?;
        entry.name = name.unwrap_or_else(|| {
            if parsed.name().is_empty() {
                stem_of(&entry.path)
            } else {
                parsed.name().to_owned()
            }
        });
        what = "rule";
        let n = entry.name.clone();
        check_unique(&manifest, &n)?;
        manifest.rules.push(entry);
        n
    } else {
        let (kind, source) = match (gml, smiles, dfs) {
            (Some(p), _, _) => (
                GraphSource::Gml,
                absolute(&p).to_string_lossy().into_owned(),
            ),
            (_, Some(s), _) => (GraphSource::Smiles, s),
            (_, _, Some(s)) => (GraphSource::Dfs, s),
            _ => {
                return Err(CliError::usage(
                    "load needs one of --gml, --smiles, --dfs, --rule-gml",
                ))
            }
        };
        let default_name = match kind {
            GraphSource::Gml => stem_of(&source),
            _ => source.clone(),
        };
        let entry = GraphEntry {
            name: name.unwrap_or(default_name),
            kind,
            source,
        };
        load_graph(&entry)?;
        what = "graph";
        let n = entry.name.clone();
        check_unique(&manifest, &n)?;
        manifest.graphs.push(entry);
        n
    };
    manifest.write(&ctx.manifest_path)?;
    writeln!(out, "loaded {what} {registered}").map_err(io_err)
}

fn check_unique(m: &Manifest, name: &str) -> Result<(), CliError> {
    if m.has_name(name) {
        Err(CliError::usage(format!(
            "the name '{name}' is already in use"
        )))
    } else {
        Ok(())
    }
}

fn morphism(
    ctx: &Context,
    kind: MorphismKind,
    pattern: &str,
    host: &str,
    max: Option<usize>,
    out: &mut impl Write,
) -> Result<(), CliError> {
    let ws = ctx.workspace()?;
    let max = max.unwrap_or(ctx.config.max_matches);
    let count = match (
        ws.graph(pattern),
        ws.graph(host),
        ws.rule(pattern),
        ws.rule(host),
    ) {
        (Some(p), Some(h), _, _) => match kind {
            MorphismKind::Iso => count_isomorphisms(p, h, max),
            MorphismKind::Mono => count_monomorphisms(p, h, max),
        },
        (_, _, Some(p), Some(h)) => match kind {
            MorphismKind::Iso => p.isomorphism(h, max),
            MorphismKind::Mono => p.monomorphism(h, max),
        },
        _ => {
            let missing = if ws.graph(pattern).is_none() && ws.rule(pattern).is_none() {
                pattern
            } else if ws.graph(host).is_none() && ws.rule(host).is_none() {
                host
            } else {
                return Err(CliError::usage("cannot compare a graph with a rule"));
            };
            return Err(CliError::usage(format!(
                "unknown graph or rule '{missing}'"
            )));
        }
    };
    writeln!(out, "{count}").map_err(io_err)
}

fn apply(
    ctx: &Context,
    rule: &str,
    graphs: &[String],
    all: bool,
    out: &mut impl Write,
) -> Result<(), CliError> {
    let ws = ctx.workspace()?;
    let rule = ws
        .rule(rule)
        .ok_or_else(|| CliError::usage(format!("unknown rule '{rule}'")))?
        .clone();
    let mut registry = GraphRegistry::new();
    let mut universe: Vec<ClassId> = Vec::new();
    for name in graphs {
        let g = ws
            .graph(name)
            .ok_or_else(|| CliError::usage(format!("unknown graph '{name}'")))?;
        let (c, _) = registry.insert(g.clone());
        if !universe.contains(&c) {
            universe.push(c);
        }
    }
    let ders = enumerate_derivations(
        &rule,
        &universe,
        &universe,
        &mut registry,
        Default::default(),
    );
    let noun = if ders.len() == 1 {
        "derivation"
    } else {
        "derivations"
    };
    writeln!(out, "{} {noun}", ders.len()).map_err(io_err)?;
    let names = |cs: &[ClassId]| {
        cs.iter()
            .map(|&c| registry.get(c).name().to_owned())
            .collect::<Vec<_>>()
            .join(" + ")
    };
    for d in &ders {
        writeln!(out, "{} => {}", names(&d.tails), names(&d.heads)).map_err(io_err)?;
    }
    if all {
        let dir = ctx.out_dir()?;
        let mut written: Vec<ClassId> = Vec::new();
        for c in ders.iter().flat_map(|d| d.heads.iter().copied()) {
            if written.contains(&c) {
                continue;
            }
            written.push(c);
            let g = registry.get(c);
            write_file(
                &dir.join(format!("{}.gml", file_stem_for(g.name()))),
                &write_graph_gml(g),
            )?;
        }
    }
    Ok(())
}

fn compose(ctx: &Context, path: &Path, out: &mut impl Write) -> Result<(), CliError> {
    let ws = ctx.workspace()?;
    let text = read_file(path)?;
    let expr = parse_rc_expression(&text, ws.scope())
        .map_err(|e| CliError::usage(format!("{}:{e}", path.display())))?;
    let limits = OverlapLimits {
        common_cap: ctx.config.common_overlap_cap,
        connected_only: ctx.config.connected_overlaps_only,
    };
    let mut ev = RcEvaluator::new(ws.rules.iter().cloned()).with_limits(limits);
    let rules = ev.eval(&expr);
    let dir = ctx.out_dir()?;
    for r in &rules {
        write_file(
            &dir.join(format!("{}.gml", file_stem_for(r.name()))),
            &write_rule_gml(r),
        )?;
    }
    let noun = if rules.len() == 1 { "rule" } else { "rules" };
    writeln!(out, "{} {noun}", rules.len()).map_err(io_err)?;
    for r in &rules {
        writeln!(out, "{}", r.name()).map_err(io_err)?;
    }
    Ok(())
}

fn explore(ctx: &Context, path: &Path, out: &mut impl Write) -> Result<(), CliError> {
    let ws = ctx.workspace()?;
    let text = read_file(path)?;
    let strategy = parse_strategy(&text, ws.scope())
        .map_err(|e| CliError::usage(format!("{}:{e}", path.display())))?;
    let config = StrategyConfig {
        repeat_cap: ctx.config.repeat_cap,
        subset_new_only: ctx.config.subset_new_only,
        limits: Default::default(),
    };
    let mut comp = DgRuleComp::new(&ws.graphs, strategy).with_config(config);
    comp.calc().map_err(|e| CliError::runtime(e.to_string()))?;
    for d in comp.diagnostics() {
        eprintln!("warning: {d}");
    }
    let dg = comp.dg();
    let dir = ctx.out_dir()?;
    write_file(&dir.join("dg.json"), &export_json(dg))?;
    write_file(&dir.join("dg.dot"), &export_dot(dg, &ExportOptions::new()))?;
    writeln!(
        out,
        "classes={} hyperedges={}",
        dg.num_vertices(),
        dg.num_hyperedges()
    )
    .map_err(io_err)
}

fn export(
    format: ExportFormat,
    path: &Path,
    hyperedge: Option<usize>,
    out: &mut impl Write,
) -> Result<(), CliError> {
    let dg = import_json(&read_file(path)?)
        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    let text = match format {
        ExportFormat::Dot => export_dot(&dg, &ExportOptions::new()),
        ExportFormat::Dpo => {
            let e = hyperedge.ok_or_else(|| CliError::usage("export dpo needs --hyperedge"))?;
            export_derivation_dpo(&dg, e).map_err(CliError::runtime)?
        }
    };
    out.write_all(text.as_bytes()).map_err(io_err)
}
