//! Acceptance criteria. Each prints one PASS or FAIL line; the process
//! fails if any criterion does.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use grammod::compose::{
    compose, enumerate_overlaps, parse_rc_expression, OverlapLimits, RcEvaluator, RcOverlapKind,
};
use grammod::derivation::enumerate_derivations;
use grammod::dg::{export_dot, export_json, import_json, DerivationGraph, ExportOptions};
use grammod::io::{parse_graph_dfs, parse_graph_gml, parse_smiles};
use grammod::morphism::{count_isomorphisms, count_monomorphisms};
use grammod::strategy::{parse_strategy, DgRuleComp, StrategyConfig};
use grammod::{EnumerationLimits, Graph, GraphBuilder, GraphRegistry, Rule, Scope};

use common::dot_check::check_dot;
use common::oracle;
use common::*;

type Check = fn() -> Result<String, String>;

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let t = start.elapsed();
    if t > limit {
        Err(format!("took {t:?}, limit {limit:?}"))
    } else {
        Ok(())
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

const ETHANOL_GML: &str = r#"graph [
	node [ id 0 label "C" ]   node [ id 1 label "C" ]   node [ id 2 label "O" ]
	node [ id 3 label "H" ]   node [ id 4 label "H" ]   node [ id 5 label "H" ]
	node [ id 6 label "H" ]   node [ id 7 label "H" ]   node [ id 8 label "H" ]
	edge [ source 1 target 0 label "-" ]   edge [ source 2 target 1 label "-" ]
	edge [ source 3 target 0 label "-" ]   edge [ source 4 target 0 label "-" ]
	edge [ source 5 target 0 label "-" ]   edge [ source 6 target 1 label "-" ]
	edge [ source 7 target 1 label "-" ]   edge [ source 8 target 2 label "-" ]
]"#;

fn c1_four_ethanols() -> Result<String, String> {
    let start = Instant::now();
    let es = [
        parse_smiles("CCO").map_err(|e| e.to_string())?,
        parse_graph_dfs("[C]([H])([H])([H])[C]([H])([H])[O][H]").map_err(|e| e.to_string())?,
        parse_graph_dfs("CCO").map_err(|e| e.to_string())?,
        parse_graph_gml(ETHANOL_GML).map_err(|e| e.to_string())?,
    ];
    for (i, a) in es.iter().enumerate() {
        for (j, b) in es.iter().enumerate() {
            let one = count_isomorphisms(a, b, 1);
            let all = count_isomorphisms(a, b, 1337);
            ensure(one == 1 && all >= 1, || {
                format!("ethanol{} vs ethanol{}: {one} / {all}", i + 1, j + 1)
            })?;
        }
    }
    within(Duration::from_secs(1), start)?;
    Ok(format!("16 pairs isomorphic in {:?}", start.elapsed()))
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    let mut b = GraphBuilder::new();
    for _ in 0..n {
        b.add_vertex(["A", "B"][rng.gen_range(0..2)]).unwrap();
    }
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(0.45) {
                b.add_edge(u, v, ["-", "="][rng.gen_range(0..2)]).unwrap();
            }
        }
    }
    b.build()
}

fn c2_morphism_oracle() -> Result<String, String> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x6d6f72);
    let mut total = 0;
    for k in 0..50 {
        let (np, nh) = (rng.gen_range(1..=4), rng.gen_range(1..=6));
        let h = random_graph(&mut rng, nh);
        // every other pattern is cut out of its host so that matches exist
        let p = if k % 2 == 0 {
            let mut vs: Vec<usize> = h.vertices().collect();
            vs.shuffle(&mut rng);
            vs.truncate(np.min(nh));
            h.induced(&vs)
        } else {
            random_graph(&mut rng, np)
        };
        let mono = count_monomorphisms(&p, &h, usize::MAX);
        let want = oracle::count_mono(&p, &h);
        ensure(mono == want, || {
            format!("pair {k}: mono {mono}, oracle {want}")
        })?;
        // isomorphism counts on graphs of equal size: h against a shuffled copy
        let h2 = relabel(&h, &mut rng);
        for (a, b) in [(&p, &h), (&h, &h2), (&h, &h)] {
            let iso = count_isomorphisms(a, b, usize::MAX);
            let want = oracle::count_iso(a, b);
            ensure(iso == want, || {
                format!("pair {k}: iso {iso}, oracle {want}")
            })?;
        }
        total += mono;
    }
    within(Duration::from_secs(10), start)?;
    Ok(format!(
        "50 pairs agree ({total} monomorphisms) in {:?}",
        start.elapsed()
    ))
}

/// The same graph with its vertices permuted.
fn relabel(g: &Graph, rng: &mut ChaCha8Rng) -> Graph {
    let mut perm: Vec<usize> = g.vertices().collect();
    perm.shuffle(rng);
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    let mut b = GraphBuilder::new();
    for &p in &perm {
        b.add_vertex(g.label(p)).unwrap();
    }
    for e in g.edges() {
        b.add_edge(inv[e.source], inv[e.target], &e.label).unwrap();
    }
    b.build()
}

fn c3_methyl() -> Result<String, String> {
    let methyl = parse_smiles("[CH3]").map_err(|e| e.to_string())?;
    let mol1 = parse_smiles("CC(C)CO").map_err(|e| e.to_string())?;
    let aut = count_isomorphisms(&methyl, &methyl, 1337);
    let mono = count_monomorphisms(&methyl, &mol1, 1337);
    ensure(aut == 6 && mono == 12, || {
        format!("|Aut| = {aut}, mono = {mono}")
    })?;
    ensure(
        oracle::count_iso(&methyl, &methyl) == 6 && oracle::count_mono(&methyl, &mol1) == 12,
        || "oracle disagrees".into(),
    )?;
    Ok(format!(
        "|Aut(methyl)| = {aut}, monomorphisms = {mono}, groups = {}",
        mono / aut
    ))
}

fn c4_caffeine() -> Result<String, String> {
    let g = parse_smiles("Cn1cnc2c1c(=O)n(c(=O)n2C)C").map_err(|e| e.to_string())?;
    let counts = [("C", 8), ("N", 4), ("O", 2), ("H", 10)];
    ensure(g.num_vertices() == 24, || {
        format!("{} vertices", g.num_vertices())
    })?;
    for (l, n) in counts {
        ensure(g.v_label_count(l) == n, || {
            format!("{l}: {}", g.v_label_count(l))
        })?;
    }
    Ok("24 vertices, C8H10N4O2".into())
}

fn c5_keto_enol() -> Result<String, String> {
    let r = rule(KETO_ENOL_CHARGED, false, "ketoEnol_F");
    let acetaldehyde = smiles("CC=O", "acetaldehyde");
    let mut reg = GraphRegistry::new();
    let (c, _) = reg.insert(acetaldehyde);
    let ds = enumerate_derivations(&r, &[c], &[c], &mut reg, Default::default());
    ensure(ds.len() == 1, || format!("{} derivations", ds.len()))?;
    let heads: Vec<&Graph> = ds[0].heads.iter().map(|&h| reg.get(h).as_ref()).collect();
    ensure(heads.len() == 2, || format!("{} heads", heads.len()))?;
    let proton = heads
        .iter()
        .filter(|h| h.num_vertices() == 1 && h.label(0) == "H+")
        .count();
    ensure(proton == 1, || "no H+ head".into())?;
    let oracle_heads = oracle::distinct(oracle::derive(&r, &[reg.get(c).as_ref()]));
    let lib: Vec<Graph> = heads.iter().map(|&h| h.clone()).collect();
    ensure(
        oracle_heads.len() == 1 && oracle::same_multiset(&oracle_heads[0], &lib),
        || "oracle heads differ".into(),
    )?;
    Ok("1 derivation, heads = enolate + H+".into())
}

fn c6_pushout_rejection() -> Result<String, String> {
    let r = rule(ADD_EDGE, false, "addEdge");
    let mut reg = GraphRegistry::new();
    let joined = Arc::new(parse_graph_dfs("[A]-[A]").map_err(|e| e.to_string())?);
    let single = Arc::new(parse_graph_dfs("[A]").map_err(|e| e.to_string())?);
    let (j, _) = reg.insert(joined);
    let (s, _) = reg.insert(single);
    // both left vertices on the one joined copy
    let one_copy = EnumerationLimits {
        max_copies: Some(1),
        ..Default::default()
    };
    let on_joined = enumerate_derivations(&r, &[j], &[j], &mut reg, one_copy).len();
    let oracle_joined = oracle::derive(&r, &[reg.get(j).as_ref()]).len();
    ensure(oracle_joined == 0, || {
        "oracle derives on the joined pair".into()
    })?;
    let on_pair = enumerate_derivations(&r, &[s], &[s], &mut reg, Default::default()).len();
    ensure(on_joined == 0 && on_pair >= 1, || {
        format!("joined {on_joined}, unjoined {on_pair}")
    })?;
    Ok(format!(
        "joined pair: {on_joined}, unjoined pair: {on_pair}"
    ))
}

/// Checks every hyperedge of a finished run against the oracle and the
/// trace. Returns the number of hyperedges checked.
fn revalidate(comp: &DgRuleComp) -> Result<usize, String> {
    let dg = comp.dg();
    for e in dg.hyperedges() {
        let rule = dg.rule_of(e);
        let w = e
            .witness
            .as_ref()
            .ok_or_else(|| format!("hyperedge {} has no witness", e.id))?;
        let copies: Vec<&Graph> = w.tails.iter().map(|&v| dg.graph(v).as_ref()).collect();
        let mut sorted = w.tails.clone();
        sorted.sort();
        ensure(sorted == e.tails, || {
            format!("hyperedge {}: witness tails differ", e.id)
        })?;
        let (host, owner) = oracle::union(&copies);
        let mut offsets = vec![0];
        for g in &copies {
            offsets.push(offsets.last().unwrap() + g.num_vertices());
        }
        let mut m = vec![None; rule.num_vertices()];
        for (lv, &(c, v)) in w.vertex_map.iter().enumerate() {
            m[rule.left().vertex_to_core[lv]] = Some(offsets[c] + v);
        }
        let images: Vec<usize> = m.iter().flatten().copied().collect();
        let mut uniq = images.clone();
        uniq.sort();
        uniq.dedup();
        ensure(uniq.len() == images.len(), || {
            format!("hyperedge {}: match not injective", e.id)
        })?;
        ensure(oracle::left_matches(rule, &host).contains(&m), || {
            format!("hyperedge {}: witness is not a match", e.id)
        })?;
        ensure(oracle::dangling_ok(rule, &host, &m), || {
            format!("hyperedge {}: dangling", e.id)
        })?;
        ensure(oracle::pushout_ok(rule, &host, &m), || {
            format!("hyperedge {}: no pushout", e.id)
        })?;
        let mut touched = vec![false; copies.len()];
        for &v in &images {
            touched[owner[v]] = true;
        }
        ensure(touched.iter().all(|&t| t), || {
            format!("hyperedge {}: not proper", e.id)
        })?;
        let heads = oracle::rewrite(rule, &host, &m).0.connected_components();
        let recorded: Vec<Graph> = e
            .heads
            .iter()
            .map(|&v| dg.graph(v).as_ref().clone())
            .collect();
        ensure(oracle::same_multiset(&heads, &recorded), || {
            format!("hyperedge {}: heads differ", e.id)
        })?;
    }
    let mut seen = vec![false; dg.num_hyperedges()];
    for step in comp.trace() {
        for &id in &step.accepted {
            let e = dg.hyperedge(id).ok_or("trace names a missing hyperedge")?;
            seen[id] = true;
            let classes: Vec<_> = e.tails.iter().map(|&v| dg.vertex(v).class).collect();
            ensure(classes.iter().all(|c| step.universe.contains(c)), || {
                format!("hyperedge {id}: tail outside the universe at {}", step.path)
            })?;
            ensure(classes.iter().any(|c| step.subset.contains(c)), || {
                format!("hyperedge {id}: no active tail at {}", step.path)
            })?;
        }
    }
    ensure(seen.iter().all(|&s| s), || {
        "a hyperedge is missing from the trace".into()
    })?;
    Ok(dg.num_hyperedges())
}

fn run(program: &str, config: StrategyConfig) -> Result<DgRuleComp, String> {
    let f = Formose::new();
    let (g, r) = (f.graphs(), f.rules());
    let s = parse_strategy(
        program,
        Scope {
            graphs: &g,
            rules: &r,
        },
    )
    .map_err(|e| e.to_string())?;
    let mut comp = DgRuleComp::new(&g, s).with_config(config);
    comp.calc().map_err(|e| e.to_string())?;
    Ok(comp)
}

const RN3: &str = "addUniverse(formaldehyde) >> addSubset(glycolaldehyde)
    >> rightPredicate[all(right, numVertices <= 20)](repeat(inputRules))";

fn c7_revalidation() -> Result<String, String> {
    let start = Instant::now();
    let mut checked = 0;
    let mut runs = 0;
    for n in 1..=3 {
        for cap in [12, 16, 20] {
            for new_only in [false, true] {
                let program = format!(
                    "addUniverse(formaldehyde) >> addSubset(glycolaldehyde)
                     >> rightPredicate[all(right, numVertices <= {cap})](repeat[{n}](inputRules))"
                );
                let config = StrategyConfig {
                    subset_new_only: new_only,
                    ..Default::default()
                };
                checked += revalidate(&run(&program, config)?)?;
                runs += 1;
            }
        }
    }
    checked += revalidate(&run(RN3, Default::default())?)?;
    runs += 1;
    within(Duration::from_secs(60), start)?;
    Ok(format!(
        "{checked} hyperedges over {runs} runs, 0 violations, {:?}",
        start.elapsed()
    ))
}

fn multisets(pool: &[Arc<Graph>], k: usize) -> Vec<Vec<&Graph>> {
    fn go<'a>(
        pool: &'a [Arc<Graph>],
        k: usize,
        from: usize,
        cur: &mut Vec<&'a Graph>,
        out: &mut Vec<Vec<&'a Graph>>,
    ) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in from..pool.len() {
            cur.push(pool[i].as_ref());
            go(pool, k, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(pool, k, 0, &mut Vec::new(), &mut out);
    out
}

fn c8_composition_oracle() -> Result<String, String> {
    let start = Instant::now();
    let f = Formose::new();
    let rules = f.rules();
    let kinds = [
        RcOverlapKind::Parallel,
        RcOverlapKind::Super {
            allow_partial: true,
        },
        RcOverlapKind::Super {
            allow_partial: false,
        },
        RcOverlapKind::Sub {
            allow_partial: true,
        },
        RcOverlapKind::Sub {
            allow_partial: false,
        },
        RcOverlapKind::Common,
    ];
    // one group per (rule pair, overlap kind); the sample takes one overlap
    // per group in turn so that no single kind dominates
    type Candidate = (Arc<Rule>, Arc<Rule>, Vec<(usize, usize)>, Rule);
    let mut groups: Vec<Vec<Candidate>> = Vec::new();
    for p1 in &rules {
        for p2 in &rules {
            for kind in kinds {
                let group: Vec<Candidate> =
                    enumerate_overlaps(p1, p2, kind, OverlapLimits::default())
                        .into_iter()
                        .filter_map(|o| {
                            let r = compose(p1, p2, &o, "composed").ok()?;
                            Some((p1.clone(), p2.clone(), o.vertices, r))
                        })
                        .collect();
                if !group.is_empty() {
                    groups.push(group);
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0xc0de);
    groups.shuffle(&mut rng);
    for g in &mut groups {
        g.shuffle(&mut rng);
    }
    let mut candidates: Vec<Candidate> = Vec::new();
    while candidates.len() < 30 && groups.iter().any(|g| !g.is_empty()) {
        for g in &mut groups {
            if candidates.len() < 30 {
                if let Some(c) = g.pop() {
                    candidates.push(c);
                }
            }
        }
    }
    ensure(candidates.len() == 30, || {
        format!("only {} composable overlaps", candidates.len())
    })?;

    let pool_run = run(
        "addUniverse(formaldehyde) >> addSubset(glycolaldehyde) >> repeat[3](inputRules)",
        Default::default(),
    )?;
    let pool: Vec<Arc<Graph>> = pool_run
        .dg()
        .vertices()
        .iter()
        .map(|v| v.graph.clone())
        .filter(|g| g.num_vertices() <= 8)
        .collect();

    let mut compared = 0;
    let mut nonempty = 0;
    for (i, (p1, p2, overlap, composed)) in candidates.iter().enumerate() {
        let k = composed.left_graph().connected_components().len();
        for tails in multisets(&pool, k) {
            let direct = oracle::distinct(oracle::derive(composed, &tails));
            let sequential = oracle::distinct(oracle::derive_sequential(p1, p2, overlap, &tails));
            let agree = direct.len() == sequential.len()
                && direct
                    .iter()
                    .all(|d| sequential.iter().any(|s| oracle::same_multiset(d, s)));
            ensure(agree, || {
                format!(
                    "overlap {i} ({} then {}, {:?}): direct {} vs sequential {} head multisets",
                    p1.name(),
                    p2.name(),
                    overlap,
                    direct.len(),
                    sequential.len()
                )
            })?;
            compared += 1;
            if !direct.is_empty() {
                nonempty += 1;
            }
        }
    }
    ensure(nonempty > 0, || {
        "no tail multiset admits a derivation".into()
    })?;
    within(Duration::from_secs(120), start)?;
    Ok(format!(
        "30 overlaps, {compared} tail multisets ({nonempty} with derivations), 0 discrepancies, {:?}",
        start.elapsed()
    ))
}

fn c9_overall_formose_rule() -> Result<String, String> {
    let f = Formose::new();
    let (g, r) = (f.graphs(), f.rules());
    let e = parse_rc_expression(
        RC4,
        Scope {
            graphs: &g,
            rules: &r,
        },
    )
    .map_err(|e| e.to_string())?;
    let out = RcEvaluator::new(r.clone()).eval(&e);
    let want_left = [
        f.glycolaldehyde.as_ref().clone(),
        f.formaldehyde.as_ref().clone(),
        f.formaldehyde.as_ref().clone(),
    ];
    let want_right = [
        f.glycolaldehyde.as_ref().clone(),
        f.glycolaldehyde.as_ref().clone(),
    ];
    let hit = out.iter().find(|x| {
        oracle::same_multiset(&x.left_graph().connected_components(), &want_left)
            && oracle::same_multiset(&x.right_graph().connected_components(), &want_right)
    });
    let hit =
        hit.ok_or_else(|| format!("none of {} rules has the overall stoichiometry", out.len()))?;
    let tails = [
        f.glycolaldehyde.as_ref(),
        f.formaldehyde.as_ref(),
        f.formaldehyde.as_ref(),
    ];
    let applied = oracle::distinct(oracle::derive(hit, &tails));
    ensure(
        applied
            .iter()
            .any(|h| oracle::same_multiset(h, &want_right)),
        || {
            format!(
                "{} does not rewrite the educts into two glycolaldehydes",
                hit.name()
            )
        },
    )?;
    Ok(format!(
        "{} of {} rules: glycolaldehyde + 2 formaldehyde => 2 glycolaldehyde",
        hit.name(),
        out.len()
    ))
}

fn c10_constraint() -> Result<String, String> {
    let comp = run(RN3, Default::default())?;
    let dg = comp.dg();
    let inputs = comp.input_classes();
    let big: Vec<_> = dg
        .vertices()
        .iter()
        .filter(|v| !inputs.contains(&v.class) && v.graph.num_vertices() > 20)
        .map(|v| v.graph.name().to_owned())
        .collect();
    ensure(big.is_empty(), || format!("oversized classes {big:?}"))?;
    let largest = dg
        .vertices()
        .iter()
        .map(|v| v.graph.num_vertices())
        .max()
        .unwrap_or(0);
    Ok(format!(
        "{} classes, largest has {largest} vertices",
        dg.num_vertices()
    ))
}

fn c11_exports() -> Result<String, String> {
    let dgs = [
        run(RN3, Default::default())?.into_dg(),
        run(
            "addSubset(formaldehyde) >> repeat[4](inputRules)",
            Default::default(),
        )?
        .into_dg(),
        DerivationGraph::new(),
    ];
    let mut hooked = ExportOptions::new();
    hooked.push_vertex_label(|g, _| format!("C{}", g.v_label_count("C")));
    hooked.push_vertex_colour(|g, _| {
        if g.num_vertices() > 10 {
            "red".into()
        } else {
            String::new()
        }
    });
    hooked.push_vertex_visible(|g, _| g.v_label_count("C") <= 4);
    for dg in &dgs {
        for opts in [&ExportOptions::new(), &hooked] {
            check_dot(&export_dot(dg, opts))?;
        }
        let back = import_json(&export_json(dg)).map_err(|e| e.to_string())?;
        ensure(back.num_vertices() == dg.num_vertices(), || {
            "class count changed".into()
        })?;
        ensure(back.hyperedge_multiset() == dg.hyperedge_multiset(), || {
            "hyperedges changed".into()
        })?;
    }
    Ok(format!(
        "{} derivation graphs: DOT parses, JSON round-trips",
        dgs.len()
    ))
}

fn main() {
    let criteria: [(&str, Check); 11] = [
        ("four-ethanol equivalence", c1_four_ethanols),
        ("morphism oracle equivalence", c2_morphism_oracle),
        ("methyl counting", c3_methyl),
        ("caffeine parse", c4_caffeine),
        ("keto-enol derivation", c5_keto_enol),
        ("pushout-existence rejection", c6_pushout_rejection),
        ("derivation re-validation", c7_revalidation),
        ("composition soundness oracle", c8_composition_oracle),
        ("overall formose rule", c9_overall_formose_rule),
        ("constraint enforcement", c10_constraint),
        ("export validity", c11_exports),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
