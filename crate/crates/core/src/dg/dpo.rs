use serde::Serialize;

use crate::graph::{Graph, GraphBuilder, VertexId};
use crate::io::{write_graph_gml, write_rule_gml};
use crate::rule::{Membership, Rule};

use super::{DerivationGraph, HyperedgeId};

/// Both squares of a direct derivation: the bottom span `G <- D -> H`
/// and the vertex maps of the vertical morphisms.
#[derive(Debug, Clone)]
pub struct DpoDiagram {
    pub g: Graph,
    pub d: Graph,
    pub h: Graph,
    /// `m: L -> G`.
    pub l_to_g: Vec<VertexId>,
    /// `K -> D`.
    pub k_to_d: Vec<VertexId>,
    /// `R -> H`.
    pub r_to_h: Vec<VertexId>,
    /// `D -> G`.
    pub d_to_g: Vec<VertexId>,
    /// `D -> H`.
    pub d_to_h: Vec<VertexId>,
}

/// Builds the diagram for a match `map: L -> host` that satisfies both
/// application conditions. `D` keeps the labels of `G`; label changes
/// happen in `D -> H`.
pub fn dpo_diagram(rule: &Rule, host: &Graph, map: &[VertexId]) -> DpoDiagram {
    let left = rule.left();
    let mut core_in_g = vec![None; rule.num_vertices()];
    for (lv, &cv) in left.vertex_to_core.iter().enumerate() {
        core_in_g[cv] = Some(map[lv]);
    }
    let mut g_deleted = vec![false; host.num_vertices()];
    let mut g_relabel: Vec<Option<&str>> = vec![None; host.num_vertices()];
    for (cv, v) in rule.vertices().iter().enumerate() {
        if let Some(gv) = core_in_g[cv] {
            match &v.right {
                None => g_deleted[gv] = true,
                Some(r) => g_relabel[gv] = Some(r),
            }
        }
    }
    let mut e_deleted = vec![false; host.num_edges()];
    let mut e_relabel: Vec<Option<&str>> = vec![None; host.num_edges()];
    for e in rule.edges() {
        if let (Some(a), Some(b)) = (core_in_g[e.source], core_in_g[e.target]) {
            if e.left.is_none() {
                continue;
            }
            let he = host.edge_between(a, b).expect("match preserves adjacency");
            match &e.right {
                None => e_deleted[he] = true,
                Some(r) => e_relabel[he] = Some(r),
            }
        }
    }

    let mut db = GraphBuilder::new();
    let mut hb = GraphBuilder::new();
    let mut g_to_d = vec![usize::MAX; host.num_vertices()];
    let mut d_to_g = Vec::new();
    for v in host.vertices() {
        if !g_deleted[v] {
            g_to_d[v] = db.add_vertex_unchecked(host.label(v), host.external_id(v));
            hb.add_vertex_unchecked(g_relabel[v].unwrap_or(host.label(v)), host.external_id(v));
            d_to_g.push(v);
        }
    }
    for (i, e) in host.edges().iter().enumerate() {
        if !e_deleted[i] {
            let (s, t) = (g_to_d[e.source], g_to_d[e.target]);
            db.add_edge_unchecked(s, t, &e.label);
            hb.add_edge_unchecked(s, t, e_relabel[i].unwrap_or(&e.label));
        }
    }
    let d = db.build();
    let d_to_h: Vec<VertexId> = d.vertices().collect();
    let mut core_in_h = vec![usize::MAX; rule.num_vertices()];
    for (cv, v) in rule.vertices().iter().enumerate() {
        match v.membership() {
            Membership::Context => core_in_h[cv] = g_to_d[core_in_g[cv].unwrap()],
            Membership::Right => {
                core_in_h[cv] = hb.add_vertex_unchecked(v.right.as_deref().unwrap(), -1)
            }
            Membership::Left => {}
        }
    }
    for e in rule.edges() {
        if e.membership() == Membership::Right {
            hb.add_edge_unchecked(
                core_in_h[e.source],
                core_in_h[e.target],
                e.right.as_deref().unwrap(),
            );
        }
    }
    let h = hb.build();
    let k_to_d = rule
        .context()
        .vertex_to_core
        .iter()
        .map(|&cv| g_to_d[core_in_g[cv].unwrap()])
        .collect();
    let r_to_h = rule
        .right()
        .vertex_to_core
        .iter()
        .map(|&cv| core_in_h[cv])
        .collect();
    DpoDiagram {
        g: host.clone(),
        d,
        h,
        l_to_g: map.to_vec(),
        k_to_d,
        r_to_h,
        d_to_g,
        d_to_h,
    }
}

#[derive(Serialize)]
struct DpoJson {
    hyperedge: HyperedgeId,
    rule: String,
    #[serde(rename = "ruleGml")]
    rule_gml: String,
    #[serde(rename = "L")]
    l: String,
    #[serde(rename = "K")]
    k: String,
    #[serde(rename = "R")]
    r: String,
    #[serde(rename = "G")]
    g: String,
    #[serde(rename = "D")]
    d: String,
    #[serde(rename = "H")]
    h: String,
    #[serde(rename = "LtoG")]
    l_to_g: Vec<VertexId>,
    #[serde(rename = "KtoD")]
    k_to_d: Vec<VertexId>,
    #[serde(rename = "RtoH")]
    r_to_h: Vec<VertexId>,
    #[serde(rename = "DtoG")]
    d_to_g: Vec<VertexId>,
    #[serde(rename = "DtoH")]
    d_to_h: Vec<VertexId>,
    /// Derivation-graph vertex of each copy making up `G`, in order.
    copies: Vec<usize>,
}

/// The DPO diagram of one hyperedge, from its stored witness, as JSON
/// with embedded GML.
pub fn export_derivation_dpo(dg: &DerivationGraph, e: HyperedgeId) -> Result<String, String> {
    let edge = dg
        .hyperedge(e)
        .ok_or_else(|| format!("unknown hyperedge {e}"))?;
    let witness = edge
        .witness
        .as_ref()
        .ok_or_else(|| format!("hyperedge {e} has no stored match"))?;
    let rule = dg.rule_of(edge);
    let copies: Vec<&Graph> = witness
        .tails
        .iter()
        .map(|&v| dg.graph(v).as_ref())
        .collect();
    let (host, map) = witness.assemble_from(&copies);
    let diagram = dpo_diagram(rule, &host, &map);
    let doc = DpoJson {
        hyperedge: e,
        rule: rule.name().to_string(),
        rule_gml: write_rule_gml(rule),
        l: write_graph_gml(rule.left_graph()),
        k: write_graph_gml(rule.context_graph()),
        r: write_graph_gml(rule.right_graph()),
        g: write_graph_gml(&diagram.g),
        d: write_graph_gml(&diagram.d),
        h: write_graph_gml(&diagram.h),
        l_to_g: diagram.l_to_g,
        k_to_d: diagram.k_to_d,
        r_to_h: diagram.r_to_h,
        d_to_g: diagram.d_to_g,
        d_to_h: diagram.d_to_h,
        copies: witness.tails.clone(),
    };
    Ok(serde_json::to_string_pretty(&doc).expect("serialisable"))
}
