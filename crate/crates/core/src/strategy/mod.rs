//! Exploration strategies over `(subset, universe)` states.
//!
//! A state holds two sets of graph classes, the active subset and the
//! universe containing it. Rule steps derive new graphs from the universe
//! using at least one active educt and record every accepted derivation
//! in a derivation graph.

use std::collections::{BTreeSet, HashSet};
use std::ops::ControlFlow;
use std::sync::Arc;

use thiserror::Error;

use crate::derivation::{for_each_match, heads_of, DerivationMatch, EnumerationLimits};
use crate::dg::{DerivationGraph, HyperedgeId};
use crate::graph::Graph;
use crate::registry::{ClassId, GraphRegistry};
use crate::rule::Rule;

mod parse;
mod predicate;

pub use parse::parse_strategy;
pub use predicate::{
    Atom, Cmp, DerivationCheck, DerivationPredicate, DerivationSide, DerivationView, GraphFilter,
    GraphPredicate, Quantifier,
};

#[derive(Debug, Clone)]
pub enum Strategy {
    /// `a >> b`.
    Sequence(Box<Strategy>, Box<Strategy>),
    /// `[a, b, ...]`: every child on the same input, outputs merged.
    Parallel(Vec<Strategy>),
    Rule(Arc<Rule>),
    AddSubset(Vec<Arc<Graph>>),
    AddUniverse(Vec<Arc<Graph>>),
    FilterSubset(GraphFilter),
    FilterUniverse(GraphFilter),
    LeftPredicate(DerivationPredicate, Box<Strategy>),
    RightPredicate(DerivationPredicate, Box<Strategy>),
    /// Bounded or unbounded iteration.
    Repeat(Option<usize>, Box<Strategy>),
    Revive(Box<Strategy>),
}

impl Strategy {
    pub fn then(self, next: Strategy) -> Strategy {
        Strategy::Sequence(Box::new(self), Box::new(next))
    }

    /// All `rules` in parallel.
    pub fn rules(rules: &[Arc<Rule>]) -> Strategy {
        Strategy::Parallel(rules.iter().cloned().map(Strategy::Rule).collect())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GraphState {
    pub subset: BTreeSet<ClassId>,
    pub universe: BTreeSet<ClassId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StrategyConfig {
    /// Iteration bound for `repeat` without an explicit count.
    pub repeat_cap: usize,
    /// Put only classes new to the universe into a rule step's output.
    pub subset_new_only: bool,
    pub limits: EnumerationLimits,
}

impl Default for StrategyConfig {
    fn default() -> Self {
        StrategyConfig {
            repeat_cap: 1 << 20,
            subset_new_only: false,
            limits: EnumerationLimits::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrategyError {
    #[error("at {path}: predicate failed: {message}")]
    Predicate { path: String, message: String },
    #[error("at {path}: subset is not contained in the universe")]
    Invariant { path: String },
    #[error("calc() has already been run")]
    AlreadyCalculated,
}

/// One executed rule step: its input state and the hyperedges it
/// accepted.
#[derive(Debug, Clone)]
pub struct TraceStep {
    pub path: String,
    pub rule: Arc<Rule>,
    pub subset: BTreeSet<ClassId>,
    pub universe: BTreeSet<ClassId>,
    pub accepted: Vec<HyperedgeId>,
}

struct Frame {
    left: bool,
    pred: DerivationPredicate,
}

/// Runs a strategy from the empty state and keeps the resulting
/// derivation graph.
pub struct DgRuleComp {
    registry: GraphRegistry,
    dg: DerivationGraph,
    strategy: Strategy,
    config: StrategyConfig,
    inputs: Vec<ClassId>,
    trace: Vec<TraceStep>,
    diagnostics: Vec<String>,
    preds: Vec<Frame>,
    revive: Vec<HashSet<ClassId>>,
    result: Option<GraphState>,
}

impl DgRuleComp {
    pub fn new(starting: &[Arc<Graph>], strategy: Strategy) -> DgRuleComp {
        let mut registry = GraphRegistry::new();
        let mut inputs = Vec::new();
        for g in starting {
            let (c, _) = registry.insert(g.clone());
            if !inputs.contains(&c) {
                inputs.push(c);
            }
        }
        DgRuleComp {
            registry,
            dg: DerivationGraph::new(),
            strategy,
            config: StrategyConfig::default(),
            inputs,
            trace: Vec::new(),
            diagnostics: Vec::new(),
            preds: Vec::new(),
            revive: Vec::new(),
            result: None,
        }
    }

    pub fn with_config(mut self, config: StrategyConfig) -> DgRuleComp {
        self.config = config;
        self
    }

    /// Evaluates the strategy. May be called once.
    pub fn calc(&mut self) -> Result<&GraphState, StrategyError> {
        if self.result.is_some() {
            return Err(StrategyError::AlreadyCalculated);
        }
        let strategy = self.strategy.clone();
        let out = self.eval(&strategy, &GraphState::default(), "")?;
        Ok(self.result.insert(out))
    }

    pub fn is_calculated(&self) -> bool {
        self.result.is_some()
    }

    pub fn state(&self) -> Option<&GraphState> {
        self.result.as_ref()
    }

    pub fn dg(&self) -> &DerivationGraph {
        &self.dg
    }

    pub fn into_dg(self) -> DerivationGraph {
        self.dg
    }

    pub fn registry(&self) -> &GraphRegistry {
        &self.registry
    }

    /// Classes of the starting graphs.
    pub fn input_classes(&self) -> &[ClassId] {
        &self.inputs
    }

    pub fn trace(&self) -> &[TraceStep] {
        &self.trace
    }

    /// Warnings such as an unbounded repeat reaching its cap.
    pub fn diagnostics(&self) -> &[String] {
        &self.diagnostics
    }

    fn add(&mut self, graphs: &[Arc<Graph>]) -> Vec<ClassId> {
        graphs
            .iter()
            .map(|g| {
                let (c, _) = self.registry.insert(g.clone());
                let g = self.registry.get(c).clone();
                self.dg.add_vertex(c, &g);
                c
            })
            .collect()
    }

    fn eval(
        &mut self,
        s: &Strategy,
        input: &GraphState,
        path: &str,
    ) -> Result<GraphState, StrategyError> {
        let out = match s {
            Strategy::Sequence(a, b) => {
                let mid = self.eval(a, input, &format!("{path}/seq[0]"))?;
                self.eval(b, &mid, &format!("{path}/seq[1]"))?
            }
            Strategy::Parallel(children) => {
                let mut out = GraphState::default();
                for (i, c) in children.iter().enumerate() {
                    let r = self.eval(c, input, &format!("{path}/par[{i}]"))?;
                    out.subset.extend(r.subset);
                    out.universe.extend(r.universe);
                }
                out
            }
            Strategy::Rule(r) => self.rule_step(r, input, &format!("{path}/rule({})", r.name()))?,
            Strategy::AddSubset(gs) => {
                let mut out = input.clone();
                for c in self.add(gs) {
                    out.subset.insert(c);
                    out.universe.insert(c);
                }
                out
            }
            Strategy::AddUniverse(gs) => {
                let mut out = input.clone();
                out.universe.extend(self.add(gs));
                out
            }
            Strategy::FilterSubset(f) => {
                let mut out = input.clone();
                out.subset.retain(|&c| f.holds(self.registry.get(c)));
                out
            }
            Strategy::FilterUniverse(f) => {
                let mut out = input.clone();
                out.universe.retain(|&c| f.holds(self.registry.get(c)));
                let universe = &out.universe;
                out.subset.retain(|c| universe.contains(c));
                out
            }
            Strategy::LeftPredicate(p, sub) | Strategy::RightPredicate(p, sub) => {
                let left = matches!(s, Strategy::LeftPredicate(..));
                let tag = if left {
                    "leftPredicate"
                } else {
                    "rightPredicate"
                };
                self.preds.push(Frame {
                    left,
                    pred: p.clone(),
                });
                let r = self.eval(sub, input, &format!("{path}/{tag}"));
                self.preds.pop();
                r?
            }
            Strategy::Repeat(n, sub) => self.repeat(*n, sub, input, path)?,
            Strategy::Revive(sub) => {
                self.revive.push(HashSet::new());
                let r = self.eval(sub, input, &format!("{path}/revive"));
                let used = self.revive.pop().expect("pushed above");
                let mut out = r?;
                for &c in &input.subset {
                    if !used.contains(&c) && out.universe.contains(&c) {
                        out.subset.insert(c);
                    }
                }
                out
            }
        };
        if !out.subset.is_subset(&out.universe) {
            return Err(StrategyError::Invariant {
                path: path.to_string(),
            });
        }
        Ok(out)
    }

    fn repeat(
        &mut self,
        n: Option<usize>,
        sub: &Strategy,
        input: &GraphState,
        path: &str,
    ) -> Result<GraphState, StrategyError> {
        let bound = n.unwrap_or(self.config.repeat_cap);
        let mut state = input.clone();
        for i in 0..bound {
            let next = self.eval(sub, &state, &format!("{path}/repeat[{i}]"))?;
            if next.subset.is_empty() {
                return Ok(state);
            }
            let grew = !next.universe.is_subset(&state.universe);
            state = next;
            if !grew {
                return Ok(state);
            }
        }
        if n.is_none() {
            self.diagnostics.push(format!(
                "{}: repeat stopped after reaching its cap of {bound} iterations",
                if path.is_empty() { "/" } else { path }
            ));
        }
        Ok(state)
    }

    fn rule_step(
        &mut self,
        rule: &Arc<Rule>,
        input: &GraphState,
        path: &str,
    ) -> Result<GraphState, StrategyError> {
        let universe: Vec<(ClassId, Arc<Graph>)> = input
            .universe
            .iter()
            .map(|&c| (c, self.registry.get(c).clone()))
            .collect();
        let mut candidates: Vec<DerivationMatch> = Vec::new();
        for_each_match(
            rule,
            &universe,
            |c| input.subset.contains(&c),
            self.config.limits,
            |m, _| {
                candidates.push(m.clone());
                ControlFlow::Continue(())
            },
        );

        let mut out = GraphState {
            subset: BTreeSet::new(),
            universe: input.universe.clone(),
        };
        let mut accepted = Vec::new();
        for m in candidates {
            let copies: Vec<Arc<Graph>> = m
                .tails
                .iter()
                .map(|&c| self.registry.get(c).clone())
                .collect();
            let copy_refs: Vec<&Graph> = copies.iter().map(|g| g.as_ref()).collect();
            if !self.check(rule, &copy_refs, None, path)? {
                continue;
            }
            let heads = heads_of(rule, &m, &copy_refs);
            if !self.check(rule, &copy_refs, Some(&heads), path)? {
                continue;
            }
            let head_classes: Vec<ClassId> = heads
                .into_iter()
                .map(|h| self.registry.insert_derived(h).0)
                .collect();
            let tail_vertices: Vec<usize> = m
                .tails
                .iter()
                .map(|&c| {
                    let g = self.registry.get(c).clone();
                    self.dg.add_vertex(c, &g)
                })
                .collect();
            let head_vertices: Vec<usize> = head_classes
                .iter()
                .map(|&c| {
                    let g = self.registry.get(c).clone();
                    self.dg.add_vertex(c, &g)
                })
                .collect();
            let witness = DerivationMatch {
                tails: tail_vertices.clone(),
                vertex_map: m.vertex_map.clone(),
            };
            let (e, _) = self
                .dg
                .add_hyperedge(rule, tail_vertices, head_vertices, Some(witness));
            if !accepted.contains(&e) {
                accepted.push(e);
            }
            for frame in &mut self.revive {
                frame.extend(m.tails.iter().copied());
            }
            for c in head_classes {
                if !self.config.subset_new_only || !input.universe.contains(&c) {
                    out.subset.insert(c);
                }
            }
        }
        out.universe.extend(out.subset.iter().copied());
        self.trace.push(TraceStep {
            path: path.to_string(),
            rule: rule.clone(),
            subset: input.subset.clone(),
            universe: input.universe.clone(),
            accepted,
        });
        Ok(out)
    }

    /// Left predicates when `heads` is absent, right predicates otherwise.
    fn check(
        &self,
        rule: &Rule,
        tails: &[&Graph],
        heads: Option<&[Graph]>,
        path: &str,
    ) -> Result<bool, StrategyError> {
        let view = DerivationView {
            rule,
            left: tails,
            right: heads,
        };
        for frame in &self.preds {
            if frame.left != heads.is_none() {
                continue;
            }
            let ok = frame
                .pred
                .eval(&view)
                .map_err(|message| StrategyError::Predicate {
                    path: path.to_string(),
                    message,
                })?;
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
