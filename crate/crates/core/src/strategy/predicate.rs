use std::fmt;
use std::sync::Arc;

use crate::graph::Graph;
use crate::rule::Rule;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Atom {
    NumVertices,
    NumEdges,
    VLabelCount(String),
}

impl Atom {
    pub fn eval(&self, g: &Graph) -> i64 {
        (match self {
            Atom::NumVertices => g.num_vertices(),
            Atom::NumEdges => g.num_edges(),
            Atom::VLabelCount(l) => g.v_label_count(l),
        }) as i64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Lt,
    Eq,
    Ge,
    Gt,
}

impl Cmp {
    pub fn holds(self, a: i64, b: i64) -> bool {
        match self {
            Cmp::Le => a <= b,
            Cmp::Lt => a < b,
            Cmp::Eq => a == b,
            Cmp::Ge => a >= b,
            Cmp::Gt => a > b,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Cmp::Le => "<=",
            Cmp::Lt => "<",
            Cmp::Eq => "==",
            Cmp::Ge => ">=",
            Cmp::Gt => ">",
        }
    }
}

/// `atom cmp value`, e.g. `numVertices <= 20`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphPredicate {
    pub atom: Atom,
    pub cmp: Cmp,
    pub value: i64,
}

impl GraphPredicate {
    pub fn new(atom: Atom, cmp: Cmp, value: i64) -> GraphPredicate {
        GraphPredicate { atom, cmp, value }
    }

    pub fn holds(&self, g: &Graph) -> bool {
        self.cmp.holds(self.atom.eval(g), self.value)
    }
}

impl fmt::Display for GraphPredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.atom {
            Atom::NumVertices => write!(f, "numVertices")?,
            Atom::NumEdges => write!(f, "numEdges")?,
            Atom::VLabelCount(l) => write!(f, "vLabelCount({l:?})")?,
        }
        write!(f, " {} {}", self.cmp.symbol(), self.value)
    }
}

/// Graph test used by filters.
#[derive(Clone)]
pub enum GraphFilter {
    Closed(GraphPredicate),
    Custom(Arc<dyn Fn(&Graph) -> bool + Send + Sync>),
}

impl GraphFilter {
    pub fn holds(&self, g: &Graph) -> bool {
        match self {
            GraphFilter::Closed(p) => p.holds(g),
            GraphFilter::Custom(f) => f(g),
        }
    }
}

impl fmt::Debug for GraphFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphFilter::Closed(p) => write!(f, "{p}"),
            GraphFilter::Custom(_) => write!(f, "<custom>"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantifier {
    All,
    Any,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivationSide {
    Left,
    Right,
}

/// A candidate derivation as seen by predicates. `right` is absent while
/// left predicates run.
pub struct DerivationView<'a> {
    pub rule: &'a Rule,
    pub left: &'a [&'a Graph],
    pub right: Option<&'a [Graph]>,
}

pub type DerivationCheck = dyn Fn(&DerivationView) -> Result<bool, String> + Send + Sync;

#[derive(Clone)]
pub enum DerivationPredicate {
    /// `all(side, pred)` or `any(side, pred)`.
    Closed {
        quantifier: Quantifier,
        side: DerivationSide,
        pred: GraphPredicate,
    },
    Custom(Arc<DerivationCheck>),
}

impl fmt::Debug for DerivationPredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DerivationPredicate::Closed {
                quantifier,
                side,
                pred,
            } => {
                let q = if *quantifier == Quantifier::All {
                    "all"
                } else {
                    "any"
                };
                let s = if *side == DerivationSide::Left {
                    "left"
                } else {
                    "right"
                };
                write!(f, "{q}({s}, {pred})")
            }
            DerivationPredicate::Custom(_) => write!(f, "<custom>"),
        }
    }
}

impl DerivationPredicate {
    pub fn eval(&self, d: &DerivationView) -> Result<bool, String> {
        match self {
            DerivationPredicate::Custom(f) => f(d),
            DerivationPredicate::Closed {
                quantifier,
                side,
                pred,
            } => {
                let graphs: Vec<&Graph> = match side {
                    DerivationSide::Left => d.left.to_vec(),
                    DerivationSide::Right => d
                        .right
                        .ok_or("the right side is not available to a left predicate")?
                        .iter()
                        .collect(),
                };
                Ok(match quantifier {
                    Quantifier::All => graphs.iter().all(|g| pred.holds(g)),
                    Quantifier::Any => graphs.iter().any(|g| pred.holds(g)),
                })
            }
        }
    }
}
