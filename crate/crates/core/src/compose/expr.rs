//! Composition expressions: AST, text syntax and evaluation.
//!
//! ```text
//! exp  := term (op term)*            left associative
//! term := "(" exp ")" | "rcBind(" refs ")" | "rcUnbind(" refs ")"
//!       | "rcId(" refs ")" | ruleRef
//! op   := "*rcParallel*" | "*rcSuper*" | "*rcSuper(allowPartial=false)*"
//!       | "*rcSub*" | "*rcSub(allowPartial=false)*" | "*rcCommon*"
//! ```
//!
//! `inputGraphs` and `inputRules` refer to every graph or rule in scope.

use std::collections::HashMap;
use std::sync::Arc;

use crate::graph::Graph;
use crate::io::ParseError;
use crate::rule::Rule;
use crate::Scope;

use super::{compose, enumerate_overlaps, rc_bind, rc_id, rc_unbind, OverlapLimits, RcOverlapKind};

pub type RcOperator = RcOverlapKind;

#[derive(Debug, Clone)]
pub enum RcExpression {
    Rules(Vec<Arc<Rule>>),
    Bind(Vec<Arc<Graph>>),
    Unbind(Vec<Arc<Graph>>),
    Id(Vec<Arc<Graph>>),
    Compose(Box<RcExpression>, RcOperator, Box<RcExpression>),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Op(RcOperator),
    Open,
    Close,
    Comma,
}

fn step(chars: &[char], i: &mut usize, line: &mut usize, col: &mut usize) {
    if chars[*i] == '\n' {
        *line += 1;
        *col = 1;
    } else {
        *col += 1;
    }
    *i += 1;
}

fn lex(text: &str) -> Result<Vec<(Tok, usize, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c.is_whitespace() {
            step(&chars, &mut i, &mut line, &mut col);
        } else if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                step(&chars, &mut i, &mut line, &mut col);
            }
        } else if c == '(' || c == ')' || c == ',' {
            step(&chars, &mut i, &mut line, &mut col);
            out.push((
                match c {
                    '(' => Tok::Open,
                    ')' => Tok::Close,
                    _ => Tok::Comma,
                },
                l0,
                c0,
            ));
        } else if c == '*' {
            let start = i + 1;
            let end = chars[start..]
                .iter()
                .position(|&x| x == '*')
                .map(|p| start + p)
                .ok_or_else(|| ParseError::new(l0, c0, "unterminated operator"))?;
            let word: String = chars[start..end]
                .iter()
                .filter(|c| !c.is_whitespace())
                .collect();
            let op = parse_operator(&word)
                .ok_or_else(|| ParseError::new(l0, c0, format!("unknown operator *{word}*")))?;
            while i <= end {
                step(&chars, &mut i, &mut line, &mut col);
            }
            out.push((Tok::Op(op), l0, c0));
        } else if c.is_alphanumeric() || c == '_' {
            let mut s = String::new();
            while i < chars.len()
                && (chars[i].is_alphanumeric() || matches!(chars[i], '_' | '-' | '.'))
            {
                s.push(chars[i]);
                step(&chars, &mut i, &mut line, &mut col);
            }
            out.push((Tok::Ident(s), l0, c0));
        } else {
            return Err(ParseError::new(
                l0,
                c0,
                format!("unexpected character {c:?}"),
            ));
        }
    }
    Ok(out)
}

fn parse_operator(word: &str) -> Option<RcOperator> {
    let (name, partial) = match word.split_once('(') {
        None => (word, true),
        Some((name, rest)) => {
            let arg = rest.strip_suffix(')')?;
            let (key, value) = arg.split_once('=')?;
            if key != "allowPartial" {
                return None;
            }
            let value = match value {
                "false" | "False" => false,
                "true" | "True" => true,
                _ => return None,
            };
            (name, value)
        }
    };
    match name {
        "rcParallel" if !word.contains('(') => Some(RcOverlapKind::Parallel),
        "rcCommon" if !word.contains('(') => Some(RcOverlapKind::Common),
        "rcSuper" => Some(RcOverlapKind::Super {
            allow_partial: partial,
        }),
        "rcSub" => Some(RcOverlapKind::Sub {
            allow_partial: partial,
        }),
        _ => None,
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    scope: Scope<'a>,
    end: (usize, usize),
}

impl<'a> Parser<'a> {
    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map_or(self.end, |t| (t.1, t.2))
    }

    fn error(&self, msg: impl Into<String>) -> ParseError {
        let (l, c) = self.here();
        ParseError::new(l, c, msg)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    fn expression(&mut self) -> Result<RcExpression, ParseError> {
        let mut e = self.term()?;
        while let Some(Tok::Op(op)) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            e = RcExpression::Compose(Box::new(e), op, Box::new(rhs));
        }
        Ok(e)
    }

    fn term(&mut self) -> Result<RcExpression, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Open) => {
                self.pos += 1;
                let e = self.expression()?;
                self.expect(Tok::Close, "')'")?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match name.as_str() {
                    "rcBind" => Ok(RcExpression::Bind(self.graph_refs()?)),
                    "rcUnbind" => Ok(RcExpression::Unbind(self.graph_refs()?)),
                    "rcId" => Ok(RcExpression::Id(self.graph_refs()?)),
                    "inputRules" => Ok(RcExpression::Rules(self.scope.rules.to_vec())),
                    _ => {
                        let found: Vec<Arc<Rule>> = self
                            .scope
                            .rules
                            .iter()
                            .filter(|r| r.name() == name)
                            .cloned()
                            .collect();
                        if found.is_empty() {
                            self.pos -= 1;
                            return Err(self.error(format!("unknown rule '{name}'")));
                        }
                        Ok(RcExpression::Rules(found))
                    }
                }
            }
            _ => Err(self.error("expected a rule, rcBind, rcUnbind, rcId or '('")),
        }
    }

    fn graph_refs(&mut self) -> Result<Vec<Arc<Graph>>, ParseError> {
        self.expect(Tok::Open, "'('")?;
        let mut out = Vec::new();
        loop {
            match self.peek().cloned() {
                Some(Tok::Ident(name)) => {
                    if name == "inputGraphs" {
                        out.extend(self.scope.graphs.iter().cloned());
                    } else {
                        let g = self
                            .scope
                            .graphs
                            .iter()
                            .find(|g| g.name() == name)
                            .ok_or_else(|| self.error(format!("unknown graph '{name}'")))?;
                        out.push(g.clone());
                    }
                    self.pos += 1;
                }
                _ => return Err(self.error("expected a graph name")),
            }
            match self.peek() {
                Some(Tok::Comma) => self.pos += 1,
                _ => break,
            }
        }
        self.expect(Tok::Close, "')'")?;
        Ok(out)
    }
}

/// Parses an expression, resolving names against `scope`.
pub fn parse_rc_expression(text: &str, scope: Scope) -> Result<RcExpression, ParseError> {
    let toks = lex(text)?;
    let lines: Vec<&str> = text.split('\n').collect();
    let end = (
        lines.len(),
        lines.last().map_or(0, |l| l.chars().count()) + 1,
    );
    let mut p = Parser {
        toks,
        pos: 0,
        scope,
        end,
    };
    if p.toks.is_empty() {
        return Err(p.error("empty expression"));
    }
    let e = p.expression()?;
    if p.pos != p.toks.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

/// Evaluates composition expressions, identifying results up to rule
/// isomorphism. Results isomorphic to a known rule take that rule's name;
/// new results are named `r<n>` and become known.
#[derive(Debug, Default)]
pub struct RcEvaluator {
    known: Vec<Arc<Rule>>,
    buckets: HashMap<u64, Vec<usize>>,
    fresh: usize,
    limits: OverlapLimits,
}

impl RcEvaluator {
    pub fn new(known: impl IntoIterator<Item = Arc<Rule>>) -> RcEvaluator {
        let mut ev = RcEvaluator::default();
        for r in known {
            ev.intern(r);
        }
        ev
    }

    pub fn with_limits(mut self, limits: OverlapLimits) -> RcEvaluator {
        self.limits = limits;
        self
    }

    pub fn known(&self) -> &[Arc<Rule>] {
        &self.known
    }

    fn find(&self, r: &Rule) -> Option<usize> {
        self.buckets
            .get(&r.invariant())?
            .iter()
            .copied()
            .find(|&i| self.known[i].is_isomorphic(r))
    }

    fn intern(&mut self, r: Arc<Rule>) -> Arc<Rule> {
        if let Some(i) = self.find(&r) {
            return self.known[i].clone();
        }
        self.buckets
            .entry(r.invariant())
            .or_default()
            .push(self.known.len());
        self.known.push(r.clone());
        r
    }

    fn intern_new(&mut self, r: Rule) -> Arc<Rule> {
        if let Some(i) = self.find(&r) {
            return self.known[i].clone();
        }
        let name = format!("r{}", self.fresh);
        self.fresh += 1;
        self.intern(Arc::new(r.with_name(name)))
    }

    fn intern_all(&mut self, rules: impl IntoIterator<Item = Rule>) -> Vec<Arc<Rule>> {
        let mut out: Vec<Arc<Rule>> = Vec::new();
        for r in rules {
            let r = self.intern_new(r);
            if !out.iter().any(|x| Arc::ptr_eq(x, &r)) {
                out.push(r);
            }
        }
        out
    }

    /// The list of rules denoted by `e`, without duplicates up to
    /// isomorphism.
    pub fn eval(&mut self, e: &RcExpression) -> Vec<Arc<Rule>> {
        match e {
            RcExpression::Rules(rs) => {
                let mut out: Vec<Arc<Rule>> = Vec::new();
                for r in rs {
                    let r = self.intern(r.clone());
                    if !out.iter().any(|x| Arc::ptr_eq(x, &r)) {
                        out.push(r);
                    }
                }
                out
            }
            RcExpression::Bind(gs) => self.intern_all(gs.iter().map(|g| rc_bind(g))),
            RcExpression::Unbind(gs) => self.intern_all(gs.iter().map(|g| rc_unbind(g))),
            RcExpression::Id(gs) => self.intern_all(gs.iter().map(|g| rc_id(g))),
            RcExpression::Compose(a, op, b) => {
                let first = self.eval(a);
                let second = self.eval(b);
                let mut composed = Vec::new();
                for p1 in &first {
                    for p2 in &second {
                        for o in enumerate_overlaps(p1, p2, *op, self.limits) {
                            if let Ok(r) = compose(p1, p2, &o, "") {
                                composed.push(r);
                            }
                        }
                    }
                }
                self.intern_all(composed)
            }
        }
    }
}
