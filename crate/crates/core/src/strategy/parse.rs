//! Text syntax for strategies.
//!
//! ```text
//! strat := term (">>" term)*
//! term  := "[" strat ("," strat)* "]" | "(" strat ")" | ruleRef | "inputRules"
//!        | "addSubset(" graphs ")" | "addUniverse(" graphs ")"
//!        | "filterSubset(" pred ")" | "filterUniverse(" pred ")"
//!        | "leftPredicate[" dpred "](" strat ")"
//!        | "rightPredicate[" dpred "](" strat ")"
//!        | "repeat" ("[" int "]")? "(" strat ")" | "revive(" strat ")"
//! dpred := ("all" | "any") "(" ("left" | "right") "," pred ")"
//! pred  := atom cmp int
//! atom  := "numVertices" | "numEdges" | "vLabelCount(" string ")"
//! cmp   := "<=" | "<" | "==" | ">=" | ">"
//! ```

use std::sync::Arc;

use crate::graph::Graph;
use crate::io::ParseError;
use crate::Scope;

use super::predicate::{
    Atom, Cmp, DerivationPredicate, DerivationSide, GraphFilter, GraphPredicate, Quantifier,
};
use super::Strategy;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(i64),
    Str(String),
    Punct(&'static str),
}

const PUNCT: [&str; 12] = [
    ">>", "<=", ">=", "==", "<", ">", "(", ")", "[", "]", ",", "-",
];

fn lex(text: &str) -> Result<Vec<(Tok, usize, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let mut take = |n: usize, i: &mut usize| {
            for _ in 0..n {
                if chars[*i] == '\n' {
                    line += 1;
                    col = 1;
                } else {
                    col += 1;
                }
                *i += 1;
            }
        };
        if c.is_whitespace() {
            take(1, &mut i);
        } else if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                take(1, &mut i);
            }
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                take(1, &mut i);
            }
            let s: String = chars[start..i].iter().collect();
            let v = s
                .parse()
                .map_err(|_| ParseError::new(l0, c0, format!("integer out of range: {s}")))?;
            out.push((Tok::Int(v), l0, c0));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len()
                && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '.')
            {
                take(1, &mut i);
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), l0, c0));
        } else if c == '"' {
            take(1, &mut i);
            let start = i;
            while i < chars.len() && chars[i] != '"' && chars[i] != '\n' {
                take(1, &mut i);
            }
            if i >= chars.len() || chars[i] != '"' {
                return Err(ParseError::new(l0, c0, "unterminated string"));
            }
            let s: String = chars[start..i].iter().collect();
            take(1, &mut i);
            out.push((Tok::Str(s), l0, c0));
        } else {
            let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
            let Some(p) = PUNCT.iter().find(|p| rest.starts_with(**p)) else {
                return Err(ParseError::new(
                    l0,
                    c0,
                    format!("unexpected character {c:?}"),
                ));
            };
            take(p.len(), &mut i);
            out.push((Tok::Punct(p), l0, c0));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    end: (usize, usize),
    scope: Scope<'a>,
}

impl<'a> Parser<'a> {
    fn error_at(&self, pos: usize, msg: impl Into<String>) -> ParseError {
        let (l, c) = self.toks.get(pos).map_or(self.end, |t| (t.1, t.2));
        ParseError::new(l, c, msg)
    }

    fn error(&self, msg: impl Into<String>) -> ParseError {
        self.error_at(self.pos, msg)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn is(&self, p: &str) -> bool {
        matches!(self.peek(), Some(Tok::Punct(q)) if *q == p)
    }

    fn punct(&mut self, p: &str) -> Result<(), ParseError> {
        if self.is(p) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected '{p}'")))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.error("expected a name")),
        }
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        let negative = self.is("-");
        if negative {
            self.pos += 1;
        }
        match self.peek().cloned() {
            Some(Tok::Int(v)) => {
                self.pos += 1;
                Ok(if negative { -v } else { v })
            }
            _ => Err(self.error("expected an integer")),
        }
    }

    fn strategy(&mut self) -> Result<Strategy, ParseError> {
        let mut s = self.term()?;
        while self.is(">>") {
            self.pos += 1;
            let rhs = self.term()?;
            s = Strategy::Sequence(Box::new(s), Box::new(rhs));
        }
        Ok(s)
    }

    fn term(&mut self) -> Result<Strategy, ParseError> {
        if self.is("[") {
            self.pos += 1;
            let mut children = vec![self.strategy()?];
            while self.is(",") {
                self.pos += 1;
                children.push(self.strategy()?);
            }
            self.punct("]")?;
            return Ok(Strategy::Parallel(children));
        }
        if self.is("(") {
            self.pos += 1;
            let s = self.strategy()?;
            self.punct(")")?;
            return Ok(s);
        }
        let at = self.pos;
        let name = self
            .ident()
            .map_err(|_| self.error("expected a strategy"))?;
        match name.as_str() {
            "addSubset" | "addUniverse" => {
                self.punct("(")?;
                let gs = self.graphs()?;
                self.punct(")")?;
                Ok(if name == "addSubset" {
                    Strategy::AddSubset(gs)
                } else {
                    Strategy::AddUniverse(gs)
                })
            }
            "filterSubset" | "filterUniverse" => {
                self.punct("(")?;
                let p = GraphFilter::Closed(self.graph_predicate()?);
                self.punct(")")?;
                Ok(if name == "filterSubset" {
                    Strategy::FilterSubset(p)
                } else {
                    Strategy::FilterUniverse(p)
                })
            }
            "leftPredicate" | "rightPredicate" => {
                self.punct("[")?;
                let p = self.derivation_predicate()?;
                self.punct("]")?;
                let sub = Box::new(self.parenthesised()?);
                Ok(if name == "leftPredicate" {
                    Strategy::LeftPredicate(p, sub)
                } else {
                    Strategy::RightPredicate(p, sub)
                })
            }
            "repeat" => {
                let bound = if self.is("[") {
                    self.pos += 1;
                    let at = self.pos;
                    let n = self.int()?;
                    if n < 0 {
                        return Err(self.error_at(at, "repeat bound must be non-negative"));
                    }
                    self.punct("]")?;
                    Some(n as usize)
                } else {
                    None
                };
                Ok(Strategy::Repeat(bound, Box::new(self.parenthesised()?)))
            }
            "revive" => Ok(Strategy::Revive(Box::new(self.parenthesised()?))),
            "inputRules" => Ok(Strategy::rules(self.scope.rules)),
            _ => {
                let found: Vec<_> = self
                    .scope
                    .rules
                    .iter()
                    .filter(|r| r.name() == name)
                    .cloned()
                    .collect();
                match found.len() {
                    0 => Err(self.error_at(at, format!("unknown rule '{name}'"))),
                    1 => Ok(Strategy::Rule(found[0].clone())),
                    _ => Ok(Strategy::rules(&found)),
                }
            }
        }
    }

    fn parenthesised(&mut self) -> Result<Strategy, ParseError> {
        self.punct("(")?;
        let s = self.strategy()?;
        self.punct(")")?;
        Ok(s)
    }

    fn graphs(&mut self) -> Result<Vec<Arc<Graph>>, ParseError> {
        let mut out = Vec::new();
        loop {
            let at = self.pos;
            let name = self.ident()?;
            if name == "inputGraphs" {
                out.extend(self.scope.graphs.iter().cloned());
            } else {
                let g = self
                    .scope
                    .graphs
                    .iter()
                    .find(|g| g.name() == name)
                    .ok_or_else(|| self.error_at(at, format!("unknown graph '{name}'")))?;
                out.push(g.clone());
            }
            if !self.is(",") {
                return Ok(out);
            }
            self.pos += 1;
        }
    }

    fn graph_predicate(&mut self) -> Result<GraphPredicate, ParseError> {
        let at = self.pos;
        let atom = match self.ident()?.as_str() {
            "numVertices" => Atom::NumVertices,
            "numEdges" => Atom::NumEdges,
            "vLabelCount" => {
                self.punct("(")?;
                let label = match self.peek().cloned() {
                    Some(Tok::Str(s)) => {
                        self.pos += 1;
                        s
                    }
                    _ => return Err(self.error("expected a quoted label")),
                };
                self.punct(")")?;
                Atom::VLabelCount(label)
            }
            other => return Err(self.error_at(at, format!("unknown graph property '{other}'"))),
        };
        let cmp = match self.peek() {
            Some(Tok::Punct("<=")) => Cmp::Le,
            Some(Tok::Punct("<")) => Cmp::Lt,
            Some(Tok::Punct("==")) => Cmp::Eq,
            Some(Tok::Punct(">=")) => Cmp::Ge,
            Some(Tok::Punct(">")) => Cmp::Gt,
            _ => return Err(self.error("expected a comparison")),
        };
        self.pos += 1;
        Ok(GraphPredicate::new(atom, cmp, self.int()?))
    }

    fn derivation_predicate(&mut self) -> Result<DerivationPredicate, ParseError> {
        let at = self.pos;
        let quantifier = match self.ident()?.as_str() {
            "all" => Quantifier::All,
            "any" => Quantifier::Any,
            _ => return Err(self.error_at(at, "expected 'all' or 'any'")),
        };
        self.punct("(")?;
        let at = self.pos;
        let side = match self.ident()?.as_str() {
            "left" => DerivationSide::Left,
            "right" => DerivationSide::Right,
            _ => return Err(self.error_at(at, "expected 'left' or 'right'")),
        };
        self.punct(",")?;
        let pred = self.graph_predicate()?;
        self.punct(")")?;
        Ok(DerivationPredicate::Closed {
            quantifier,
            side,
            pred,
        })
    }
}

/// Parses a strategy program, resolving names against `scope`.
pub fn parse_strategy(text: &str, scope: Scope) -> Result<Strategy, ParseError> {
    let toks = lex(text)?;
    let lines: Vec<&str> = text.split('\n').collect();
    let end = (
        lines.len(),
        lines.last().map_or(0, |l| l.chars().count()) + 1,
    );
    let mut p = Parser {
        toks,
        pos: 0,
        end,
        scope,
    };
    if p.toks.is_empty() {
        return Err(p.error("empty program"));
    }
    let s = p.strategy()?;
    if p.pos != p.toks.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(s)
}
