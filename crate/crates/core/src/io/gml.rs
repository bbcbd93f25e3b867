//! GML reading and writing for graphs and rules.
//!
//! A rule is written as three fragments `left`, `context` and `right`.
//! Read as sets of ids, `L = left ∪ context`, `R = right ∪ context` and
//! `K = context ∪ (left ∩ right)`; an element listed in both `left` and
//! `right` is kept and changes label.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::graph::{Graph, GraphBuilder};
use crate::io::ParseError;
use crate::rule::{Membership, Rule, RuleEdge, RuleVertex};

#[derive(Debug, Clone, PartialEq)]
enum Value {
    Int(i64),
    Float(f64),
    Str(String),
    List(Vec<Entry>),
}

#[derive(Debug, Clone, PartialEq)]
struct Entry {
    key: String,
    value: Value,
    line: usize,
    column: usize,
}

impl Entry {
    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::new(self.line, self.column, msg)
    }
}

/// Reader options. Strict mode rejects keys outside the known set;
/// otherwise they are skipped with a warning.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GmlOptions {
    pub strict: bool,
}

impl Default for GmlOptions {
    fn default() -> Self {
        GmlOptions { strict: true }
    }
}

/// A loaded object plus any warnings about skipped content.
#[derive(Debug, Clone)]
pub struct Loaded<T> {
    pub value: T,
    pub warnings: Vec<String>,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Key(String),
    Int(i64),
    Float(f64),
    Str(String),
    Open,
    Close,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Lexer<'a> {
        Lexer {
            chars: text.chars().peekable(),
            line: 1,
            column: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn next_token(&mut self) -> Result<Option<(Token, usize, usize)>, ParseError> {
        loop {
            match self.chars.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('#') => {
                    while let Some(c) = self.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                }
                _ => break,
            }
        }
        let (line, column) = (self.line, self.column);
        let Some(&c) = self.chars.peek() else {
            return Ok(None);
        };
        let tok = match c {
            '[' => {
                self.bump();
                Token::Open
            }
            ']' => {
                self.bump();
                Token::Close
            }
            '"' => {
                self.bump();
                let mut s = String::new();
                loop {
                    match self.bump() {
                        Some('"') => break,
                        Some(c) => s.push(c),
                        None => return Err(ParseError::new(line, column, "unterminated string")),
                    }
                }
                Token::Str(s)
            }
            c if c.is_ascii_digit() || c == '-' || c == '+' || c == '.' => {
                let mut s = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_ascii_alphanumeric() || matches!(c, '-' | '+' | '.') {
                        s.push(c);
                        self.bump();
                    } else {
                        break;
                    }
                }
                if let Ok(i) = s.parse::<i64>() {
                    Token::Int(i)
                } else if let Ok(f) = s.parse::<f64>() {
                    Token::Float(f)
                } else {
                    return Err(ParseError::new(line, column, format!("bad number '{s}'")));
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        s.push(c);
                        self.bump();
                    } else {
                        break;
                    }
                }
                Token::Key(s)
            }
            c => {
                return Err(ParseError::new(
                    line,
                    column,
                    format!("unexpected character '{c}'"),
                ))
            }
        };
        Ok(Some((tok, line, column)))
    }
}

fn parse_list(lex: &mut Lexer, nested: Option<(usize, usize)>) -> Result<Vec<Entry>, ParseError> {
    let mut out = Vec::new();
    loop {
        let Some((tok, line, column)) = lex.next_token()? else {
            return match nested {
                Some((l, c)) => Err(ParseError::new(l, c, "unbalanced '[': missing ']'")),
                None => Ok(out),
            };
        };
        let key = match tok {
            Token::Key(k) => k,
            Token::Close if nested.is_some() => return Ok(out),
            Token::Close => return Err(ParseError::new(line, column, "unbalanced ']'")),
            _ => return Err(ParseError::new(line, column, "expected a key")),
        };
        let value = match lex.next_token()? {
            Some((Token::Int(i), ..)) => Value::Int(i),
            Some((Token::Float(f), ..)) => Value::Float(f),
            Some((Token::Str(s), ..)) => Value::Str(s),
            Some((Token::Open, l, c)) => Value::List(parse_list(lex, Some((l, c)))?),
            Some((_, l, c)) => {
                return Err(ParseError::new(
                    l,
                    c,
                    format!("expected a value for '{key}'"),
                ))
            }
            None => {
                return Err(ParseError::new(
                    line,
                    column,
                    format!("missing value for '{key}'"),
                ))
            }
        };
        out.push(Entry {
            key,
            value,
            line,
            column,
        });
    }
}

fn parse_document(text: &str) -> Result<Vec<Entry>, ParseError> {
    parse_list(&mut Lexer::new(text), None)
}

struct Reader {
    options: GmlOptions,
    warnings: Vec<String>,
}

impl Reader {
    fn unknown(&mut self, e: &Entry, context: &str) -> Result<(), ParseError> {
        if self.options.strict {
            Err(e.err(format!("unknown key '{}' in {context}", e.key)))
        } else {
            self.warnings.push(format!(
                "{}:{}: ignoring unknown key '{}' in {context}",
                e.line, e.column, e.key
            ));
            Ok(())
        }
    }

    fn single_top<'a>(&mut self, doc: &'a [Entry], key: &str) -> Result<&'a Entry, ParseError> {
        let mut found = None;
        for e in doc {
            if e.key == key {
                if found.is_some() {
                    return Err(e.err(format!("more than one '{key}'")));
                }
                found = Some(e);
            } else {
                self.unknown(e, "document")?;
            }
        }
        found.ok_or_else(|| ParseError::new(1, 1, format!("no '{key}' section")))
    }

    fn list<'a>(&self, e: &'a Entry) -> Result<&'a [Entry], ParseError> {
        match &e.value {
            Value::List(l) => Ok(l),
            _ => Err(e.err(format!("'{}' must be a list", e.key))),
        }
    }

    fn node(&mut self, e: &Entry) -> Result<(i64, String), ParseError> {
        let (mut id, mut label) = (None, None);
        for f in self.list(e)? {
            match f.key.as_str() {
                "id" => id = Some(int_of(f)?),
                "label" => label = Some(str_of(f)?),
                _ => self.unknown(f, "node")?,
            }
        }
        let id = id.ok_or_else(|| e.err("node without id"))?;
        let label = label.ok_or_else(|| e.err(format!("node {id} without label")))?;
        if label.is_empty() {
            return Err(e.err(format!("node {id} has an empty label")));
        }
        Ok((id, label))
    }

    fn edge(&mut self, e: &Entry) -> Result<(i64, i64, String), ParseError> {
        let (mut s, mut t, mut label) = (None, None, None);
        for f in self.list(e)? {
            match f.key.as_str() {
                "source" => s = Some(int_of(f)?),
                "target" => t = Some(int_of(f)?),
                "label" => label = Some(str_of(f)?),
                _ => self.unknown(f, "edge")?,
            }
        }
        let s = s.ok_or_else(|| e.err("edge without source"))?;
        let t = t.ok_or_else(|| e.err("edge without target"))?;
        let label = label.ok_or_else(|| e.err(format!("edge {s}-{t} without label")))?;
        if label.is_empty() {
            return Err(e.err(format!("edge {s}-{t} has an empty label")));
        }
        if s == t {
            return Err(e.err(format!("loop edge on {s}")));
        }
        Ok((s, t, label))
    }
}

fn int_of(e: &Entry) -> Result<i64, ParseError> {
    match e.value {
        Value::Int(i) => Ok(i),
        _ => Err(e.err(format!("'{}' must be an integer", e.key))),
    }
}

fn str_of(e: &Entry) -> Result<String, ParseError> {
    match &e.value {
        Value::Str(s) => Ok(s.clone()),
        _ => Err(e.err(format!("'{}' must be a string", e.key))),
    }
}

fn pair(a: i64, b: i64) -> (i64, i64) {
    (a.min(b), a.max(b))
}

pub fn parse_graph_gml(text: &str) -> Result<Graph, ParseError> {
    parse_graph_gml_with(text, GmlOptions::default()).map(|l| l.value)
}

pub fn parse_graph_gml_with(text: &str, options: GmlOptions) -> Result<Loaded<Graph>, ParseError> {
    let doc = parse_document(text)?;
    let mut r = Reader {
        options,
        warnings: Vec::new(),
    };
    let top = r.single_top(&doc, "graph")?;
    let mut b = GraphBuilder::new();
    let mut ids = BTreeMap::new();
    let mut edges = Vec::new();
    for e in r.list(top)? {
        match e.key.as_str() {
            "node" => {
                let (id, label) = r.node(e)?;
                if ids.contains_key(&id) {
                    return Err(e.err(format!("duplicate node id {id}")));
                }
                let v = b
                    .add_vertex_with_id(&label, id)
                    .map_err(|x| e.err(x.to_string()))?;
                ids.insert(id, v);
            }
            "edge" => edges.push(e),
            _ => r.unknown(e, "graph")?,
        }
    }
    let mut seen = BTreeSet::new();
    for e in edges {
        let (s, t, label) = r.edge(e)?;
        let a = *ids
            .get(&s)
            .ok_or_else(|| e.err(format!("edge endpoint {s} is not a node")))?;
        let c = *ids
            .get(&t)
            .ok_or_else(|| e.err(format!("edge endpoint {t} is not a node")))?;
        if !seen.insert(pair(s, t)) {
            return Err(e.err(format!("duplicate edge between {s} and {t}")));
        }
        b.add_edge(a, c, &label).map_err(|x| e.err(x.to_string()))?;
    }
    Ok(Loaded {
        value: b.build(),
        warnings: r.warnings,
    })
}

#[derive(Default)]
struct Fragment {
    nodes: BTreeMap<i64, (String, (usize, usize))>,
    edges: BTreeMap<(i64, i64), (String, (usize, usize))>,
}

pub fn parse_rule_gml(text: &str, invert: bool) -> Result<Rule, ParseError> {
    parse_rule_gml_with(text, invert, GmlOptions::default()).map(|l| l.value)
}

pub fn parse_rule_gml_with(
    text: &str,
    invert: bool,
    options: GmlOptions,
) -> Result<Loaded<Rule>, ParseError> {
    let doc = parse_document(text)?;
    let mut r = Reader {
        options,
        warnings: Vec::new(),
    };
    let top = r.single_top(&doc, "rule")?;
    let mut name = String::new();
    let mut frags: [Fragment; 3] = Default::default();
    for e in r.list(top)? {
        let slot = match e.key.as_str() {
            "ruleID" => {
                name = str_of(e)?;
                continue;
            }
            "left" => 0,
            "context" => 1,
            "right" => 2,
            _ => {
                r.unknown(e, "rule")?;
                continue;
            }
        };
        let slot = if invert { 2 - slot } else { slot };
        let frag = &mut frags[slot];
        for f in r.list(e)? {
            match f.key.as_str() {
                "node" => {
                    let (id, label) = r.node(f)?;
                    if frag.nodes.insert(id, (label, (f.line, f.column))).is_some() {
                        return Err(f.err(format!("node {id} listed twice in '{}'", e.key)));
                    }
                }
                "edge" => {
                    let (s, t, label) = r.edge(f)?;
                    if frag
                        .edges
                        .insert(pair(s, t), (label, (f.line, f.column)))
                        .is_some()
                    {
                        return Err(f.err(format!("edge {s}-{t} listed twice in '{}'", e.key)));
                    }
                }
                _ => r.unknown(f, &e.key)?,
            }
        }
    }
    let [left, context, right] = frags;

    let mut vertex_ids: BTreeSet<i64> = BTreeSet::new();
    vertex_ids.extend(left.nodes.keys());
    vertex_ids.extend(context.nodes.keys());
    vertex_ids.extend(right.nodes.keys());
    let mut index = BTreeMap::new();
    let mut vertices = Vec::new();
    for id in vertex_ids {
        let (l, c, rr) = (
            left.nodes.get(&id),
            context.nodes.get(&id),
            right.nodes.get(&id),
        );
        let v = match (l, c, rr) {
            (Some(_), Some((_, (line, col))), _) | (_, Some((_, (line, col))), Some(_)) => {
                return Err(ParseError::new(
                    *line,
                    *col,
                    format!("node {id} is listed in context and in left or right"),
                ))
            }
            (None, Some((lab, _)), None) => {
                RuleVertex::new(id, Some(lab.clone()), Some(lab.clone()))
            }
            (l, None, rr) => RuleVertex::new(id, l.map(|x| x.0.clone()), rr.map(|x| x.0.clone())),
        };
        index.insert(id, vertices.len());
        vertices.push(v);
    }

    let mut edge_keys: BTreeSet<(i64, i64)> = BTreeSet::new();
    edge_keys.extend(left.edges.keys());
    edge_keys.extend(context.edges.keys());
    edge_keys.extend(right.edges.keys());
    let mut edges = Vec::new();
    for key in edge_keys {
        let (l, c, rr) = (
            left.edges.get(&key),
            context.edges.get(&key),
            right.edges.get(&key),
        );
        let pos = l
            .or(c)
            .or(rr)
            .map(|x| x.1)
            .expect("key came from a fragment");
        let fail = |msg: String| ParseError::new(pos.0, pos.1, msg);
        let (ll, rl) = match (l, c, rr) {
            (Some(_), Some(_), _) | (_, Some(_), Some(_)) => {
                return Err(fail(format!(
                    "edge {}-{} is listed in context and in left or right",
                    key.0, key.1
                )))
            }
            (None, Some((lab, _)), None) => (Some(lab.clone()), Some(lab.clone())),
            (l, None, rr) => (l.map(|x| x.0.clone()), rr.map(|x| x.0.clone())),
        };
        let mut ends = [0usize; 2];
        for (slot, id) in [key.0, key.1].into_iter().enumerate() {
            let Some(&v) = index.get(&id) else {
                return Err(fail(format!(
                    "edge {}-{} refers to unknown node {id}",
                    key.0, key.1
                )));
            };
            let vx: &RuleVertex = &vertices[v];
            if ll.is_some() && vx.left.is_none() {
                return Err(fail(format!(
                    "edge {}-{} is on the left side but node {id} is not",
                    key.0, key.1
                )));
            }
            if rl.is_some() && vx.right.is_none() {
                return Err(fail(format!(
                    "edge {}-{} is on the right side but node {id} is not",
                    key.0, key.1
                )));
            }
            ends[slot] = v;
        }
        edges.push(RuleEdge::new(ends[0], ends[1], ll, rl));
    }
    let rule = Rule::new(name, vertices, edges)
        .map_err(|e| ParseError::new(top.line, top.column, e.to_string()))?;
    Ok(Loaded {
        value: rule,
        warnings: r.warnings,
    })
}

fn quote(s: &str) -> String {
    // GML strings cannot contain a double quote; escape it as HTML does
    format!("\"{}\"", s.replace('"', "&quot;"))
}

/// Writes a graph as GML; vertex ids are the dense indices.
pub fn write_graph_gml(g: &Graph) -> String {
    if g.is_empty() {
        return "graph [ ]\n".to_owned();
    }
    let mut s = String::from("graph [\n");
    for v in g.vertices() {
        let _ = writeln!(s, "\tnode [ id {v} label {} ]", quote(g.label(v)));
    }
    for e in g.edges() {
        let _ = writeln!(
            s,
            "\tedge [ source {} target {} label {} ]",
            e.source,
            e.target,
            quote(&e.label)
        );
    }
    s.push_str("]\n");
    s
}

/// Writes a rule as GML with the minimal split: unchanged kept elements
/// go to `context`, label changes appear in both `left` and `right`.
pub fn write_rule_gml(rule: &Rule) -> String {
    let mut left = String::new();
    let mut context = String::new();
    let mut right = String::new();
    let id = |v: usize| rule.vertex(v).external_id;
    for (v, x) in rule.vertices().iter().enumerate() {
        let line = |l: &str| format!("\t\tnode [ id {} label {} ]\n", id(v), quote(l));
        match x.membership() {
            Membership::Left => left.push_str(&line(x.left.as_deref().unwrap())),
            Membership::Right => right.push_str(&line(x.right.as_deref().unwrap())),
            Membership::Context if x.left == x.right => {
                context.push_str(&line(x.left.as_deref().unwrap()))
            }
            Membership::Context => {
                left.push_str(&line(x.left.as_deref().unwrap()));
                right.push_str(&line(x.right.as_deref().unwrap()));
            }
        }
    }
    for e in rule.edges() {
        let line = |l: &str| {
            format!(
                "\t\tedge [ source {} target {} label {} ]\n",
                id(e.source),
                id(e.target),
                quote(l)
            )
        };
        match e.membership() {
            Membership::Left => left.push_str(&line(e.left.as_deref().unwrap())),
            Membership::Right => right.push_str(&line(e.right.as_deref().unwrap())),
            Membership::Context if e.left == e.right => {
                context.push_str(&line(e.left.as_deref().unwrap()))
            }
            Membership::Context => {
                left.push_str(&line(e.left.as_deref().unwrap()));
                right.push_str(&line(e.right.as_deref().unwrap()));
            }
        }
    }
    let mut s = String::from("rule [\n");
    if !rule.name().is_empty() {
        let _ = writeln!(s, "\truleID {}", quote(rule.name()));
    }
    for (key, body) in [("left", left), ("context", context), ("right", right)] {
        if !body.is_empty() {
            let _ = write!(s, "\t{key} [\n{body}\t]\n");
        }
    }
    s.push_str("]\n");
    s
}
