//! SMILES and GraphDFS line notations.
//!
//! Both are pre-order records of a depth-first traversal: atoms in visit
//! order, `(`/`)` for branches and ring-closure numbers for back-edges.
//!
//! GraphDFS grammar as accepted here:
//!
//! * `[text]` is a vertex with the verbatim label `text` (no implicit
//!   hydrogens).
//! * An unbracketed organic-subset atom (`B C N O P S F Cl Br I`) is a
//!   vertex with that label and implicit hydrogens added.
//! * `{text}` sets the label of the next edge verbatim; the bond symbols
//!   `- = # :` are shorthands for the corresponding labels. Unlabelled
//!   edges are `-`.
//! * Ring closures are single digits or `%nn`; a label may precede the
//!   digit at either end of the closure.

use std::collections::BTreeMap;

use crate::chem::{atom_label, bond_type_of, implicit_hydrogen_count, AtomId};
use crate::graph::{Graph, GraphBuilder, GraphError, VertexId};
use crate::io::ParseError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Dialect {
    Smiles,
    GraphDfs,
}

#[derive(Debug)]
struct Atom {
    label: String,
    aromatic: bool,
    // None: bracketed, hydrogens as given
    implicit: Option<String>,
    explicit_h: u32,
}

struct RingBond {
    atom: usize,
    label: Option<String>,
    column: usize,
}

struct Parser<'a> {
    dialect: Dialect,
    chars: Vec<(usize, char)>,
    pos: usize,
    text: &'a str,
    atoms: Vec<Atom>,
    bonds: Vec<(usize, usize, String)>,
}

fn err(column: usize, msg: impl Into<String>) -> ParseError {
    ParseError::new(1, column, msg)
}

const ORGANIC: [&str; 10] = ["Cl", "Br", "B", "C", "N", "O", "P", "S", "F", "I"];
const AROMATIC: [&str; 6] = ["b", "c", "n", "o", "p", "s"];
const BRACKET_AROMATIC: [&str; 8] = ["se", "as", "b", "c", "n", "o", "p", "s"];

impl<'a> Parser<'a> {
    fn new(text: &'a str, dialect: Dialect) -> Parser<'a> {
        Parser {
            dialect,
            chars: text.char_indices().collect(),
            pos: 0,
            text,
            atoms: Vec::new(),
            bonds: Vec::new(),
        }
    }

    fn column(&self) -> usize {
        self.pos + 1
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn rest(&self) -> &'a str {
        match self.chars.get(self.pos) {
            Some(&(i, _)) => &self.text[i..],
            None => "",
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        self.pos += 1;
        c
    }

    fn add_bond(
        &mut self,
        a: usize,
        b: usize,
        label: String,
        column: usize,
    ) -> Result<(), ParseError> {
        if a == b {
            return Err(err(column, "ring closure onto the same atom"));
        }
        if self
            .bonds
            .iter()
            .any(|&(x, y, _)| (x, y) == (a, b) || (x, y) == (b, a))
        {
            return Err(err(column, "parallel bond between the same pair of atoms"));
        }
        self.bonds.push((a, b, label));
        Ok(())
    }

    fn default_bond(&self, a: usize, b: usize) -> String {
        if self.dialect == Dialect::Smiles && self.atoms[a].aromatic && self.atoms[b].aromatic {
            ":".into()
        } else {
            "-".into()
        }
    }

    fn parse(mut self) -> Result<Graph, ParseError> {
        let mut prev: Option<usize> = None;
        let mut branches: Vec<(usize, usize)> = Vec::new();
        let mut pending: Option<(String, usize)> = None;
        let mut rings: BTreeMap<u32, RingBond> = BTreeMap::new();

        while let Some(c) = self.peek() {
            let column = self.column();
            match c {
                '(' => {
                    self.bump();
                    let p = prev.ok_or_else(|| err(column, "branch without a preceding atom"))?;
                    if pending.is_some() {
                        return Err(err(column, "bond symbol before '('"));
                    }
                    branches.push((p, column));
                }
                ')' => {
                    self.bump();
                    if pending.is_some() {
                        return Err(err(column, "dangling bond symbol before ')'"));
                    }
                    let (p, _) = branches
                        .pop()
                        .ok_or_else(|| err(column, "unbalanced ')'"))?;
                    prev = Some(p);
                }
                '.' if self.dialect == Dialect::Smiles => {
                    self.bump();
                    if pending.is_some() {
                        return Err(err(column, "bond symbol before '.'"));
                    }
                    prev = None;
                }
                '-' | '=' | '#' | ':' => {
                    self.bump();
                    if pending.is_some() {
                        return Err(err(column, "two consecutive bond symbols"));
                    }
                    pending = Some((c.to_string(), column));
                }
                '{' if self.dialect == Dialect::GraphDfs => {
                    self.bump();
                    let label = self.read_until('}', column, "unterminated '{'")?;
                    if label.is_empty() {
                        return Err(err(column, "empty edge label '{}'"));
                    }
                    if pending.is_some() {
                        return Err(err(column, "two consecutive edge labels"));
                    }
                    pending = Some((label, column));
                }
                '0'..='9' | '%' => {
                    let number = self.ring_number()?;
                    let p =
                        prev.ok_or_else(|| err(column, "ring closure without a preceding atom"))?;
                    let label = pending.take().map(|(l, _)| l);
                    match rings.remove(&number) {
                        Some(open) => {
                            let label = match (open.label, label) {
                                (Some(a), Some(b)) if a != b => {
                                    return Err(err(
                                        column,
                                        format!("conflicting bond labels '{a}' and '{b}' on ring closure {number}"),
                                    ))
                                }
                                (Some(a), _) => a,
                                (None, Some(b)) => b,
                                (None, None) => self.default_bond(open.atom, p),
                            };
                            self.add_bond(open.atom, p, label, column)?;
                        }
                        None => {
                            rings.insert(
                                number,
                                RingBond {
                                    atom: p,
                                    label,
                                    column,
                                },
                            );
                        }
                    }
                }
                _ => {
                    let atom = self.atom()?;
                    self.atoms.push(atom);
                    let a = self.atoms.len() - 1;
                    if let Some(p) = prev {
                        let label = match pending.take() {
                            Some((l, _)) => l,
                            None => self.default_bond(p, a),
                        };
                        self.add_bond(p, a, label, column)?;
                    } else if let Some((_, col)) = pending {
                        return Err(err(col, "bond symbol without a preceding atom"));
                    }
                    prev = Some(a);
                }
            }
        }
        if let Some((_, col)) = pending {
            return Err(err(col, "bond symbol at end of input"));
        }
        if let Some(&(_, col)) = branches.last() {
            return Err(err(col, "unbalanced '('"));
        }
        if let Some((n, open)) = rings.into_iter().next() {
            return Err(err(
                open.column,
                format!("unmatched ring-closure number {n}"),
            ));
        }
        self.build()
    }

    fn read_until(&mut self, close: char, column: usize, msg: &str) -> Result<String, ParseError> {
        let mut s = String::new();
        loop {
            match self.bump() {
                Some(c) if c == close => return Ok(s),
                Some(c) => s.push(c),
                None => return Err(err(column, msg)),
            }
        }
    }

    fn ring_number(&mut self) -> Result<u32, ParseError> {
        let column = self.column();
        match self.bump() {
            Some('%') => {
                let mut n = 0;
                for _ in 0..2 {
                    match self.bump() {
                        Some(d) if d.is_ascii_digit() => n = n * 10 + d.to_digit(10).unwrap(),
                        _ => return Err(err(column, "'%' must be followed by two digits")),
                    }
                }
                Ok(n)
            }
            Some(d) => Ok(d.to_digit(10).expect("caller checked digit")),
            None => unreachable!(),
        }
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        let column = self.column();
        if self.peek() == Some('[') {
            self.bump();
            let body = self.read_until(']', column, "unterminated '['")?;
            return match self.dialect {
                Dialect::GraphDfs => {
                    if body.is_empty() {
                        Err(err(column, "empty vertex label '[]'"))
                    } else {
                        Ok(Atom {
                            label: body,
                            aromatic: false,
                            implicit: None,
                            explicit_h: 0,
                        })
                    }
                }
                Dialect::Smiles => bracket_atom(&body, column),
            };
        }
        let rest = self.rest();
        if let Some(sym) = ORGANIC.iter().find(|s| rest.starts_with(**s)) {
            self.pos += sym.len();
            return Ok(Atom {
                label: sym.to_string(),
                aromatic: false,
                implicit: Some(sym.to_string()),
                explicit_h: 0,
            });
        }
        if self.dialect == Dialect::Smiles {
            if let Some(sym) = AROMATIC.iter().find(|s| rest.starts_with(**s)) {
                self.pos += sym.len();
                let upper = sym.to_uppercase();
                return Ok(Atom {
                    label: upper.clone(),
                    aromatic: true,
                    implicit: Some(upper),
                    explicit_h: 0,
                });
            }
        }
        let c = self.peek().unwrap_or(' ');
        Err(err(column, format!("unexpected character '{c}'")))
    }

    fn build(self) -> Result<Graph, ParseError> {
        let mut b = GraphBuilder::new();
        let to_parse_err = |e: GraphError| err(0, e.to_string());
        for a in &self.atoms {
            b.add_vertex(&a.label).map_err(to_parse_err)?;
        }
        let mut half_orders = vec![0u32; self.atoms.len()];
        for (x, y, label) in &self.bonds {
            b.add_edge(*x, *y, label).map_err(to_parse_err)?;
            let h = bond_type_of(label).half_order().unwrap_or(2);
            half_orders[*x] += h;
            half_orders[*y] += h;
        }
        for (i, a) in self.atoms.iter().enumerate() {
            let count = match &a.implicit {
                Some(sym) => implicit_hydrogen_count(sym, half_orders[i], a.aromatic),
                None => a.explicit_h,
            };
            for _ in 0..count {
                let h: VertexId = b.add_vertex("H").map_err(to_parse_err)?;
                b.add_edge(i, h, "-").map_err(to_parse_err)?;
            }
        }
        Ok(b.build())
    }
}

/// `[` symbol [H[n]] [charge] `]`; isotopes, chirality and classes are
/// not supported.
fn bracket_atom(body: &str, column: usize) -> Result<Atom, ParseError> {
    let bad = |m: &str| err(column, format!("{m} in bracket atom '[{body}]'"));
    if body.starts_with(|c: char| c.is_ascii_digit()) {
        return Err(bad("isotopes are not supported"));
    }
    if body.contains('@') {
        return Err(bad("stereo marks are not supported"));
    }
    if body.contains(':') {
        return Err(bad("atom classes are not supported"));
    }
    let (symbol, aromatic, rest) = if let Some(s) =
        BRACKET_AROMATIC.iter().find(|s| body.starts_with(**s))
    {
        let mut upper = s[..1].to_uppercase();
        upper.push_str(&s[1..]);
        (upper, true, &body[s.len()..])
    } else {
        let mut end = body
            .char_indices()
            .next()
            .filter(|(_, c)| c.is_ascii_uppercase())
            .map(|(i, c)| i + c.len_utf8())
            .ok_or_else(|| bad("missing element symbol"))?;
        // two-letter symbol if it names an element; "Hg" vs "H" count handled by lookup
        if let Some(c) = body[end..].chars().next() {
            if c.is_ascii_lowercase() && AtomId::from_symbol(&body[..end + 1]) != AtomId::Invalid {
                end += 1;
            }
        }
        (body[..end].to_string(), false, &body[end..])
    };
    if AtomId::from_symbol(&symbol) == AtomId::Invalid {
        return Err(bad("unknown element"));
    }
    let mut chars = rest.chars().peekable();
    let mut hcount = 0;
    if chars.peek() == Some(&'H') {
        chars.next();
        hcount = 1;
        if let Some(d) = chars.peek().and_then(|c| c.to_digit(10)) {
            hcount = d;
            chars.next();
        }
    }
    let mut charge: i32 = 0;
    if let Some(&sign) = chars.peek() {
        if sign == '+' || sign == '-' {
            let unit = if sign == '+' { 1 } else { -1 };
            chars.next();
            let digits: String =
                std::iter::from_fn(|| chars.next_if(|c| c.is_ascii_digit())).collect();
            if !digits.is_empty() {
                charge = unit * digits.parse::<i32>().map_err(|_| bad("bad charge"))?;
            } else {
                charge = unit;
                while chars.next_if_eq(&sign).is_some() {
                    charge += unit;
                }
            }
        }
    }
    if chars.next().is_some() {
        return Err(bad("unexpected trailing text"));
    }
    if !(-9..=9).contains(&charge) {
        return Err(bad("charge out of range"));
    }
    Ok(Atom {
        label: atom_label(&symbol, charge as i8),
        aromatic,
        implicit: None,
        explicit_h: hcount,
    })
}

/// Loads a molecule from SMILES with all hydrogens explicit.
pub fn parse_smiles(text: &str) -> Result<Graph, ParseError> {
    Parser::new(text.trim(), Dialect::Smiles).parse()
}

/// Loads a graph from GraphDFS notation.
pub fn parse_graph_dfs(text: &str) -> Result<Graph, ParseError> {
    Parser::new(text.trim(), Dialect::GraphDfs).parse()
}
