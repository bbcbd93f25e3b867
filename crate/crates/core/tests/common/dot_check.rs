//! Recogniser for the Graphviz DOT language (without HTML strings and
//! port syntax).
//!
//! ```text
//! graph     : [strict] (graph | digraph) [ID] '{' stmt_list '}'
//! stmt_list : [stmt [';'] stmt_list]
//! stmt      : node_stmt | edge_stmt | attr_stmt | ID '=' ID | subgraph
//! attr_stmt : (graph | node | edge) attr_list
//! attr_list : '[' [a_list] ']' [attr_list]
//! a_list    : ID '=' ID [(';' | ',')] [a_list]
//! edge_stmt : (ID | subgraph) edgeRHS [attr_list]
//! edgeRHS   : edgeop (ID | subgraph) [edgeRHS]
//! node_stmt : ID [attr_list]
//! subgraph  : [subgraph [ID]] '{' stmt_list '}'
//! ```

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Id(String),
    Sym(&'static str),
}

fn lex(s: &str) -> Result<Vec<Tok>, String> {
    let c: Vec<char> = s.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < c.len() {
        let ch = c[i];
        if ch.is_whitespace() {
            i += 1;
        } else if ch == '"' {
            i += 1;
            let mut v = String::new();
            loop {
                match c.get(i) {
                    None => return Err("unterminated string".into()),
                    Some('"') => break,
                    Some('\\') => {
                        v.push('\\');
                        v.push(*c.get(i + 1).ok_or("dangling escape")?);
                        i += 2;
                    }
                    Some(&x) => {
                        v.push(x);
                        i += 1;
                    }
                }
            }
            i += 1;
            out.push(Tok::Id(v));
        } else if ch.is_ascii_alphabetic() || ch == '_' {
            let st = i;
            while i < c.len() && (c[i].is_ascii_alphanumeric() || c[i] == '_') {
                i += 1;
            }
            out.push(Tok::Id(c[st..i].iter().collect()));
        } else if ch.is_ascii_digit()
            || ch == '.'
            || (ch == '-' && c.get(i + 1).is_some_and(|d| d.is_ascii_digit()))
        {
            let st = i;
            i += 1;
            while i < c.len() && (c[i].is_ascii_digit() || c[i] == '.') {
                i += 1;
            }
            out.push(Tok::Id(c[st..i].iter().collect()));
        } else if ch == '-' && matches!(c.get(i + 1), Some('>') | Some('-')) {
            out.push(Tok::Sym(if c[i + 1] == '>' { "->" } else { "--" }));
            i += 2;
        } else {
            let sym = match ch {
                '{' => "{",
                '}' => "}",
                '[' => "[",
                ']' => "]",
                '=' => "=",
                ';' => ";",
                ',' => ",",
                _ => return Err(format!("unexpected character {ch:?}")),
            };
            out.push(Tok::Sym(sym));
            i += 1;
        }
    }
    Ok(out)
}

struct P {
    t: Vec<Tok>,
    i: usize,
    directed: bool,
}

fn is_kw(t: &Tok, k: &str) -> bool {
    matches!(t, Tok::Id(s) if s.eq_ignore_ascii_case(k))
}

impl P {
    fn peek(&self) -> Option<&Tok> {
        self.t.get(self.i)
    }

    fn sym(&mut self, s: &'static str) -> bool {
        if self.peek() == Some(&Tok::Sym(s)) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn id(&mut self) -> Result<(), String> {
        match self.peek() {
            Some(Tok::Id(_)) => {
                self.i += 1;
                Ok(())
            }
            t => Err(format!("expected ID at token {}, found {t:?}", self.i)),
        }
    }

    fn graph(&mut self) -> Result<(), String> {
        if self.peek().is_some_and(|t| is_kw(t, "strict")) {
            self.i += 1;
        }
        match self.peek() {
            Some(t) if is_kw(t, "digraph") => self.directed = true,
            Some(t) if is_kw(t, "graph") => self.directed = false,
            _ => return Err("expected graph or digraph".into()),
        }
        self.i += 1;
        if matches!(self.peek(), Some(Tok::Id(_))) {
            self.i += 1;
        }
        if !self.sym("{") {
            return Err("expected '{'".into());
        }
        self.stmt_list()?;
        if !self.sym("}") {
            return Err(format!("expected '}}' at token {}", self.i));
        }
        if self.i != self.t.len() {
            return Err("trailing input".into());
        }
        Ok(())
    }

    fn stmt_list(&mut self) -> Result<(), String> {
        while self.peek().is_some() && self.peek() != Some(&Tok::Sym("}")) {
            self.stmt()?;
            self.sym(";");
        }
        Ok(())
    }

    fn attr_list(&mut self) -> Result<(), String> {
        while self.sym("[") {
            while !self.sym("]") {
                self.id()?;
                if !self.sym("=") {
                    return Err("expected '=' in attribute".into());
                }
                self.id()?;
                if !self.sym(",") {
                    self.sym(";");
                }
            }
        }
        Ok(())
    }

    fn operand(&mut self) -> Result<(), String> {
        if self.peek().is_some_and(|t| is_kw(t, "subgraph")) || self.peek() == Some(&Tok::Sym("{"))
        {
            self.subgraph()
        } else {
            self.id()
        }
    }

    fn subgraph(&mut self) -> Result<(), String> {
        if self.peek().is_some_and(|t| is_kw(t, "subgraph")) {
            self.i += 1;
            if matches!(self.peek(), Some(Tok::Id(_))) && self.peek() != Some(&Tok::Sym("{")) {
                self.i += 1;
            }
        }
        if !self.sym("{") {
            return Err("expected '{' in subgraph".into());
        }
        self.stmt_list()?;
        if !self.sym("}") {
            return Err("expected '}' in subgraph".into());
        }
        Ok(())
    }

    fn stmt(&mut self) -> Result<(), String> {
        if self
            .peek()
            .is_some_and(|t| is_kw(t, "graph") || is_kw(t, "node") || is_kw(t, "edge"))
        {
            self.i += 1;
            return self.attr_list();
        }
        self.operand()?;
        if self.sym("=") {
            return self.id();
        }
        let op = if self.directed { "->" } else { "--" };
        while self.sym(op) {
            self.operand()?;
        }
        self.attr_list()
    }
}

/// `Ok` iff `text` is a syntactically valid DOT graph.
pub fn check_dot(text: &str) -> Result<(), String> {
    let t = lex(text)?;
    P {
        t,
        i: 0,
        directed: false,
    }
    .graph()
}
