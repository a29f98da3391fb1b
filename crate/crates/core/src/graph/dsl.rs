//! Line-oriented text format for presentations.
//!
//! ```text
//! graph renewal
//! # comments start with '#'
//! edge e1 from u1 to u2
//! family k >= 1: edge e[2k-1] from u1 to u[k+1]
//! family k >= 1 to 9: edge e[2k] from u[k+1] to u[k]
//! ```

use super::{Edge, EdgeFamily, GraphPresentation, Vertex, VertexTerm};
use crate::affine::AffineForm;
use crate::error::{Error, Result};

/// Parser switches.
#[derive(Clone, Copy, Debug, Default)]
pub struct ParseOptions {
    /// Accept presentations whose no-sink check is inconclusive.
    pub allow_undecided_sinks: bool,
}

pub fn parse_graph(text: &str) -> Result<GraphPresentation> {
    parse_graph_with(text, ParseOptions::default())
}

pub fn parse_graph_with(text: &str, options: ParseOptions) -> Result<GraphPresentation> {
    let mut name: Option<String> = None;
    let mut edges = Vec::new();
    let mut families = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let mut cur = Cursor::new(content, lineno + 1);
        let keyword = cur.word()?;
        match keyword.as_str() {
            "graph" => {
                if name.is_some() {
                    return Err(cur.error("duplicate graph header"));
                }
                name = Some(cur.graph_name()?);
            }
            "edge" | "family" if name.is_none() => {
                return Err(cur.error("expected `graph NAME` before edges"));
            }
            "edge" => edges.push(parse_edge(&mut cur)?),
            "family" => families.push(parse_family(&mut cur)?),
            other => return Err(cur.error(&format!("unknown keyword `{other}`"))),
        }
        cur.end()?;
    }
    let name = name.ok_or(Error::Syntax {
        line: 1,
        column: 1,
        message: "missing `graph NAME` header".into(),
    })?;
    GraphPresentation::build(&name, edges, families, options.allow_undecided_sinks)
}

fn parse_edge(cur: &mut Cursor) -> Result<Edge> {
    cur.expect_char('e')?;
    let index = cur.uint()?;
    cur.keyword("from")?;
    let source = cur.vertex()?;
    cur.keyword("to")?;
    let range = cur.vertex()?;
    Ok(Edge { index, source, range })
}

fn parse_family(cur: &mut Cursor) -> Result<EdgeFamily> {
    let var = cur.word()?;
    if !var.chars().all(|c| c.is_ascii_alphabetic()) {
        return Err(cur.error("family parameter must be alphabetic"));
    }
    cur.symbol(">=")?;
    let lower = cur.uint()?;
    cur.skip_ws();
    let upper = if cur.peek_word() == Some("to".into()) {
        cur.keyword("to")?;
        Some(cur.uint()?)
    } else {
        None
    };
    cur.symbol(":")?;
    cur.keyword("edge")?;
    cur.expect_char('e')?;
    cur.expect_char('[')?;
    let edge_index = cur.affine(&var)?;
    cur.expect_char(']')?;
    cur.keyword("from")?;
    let source = cur.vertex_term(&var)?;
    cur.keyword("to")?;
    let range = cur.vertex_term(&var)?;
    Ok(EdgeFamily {
        var,
        lower,
        upper,
        edge_index,
        source,
        range,
    })
}

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    _src: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str, line: usize) -> Self {
        Cursor {
            chars: src.chars().collect(),
            pos: 0,
            line,
            _src: src,
        }
    }

    fn error(&self, msg: &str) -> Error {
        Error::Syntax {
            line: self.line,
            column: self.pos + 1,
            message: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn end(&mut self) -> Result<()> {
        self.skip_ws();
        if self.pos < self.chars.len() {
            return Err(self.error("unexpected trailing input"));
        }
        Ok(())
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> String {
        let start = self.pos;
        while self.pos < self.chars.len() && pred(self.chars[self.pos]) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn word(&mut self) -> Result<String> {
        self.skip_ws();
        let w = self.take_while(|c| c.is_ascii_alphabetic() || c == '_');
        if w.is_empty() {
            return Err(self.error("expected a word"));
        }
        Ok(w)
    }

    fn peek_word(&mut self) -> Option<String> {
        let save = self.pos;
        let w = self.word().ok();
        self.pos = save;
        w
    }

    fn graph_name(&mut self) -> Result<String> {
        self.skip_ws();
        let w = self.take_while(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-');
        if w.is_empty() {
            return Err(self.error("expected a graph name"));
        }
        Ok(w)
    }

    fn keyword(&mut self, kw: &str) -> Result<()> {
        let save = self.pos;
        match self.word() {
            Ok(w) if w == kw => Ok(()),
            _ => {
                self.pos = save;
                self.skip_ws();
                Err(self.error(&format!("expected `{kw}`")))
            }
        }
    }

    fn symbol(&mut self, sym: &str) -> Result<()> {
        self.skip_ws();
        for expected in sym.chars() {
            if self.peek() != Some(expected) {
                return Err(self.error(&format!("expected `{sym}`")));
            }
            self.pos += 1;
        }
        Ok(())
    }

    fn expect_char(&mut self, c: char) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected `{c}`")))
        }
    }

    fn uint(&mut self) -> Result<u64> {
        self.skip_ws();
        let digits = self.take_while(|c| c.is_ascii_digit());
        digits
            .parse::<u64>()
            .map_err(|_| self.error("expected a non-negative integer"))
    }

    fn int(&mut self) -> Result<i64> {
        let digits = self.take_while(|c| c.is_ascii_digit());
        digits.parse::<i64>().map_err(|_| self.error("expected an integer"))
    }

    fn vertex(&mut self) -> Result<Vertex> {
        self.skip_ws();
        let name = self.take_while(|c| c.is_ascii_alphabetic() || c == '_');
        if name.is_empty() {
            return Err(self.error("expected a vertex"));
        }
        let digits = self.take_while(|c| c.is_ascii_digit());
        if digits.is_empty() {
            return Ok(Vertex::plain(&name));
        }
        let index = digits
            .parse::<u64>()
            .map_err(|_| self.error("vertex subscript out of range"))?;
        Ok(Vertex::indexed(&name, index))
    }

    fn vertex_term(&mut self, var: &str) -> Result<VertexTerm> {
        let save = self.pos;
        self.skip_ws();
        let name = self.take_while(|c| c.is_ascii_alphabetic() || c == '_');
        if !name.is_empty() && self.peek() == Some('[') {
            self.pos += 1;
            let index = self.affine(var)?;
            self.expect_char(']')?;
            return Ok(VertexTerm::indexed(&name, index));
        }
        self.pos = save;
        Ok(VertexTerm::Fixed(self.vertex()?))
    }

    /// `[-]? INT? '*'? VAR (('+'|'-') INT)?` or `[-]? INT`.
    fn affine(&mut self, var: &str) -> Result<AffineForm> {
        self.skip_ws();
        let mut sign = 1i64;
        if self.peek() == Some('-') {
            sign = -1;
            self.pos += 1;
        }
        self.skip_ws();
        let coeff = if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            Some(self.int()?)
        } else {
            None
        };
        self.skip_ws();
        if self.peek() == Some('*') {
            if coeff.is_none() {
                return Err(self.error("expected a coefficient before `*`"));
            }
            self.pos += 1;
            self.skip_ws();
        }
        let mut b = 0i64;
        let a = if self.peek().is_some_and(|c| c.is_ascii_alphabetic()) {
            let w = self.take_while(|c| c.is_ascii_alphabetic());
            if w != var {
                return Err(self.error(&format!("unknown parameter `{w}`, expected `{var}`")));
            }
            sign * coeff.unwrap_or(1)
        } else {
            match coeff {
                Some(c) => return Ok(AffineForm::constant(sign * c)),
                None => return Err(self.error("expected an affine expression")),
            }
        };
        self.skip_ws();
        match self.peek() {
            Some('+') => {
                self.pos += 1;
                self.skip_ws();
                b = self.int()?;
            }
            Some('-') => {
                self.pos += 1;
                self.skip_ws();
                b = -self.int()?;
            }
            _ => {}
        }
        Ok(AffineForm::new(a, b))
    }
}

/// Canonical text form: header, exceptional edges by index, families in canonical order.
pub fn print_graph(g: &GraphPresentation) -> String {
    let mut out = format!("graph {}\n", g.name);
    for (k, (s, r)) in &g.exceptional {
        out.push_str(&format!("edge e{k} from {s} to {r}\n"));
    }
    for f in &g.families {
        let upper = f.upper.map(|u| format!(" to {u}")).unwrap_or_default();
        out.push_str(&format!(
            "family {} >= {}{}: edge e[{}] from {} to {}\n",
            f.var,
            f.lower,
            upper,
            f.edge_index.render(&f.var),
            f.source.render(&f.var),
            f.range.render(&f.var)
        ));
    }
    out
}
