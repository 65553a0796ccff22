//! Parser for the line-oriented graph-of-groups description language.
//!
//! ```text
//! # comment
//! group Z4 = cyclic 4 a
//! group Z6 = cyclic 6 b
//! group Z2 = cyclic 2 x
//! vertex u : Z4
//! vertex v : Z6
//! edge e : Z2 from u via { x -> a^2 } to v via { x -> b^3 }
//! base u
//! ```
//!
//! `cyclic N [GEN]` names its generator (default `g`); `symmetric N` uses
//! cycle notation; `table { ... }` takes a Cayley table, one row per line
//! (or `;`-separated), identity row and column first. An optional
//! `tree E1, E2, ...` line fixes the spanning tree.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::fingroup::{Elem, FiniteGroup, GroupSpec, Mono, DEFAULT_ORDER_CAP};
use crate::gog::{EdgeId, EdgeSpec, GraphOfGroups, Vertex, VertexId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

impl core::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Word(String),
    LBrace,
    RBrace,
    Comma,
    Colon,
    Equals,
    Arrow,
    Semi,
    Newline,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn tokenize(src: &str) -> Vec<Token> {
    let mut out = Vec::new();
    for (li, line) in src.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            let simple = match c {
                '#' => break,
                '{' => Some(Tok::LBrace),
                '}' => Some(Tok::RBrace),
                ',' => Some(Tok::Comma),
                ':' => Some(Tok::Colon),
                '=' => Some(Tok::Equals),
                ';' => Some(Tok::Semi),
                _ => None,
            };
            if let Some(t) = simple {
                out.push(Token {
                    tok: t,
                    line: li + 1,
                    col,
                });
                i += 1;
                continue;
            }
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if c == '-' && chars.get(i + 1) == Some(&'>') {
                out.push(Token {
                    tok: Tok::Arrow,
                    line: li + 1,
                    col,
                });
                i += 2;
                continue;
            }
            let start = i;
            while i < chars.len() {
                let d = chars[i];
                if d.is_whitespace()
                    || "{},:=;#".contains(d)
                    || (d == '-' && chars.get(i + 1) == Some(&'>'))
                {
                    break;
                }
                i += 1;
            }
            out.push(Token {
                tok: Tok::Word(chars[start..i].iter().collect()),
                line: li + 1,
                col,
            });
        }
        out.push(Token {
            tok: Tok::Newline,
            line: li + 1,
            col: chars.len() + 1,
        });
    }
    out
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    cap: usize,
    groups: BTreeMap<String, Arc<FiniteGroup>>,
    vertices: Vec<Vertex>,
    vertex_lines: Vec<(usize, usize)>,
    edges: Vec<EdgeSpec>,
    base: Option<(String, usize, usize)>,
    tree: Option<Vec<(String, usize, usize)>>,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn err<T>(&self, at: &Token, msg: impl Into<String>) -> PResult<T> {
        Err(ParseError {
            line: at.line,
            col: at.col,
            message: msg.into(),
        })
    }

    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> PResult<Token> {
        match self.toks.get(self.pos) {
            Some(t) => {
                self.pos += 1;
                Ok(t.clone())
            }
            None => {
                let (line, col) = self.toks.last().map(|t| (t.line, t.col)).unwrap_or((1, 1));
                Err(ParseError {
                    line,
                    col,
                    message: "unexpected end of input".into(),
                })
            }
        }
    }

    fn word(&mut self, what: &str) -> PResult<(String, Token)> {
        let t = self.next()?;
        match &t.tok {
            Tok::Word(w) => Ok((w.clone(), t.clone())),
            other => self.err(&t, format!("expected {what}, found {other:?}")),
        }
    }

    fn keyword(&mut self, kw: &str) -> PResult<()> {
        let (w, t) = self.word(kw)?;
        if w != kw {
            return self.err(&t, format!("expected `{kw}`, found `{w}`"));
        }
        Ok(())
    }

    fn expect(&mut self, want: Tok) -> PResult<Token> {
        let t = self.next()?;
        if t.tok != want {
            return self.err(&t, format!("expected {want:?}, found {:?}", t.tok));
        }
        Ok(t)
    }

    fn end_of_decl(&mut self) -> PResult<()> {
        let t = self.next()?;
        if t.tok != Tok::Newline {
            return self.err(&t, format!("unexpected {:?} at end of declaration", t.tok));
        }
        Ok(())
    }

    fn int(&mut self) -> PResult<usize> {
        let (w, t) = self.word("an integer")?;
        match w.parse() {
            Ok(n) => Ok(n),
            Err(_) => self.err(&t, format!("expected an integer, found `{w}`")),
        }
    }

    fn group_ref(&mut self) -> PResult<Arc<FiniteGroup>> {
        let (w, t) = self.word("a group name")?;
        match self.groups.get(&w) {
            Some(g) => Ok(g.clone()),
            None => self.err(&t, format!("unknown group `{w}`")),
        }
    }

    fn vertex_ref(&mut self) -> PResult<VertexId> {
        let (w, t) = self.word("a vertex name")?;
        match self.vertices.iter().position(|v| v.name == w) {
            Some(i) => Ok(VertexId(i)),
            None => self.err(&t, format!("unknown vertex `{w}`")),
        }
    }

    fn parse(&mut self) -> PResult<()> {
        while let Some(t) = self.peek().cloned() {
            match &t.tok {
                Tok::Newline => {
                    self.pos += 1;
                }
                Tok::Word(w) => match w.as_str() {
                    "group" => self.group_decl()?,
                    "vertex" => self.vertex_decl()?,
                    "edge" => self.edge_decl()?,
                    "base" => self.base_decl()?,
                    "tree" => self.tree_decl()?,
                    other => return self.err(&t, format!("unknown declaration `{other}`")),
                },
                other => return self.err(&t, format!("unexpected {other:?}")),
            }
        }
        Ok(())
    }

    fn group_decl(&mut self) -> PResult<()> {
        self.keyword("group")?;
        let (name, name_tok) = self.word("a group name")?;
        if self.groups.contains_key(&name) {
            return self.err(&name_tok, format!("group `{name}` declared twice"));
        }
        self.expect(Tok::Equals)?;
        let (kind, kind_tok) = self.word("cyclic, symmetric or table")?;
        let spec = match kind.as_str() {
            "cyclic" => {
                let order = self.int()?;
                let generator = match self.peek().map(|t| t.tok.clone()) {
                    Some(Tok::Word(_)) => self.word("a generator name")?.0,
                    _ => "g".to_string(),
                };
                GroupSpec::Cyclic { order, generator }
            }
            "symmetric" => GroupSpec::Symmetric(self.int()?),
            "table" => self.table_body()?,
            other => return self.err(&kind_tok, format!("unknown group kind `{other}`")),
        };
        self.end_of_decl()?;
        match FiniteGroup::new(&name, spec, self.cap) {
            Ok(g) => {
                self.groups.insert(name, g);
                Ok(())
            }
            Err(e) => self.err(&kind_tok, format!("group `{name}`: {e}")),
        }
    }

    fn table_body(&mut self) -> PResult<GroupSpec> {
        self.expect(Tok::LBrace)?;
        let mut rows: Vec<Vec<String>> = Vec::new();
        let mut cur: Vec<String> = Vec::new();
        loop {
            let t = self.next()?;
            match t.tok.clone() {
                Tok::Word(w) => cur.push(w),
                Tok::Newline | Tok::Semi => {
                    if !cur.is_empty() {
                        rows.push(core::mem::take(&mut cur));
                    }
                }
                Tok::RBrace => {
                    if !cur.is_empty() {
                        rows.push(cur);
                    }
                    break;
                }
                other => return self.err(&t, format!("unexpected {other:?} in table")),
            }
        }
        let Some(first) = rows.first() else {
            let t = self.toks[self.pos - 1].clone();
            return self.err(&t, "empty table");
        };
        Ok(GroupSpec::Table {
            names: first.clone(),
            rows,
        })
    }

    fn vertex_decl(&mut self) -> PResult<()> {
        let kw = self.next()?;
        let (name, t) = self.word("a vertex name")?;
        if self.vertices.iter().any(|v| v.name == name) {
            return self.err(&t, format!("vertex `{name}` declared twice"));
        }
        self.expect(Tok::Colon)?;
        let group = self.group_ref()?;
        self.end_of_decl()?;
        self.vertices.push(Vertex { name, group });
        self.vertex_lines.push((kw.line, kw.col));
        Ok(())
    }

    fn maps(&mut self, dom: &Arc<FiniteGroup>, cod: &Arc<FiniteGroup>) -> PResult<(Mono, Token)> {
        let open = self.expect(Tok::LBrace)?;
        let mut pairs: Vec<(Elem, Elem)> = Vec::new();
        if matches!(
            self.peek(),
            Some(Token {
                tok: Tok::RBrace,
                ..
            })
        ) {
            self.pos += 1;
        } else {
            loop {
                let (src, st) = self.word("an edge-group element")?;
                let x = match dom.parse_word(&src) {
                    Ok(x) => x,
                    Err(e) => return self.err(&st, format!("in group `{}`: {e}", dom.name())),
                };
                self.expect(Tok::Arrow)?;
                let (dst, dt) = self.word("a vertex-group word")?;
                let y = match cod.parse_word(&dst) {
                    Ok(y) => y,
                    Err(e) => return self.err(&dt, format!("in group `{}`: {e}", cod.name())),
                };
                pairs.push((x, y));
                let t = self.next()?;
                match t.tok.clone() {
                    Tok::Comma => continue,
                    Tok::RBrace => break,
                    other => return self.err(&t, format!("expected `,` or `}}`, found {other:?}")),
                }
            }
        }
        match Mono::check(dom, cod, &pairs) {
            Ok(m) => Ok((m, open)),
            Err(e) => self.err(
                &open,
                format!("inclusion {} -> {}: {e}", dom.name(), cod.name()),
            ),
        }
    }

    fn edge_decl(&mut self) -> PResult<()> {
        self.keyword("edge")?;
        let (name, t) = self.word("an edge name")?;
        if self.edges.iter().any(|e| e.name == name) {
            return self.err(&t, format!("edge `{name}` declared twice"));
        }
        self.expect(Tok::Colon)?;
        let group = self.group_ref()?;
        self.keyword("from")?;
        let va = self.vertex_ref()?;
        self.keyword("via")?;
        let cod_a = self.vertices[va.0].group.clone();
        let (ma, _) = self.maps(&group, &cod_a)?;
        self.keyword("to")?;
        let vb = self.vertex_ref()?;
        self.keyword("via")?;
        let cod_b = self.vertices[vb.0].group.clone();
        let (mb, _) = self.maps(&group, &cod_b)?;
        self.end_of_decl()?;
        self.edges.push(EdgeSpec {
            name,
            group,
            a: (va, ma),
            b: (vb, mb),
        });
        Ok(())
    }

    fn base_decl(&mut self) -> PResult<()> {
        let kw = self.next()?;
        if self.base.is_some() {
            return self.err(&kw, "base declared twice");
        }
        let (name, t) = self.word("a vertex name")?;
        self.end_of_decl()?;
        self.base = Some((name, t.line, t.col));
        Ok(())
    }

    fn tree_decl(&mut self) -> PResult<()> {
        let kw = self.next()?;
        if self.tree.is_some() {
            return self.err(&kw, "tree declared twice");
        }
        let mut names = Vec::new();
        if self.peek().map(|t| t.tok != Tok::Newline).unwrap_or(false) {
            loop {
                let (name, t) = self.word("an edge name")?;
                names.push((name, t.line, t.col));
                if self.peek().map(|t| t.tok == Tok::Comma).unwrap_or(false) {
                    self.pos += 1;
                } else {
                    break;
                }
            }
        }
        self.end_of_decl()?;
        self.tree = Some(names);
        Ok(())
    }
}

/// Parses with the default group-order cap.
pub fn parse_gog(src: &str) -> Result<GraphOfGroups, ParseError> {
    parse_gog_with_cap(src, DEFAULT_ORDER_CAP)
}

pub fn parse_gog_with_cap(src: &str, cap: usize) -> Result<GraphOfGroups, ParseError> {
    let mut p = Parser {
        toks: tokenize(src),
        pos: 0,
        cap,
        groups: BTreeMap::new(),
        vertices: Vec::new(),
        vertex_lines: Vec::new(),
        edges: Vec::new(),
        base: None,
        tree: None,
    };
    p.parse()?;
    if p.vertices.is_empty() {
        return Err(ParseError {
            line: 1,
            col: 1,
            message: "no vertices declared".into(),
        });
    }
    let base = match &p.base {
        None => VertexId(0),
        Some((name, line, col)) => match p.vertices.iter().position(|v| &v.name == name) {
            Some(i) => VertexId(i),
            None => {
                return Err(ParseError {
                    line: *line,
                    col: *col,
                    message: format!("unknown vertex `{name}`"),
                })
            }
        },
    };
    let tree = match &p.tree {
        None => None,
        Some(names) => {
            let mut set = BTreeSet::new();
            for (name, line, col) in names {
                match p.edges.iter().position(|e| &e.name == name) {
                    Some(i) => {
                        set.insert(EdgeId(i));
                    }
                    None => {
                        return Err(ParseError {
                            line: *line,
                            col: *col,
                            message: format!("unknown edge `{name}`"),
                        })
                    }
                }
            }
            Some(set)
        }
    };
    let vertex_lines = p.vertex_lines.clone();
    let vertices = p.vertices.clone();
    GraphOfGroups::new(p.vertices, p.edges, base, tree).map_err(|e| {
        let (line, col) = match &e {
            crate::gog::GogError::Disconnected(name) => vertices
                .iter()
                .position(|v| &v.name == name)
                .map(|i| vertex_lines[i])
                .unwrap_or((1, 1)),
            _ => (1, 1),
        };
        ParseError {
            line,
            col,
            message: e.to_string(),
        }
    })
}
