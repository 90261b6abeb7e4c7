#![allow(dead_code)]

//! A checker for the DOT language (graph, node, edge and attribute
//! statements, quoted and bare identifiers). Returns the node and edge
//! statements it saw.

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Id(String),
    Punct(&'static str),
}

fn lex(src: &str) -> Result<Vec<Tok>, String> {
    let cs: Vec<char> = src.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == '"' {
            let mut s = String::new();
            i += 1;
            loop {
                match cs.get(i) {
                    None => return Err("unterminated string".into()),
                    Some('"') => break,
                    Some('\\') if cs.get(i + 1).is_some() => {
                        s.push(cs[i + 1]);
                        i += 2;
                    }
                    Some(&ch) => {
                        s.push(ch);
                        i += 1;
                    }
                }
            }
            i += 1;
            out.push(Tok::Id(s));
        } else if c.is_ascii_alphanumeric() || c == '_' || c == '.' {
            let start = i;
            while i < cs.len() && (cs[i].is_ascii_alphanumeric() || cs[i] == '_' || cs[i] == '.') {
                i += 1;
            }
            let word: String = cs[start..i].iter().collect();
            let numeral = word.chars().next().is_some_and(|c| c.is_ascii_digit() || c == '.');
            if numeral && word.parse::<f64>().is_err() {
                return Err(format!("bad numeral `{word}`"));
            }
            out.push(Tok::Id(word));
        } else if src[byte(&cs, i)..].starts_with("->") {
            out.push(Tok::Punct("->"));
            i += 2;
        } else if src[byte(&cs, i)..].starts_with("--") {
            out.push(Tok::Punct("--"));
            i += 2;
        } else {
            let p = match c {
                '{' => "{",
                '}' => "}",
                '[' => "[",
                ']' => "]",
                '=' => "=",
                ';' => ";",
                ',' => ",",
                ':' => ":",
                _ => return Err(format!("unexpected character `{c}`")),
            };
            out.push(Tok::Punct(p));
            i += 1;
        }
    }
    Ok(out)
}

fn byte(cs: &[char], i: usize) -> usize {
    cs[..i].iter().map(|c| c.len_utf8()).sum()
}

pub type Attrs = Vec<(String, String)>;

#[derive(Debug, Default)]
pub struct Graph {
    pub directed: bool,
    pub nodes: Vec<(String, Attrs)>,
    pub edges: Vec<(String, String, Attrs)>,
}

struct P {
    toks: Vec<Tok>,
    i: usize,
}

impl P {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i)
    }

    fn punct(&mut self, p: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Punct(q)) if *q == p) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, p: &str) -> Result<(), String> {
        if self.punct(p) {
            Ok(())
        } else {
            Err(format!("expected `{p}` at token {}", self.i))
        }
    }

    fn id(&mut self) -> Result<String, String> {
        match self.peek() {
            Some(Tok::Id(s)) => {
                let s = s.clone();
                self.i += 1;
                Ok(s)
            }
            _ => Err(format!("expected identifier at token {}", self.i)),
        }
    }

    fn keyword(&self, k: &str) -> bool {
        matches!(self.peek(), Some(Tok::Id(s)) if s.eq_ignore_ascii_case(k))
    }

    fn attrs(&mut self) -> Result<Vec<(String, String)>, String> {
        let mut out = Vec::new();
        while self.punct("[") {
            while !self.punct("]") {
                let k = self.id()?;
                self.expect("=")?;
                let v = self.id()?;
                out.push((k, v));
                if !self.punct(",") {
                    self.punct(";");
                }
            }
        }
        Ok(out)
    }

    fn node_id(&mut self) -> Result<String, String> {
        let id = self.id()?;
        if self.punct(":") {
            self.id()?;
            if self.punct(":") {
                self.id()?;
            }
        }
        Ok(id)
    }
}

pub fn parse(src: &str) -> Result<Graph, String> {
    let mut p = P { toks: lex(src)?, i: 0 };
    if p.keyword("strict") {
        p.i += 1;
    }
    let mut g = Graph::default();
    if p.keyword("digraph") {
        g.directed = true;
    } else if !p.keyword("graph") {
        return Err("expected `graph` or `digraph`".into());
    }
    p.i += 1;
    if matches!(p.peek(), Some(Tok::Id(_))) {
        p.i += 1;
    }
    p.expect("{")?;
    let edge_op = if g.directed { "->" } else { "--" };
    while !p.punct("}") {
        if p.keyword("graph") || p.keyword("node") || p.keyword("edge") {
            p.i += 1;
            p.attrs()?;
        } else {
            let first = p.node_id()?;
            if p.punct("=") {
                p.id()?;
            } else if matches!(p.peek(), Some(Tok::Punct(q)) if *q == edge_op) {
                let mut chain = vec![first];
                while p.punct(edge_op) {
                    chain.push(p.node_id()?);
                }
                let attrs = p.attrs()?;
                for w in chain.windows(2) {
                    g.edges.push((w[0].clone(), w[1].clone(), attrs.clone()));
                }
            } else {
                let attrs = p.attrs()?;
                g.nodes.push((first, attrs));
            }
        }
        p.punct(";");
    }
    if p.i != p.toks.len() {
        return Err("trailing input after graph".into());
    }
    Ok(g)
}
