//! Recursive descent parser for the expression grammar.
//!
//! ```text
//! expr  := "if" expr "then" expr "else" expr | or
//! or    := and ("or" and)*
//! and   := not ("and" not)*
//! not   := "not" not | cmp
//! cmp   := add [("==" | "!=" | "<" | "<=" | ">" | ">=") add]
//! add   := mul (("+" | "-") mul)*
//! mul   := unary (("*" | "/") unary)*
//! unary := "-" NUMBER | "-" unary | atom
//! atom  := NUMBER | STRING | "true" | "false" | "deg" "(" NUMBER ")"
//!        | "self" "." IDENT "." FIELD | IDENT "(" expr ("," expr)* ")"
//!        | IDENT | "(" expr ")"
//! ```

use std::fmt;

use super::{ArithOp, CmpOp, Expr, Func, PropField, PropRef};

const KEYWORDS: &[&str] = &["if", "then", "else", "and", "or", "not", "true", "false", "self", "deg"];

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParseErrorKind {
    Syntax(String),
    UnknownFunction(String),
    Arity { func: &'static str, expected: String, found: usize },
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Syntax(msg) => write!(f, "syntax error: {msg}"),
            ParseErrorKind::UnknownFunction(name) => write!(f, "unknown function `{name}`"),
            ParseErrorKind::Arity { func, expected, found } => {
                write!(f, "`{func}` expects {expected} argument(s), found {found}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Str(String),
    Ident(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Plus,
    Minus,
    Star,
    Slash,
    Cmp(CmpOp),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(n) => write!(f, "number `{n}`"),
            Tok::Str(s) => write!(f, "string {s:?}"),
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::Cmp(op) => write!(f, "`{}`", op.symbol()),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Pos {
    line: usize,
    column: usize,
}

fn err(pos: Pos, kind: ParseErrorKind) -> ParseError {
    ParseError { line: pos.line, column: pos.column, kind }
}

fn syntax(pos: Pos, msg: impl Into<String>) -> ParseError {
    err(pos, ParseErrorKind::Syntax(msg.into()))
}

fn lex(src: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column: col };
        let start = i;
        let tok = match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
                continue;
            }
            '(' => {
                i += 1;
                Tok::LParen
            }
            ')' => {
                i += 1;
                Tok::RParen
            }
            ',' => {
                i += 1;
                Tok::Comma
            }
            '.' => {
                i += 1;
                Tok::Dot
            }
            '+' => {
                i += 1;
                Tok::Plus
            }
            '-' => {
                i += 1;
                Tok::Minus
            }
            '*' => {
                i += 1;
                Tok::Star
            }
            '/' => {
                i += 1;
                Tok::Slash
            }
            '=' => {
                i += if chars.get(i + 1) == Some(&'=') { 2 } else { 1 };
                Tok::Cmp(CmpOp::Eq)
            }
            '!' if chars.get(i + 1) == Some(&'=') => {
                i += 2;
                Tok::Cmp(CmpOp::Ne)
            }
            '<' | '>' => {
                let eq = chars.get(i + 1) == Some(&'=');
                i += if eq { 2 } else { 1 };
                Tok::Cmp(match (c, eq) {
                    ('<', false) => CmpOp::Lt,
                    ('<', true) => CmpOp::Le,
                    ('>', false) => CmpOp::Gt,
                    _ => CmpOp::Ge,
                })
            }
            '"' => {
                i += 1;
                let mut s = String::new();
                loop {
                    match chars.get(i) {
                        None | Some('\n') => return Err(syntax(pos, "unterminated string literal")),
                        Some('"') => {
                            i += 1;
                            break;
                        }
                        Some('\\') => {
                            let esc = match chars.get(i + 1) {
                                Some('"') => '"',
                                Some('\\') => '\\',
                                Some('n') => '\n',
                                Some('t') => '\t',
                                _ => return Err(syntax(pos, "invalid escape in string literal")),
                            };
                            s.push(esc);
                            i += 2;
                        }
                        Some(&ch) => {
                            s.push(ch);
                            i += 1;
                        }
                    }
                }
                Tok::Str(s)
            }
            c if c.is_ascii_digit() => {
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if chars.get(i) == Some(&'.') && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()) {
                    i += 1;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                if matches!(chars.get(i), Some('e' | 'E')) {
                    let mut j = i + 1;
                    if matches!(chars.get(j), Some('+' | '-')) {
                        j += 1;
                    }
                    if chars.get(j).is_some_and(|d| d.is_ascii_digit()) {
                        i = j;
                        while i < chars.len() && chars[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text: String = chars[start..i].iter().collect();
                let n: f64 = text.parse().map_err(|_| syntax(pos, format!("invalid number `{text}`")))?;
                if !n.is_finite() {
                    return Err(syntax(pos, format!("number `{text}` out of range")));
                }
                Tok::Num(n)
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                Tok::Ident(chars[start..i].iter().collect())
            }
            other => return Err(syntax(pos, format!("unexpected character `{other}`"))),
        };
        col += i - start;
        out.push((tok, pos));
    }
    out.push((Tok::Eof, Pos { line, column: col }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(syntax(self.pos(), format!("expected {want}, found {}", self.peek())))
        }
    }

    fn expect_kw(&mut self, kw: &str) -> Result<(), ParseError> {
        if self.is_kw(kw) {
            self.bump();
            Ok(())
        } else {
            Err(syntax(self.pos(), format!("expected `{kw}`, found {}", self.peek())))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek() {
            Tok::Ident(s) => {
                let s = s.clone();
                self.bump();
                Ok(s)
            }
            other => Err(syntax(self.pos(), format!("expected {what}, found {other}"))),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        if self.is_kw("if") {
            self.bump();
            let c = self.expr()?;
            self.expect_kw("then")?;
            let t = self.expr()?;
            self.expect_kw("else")?;
            let e = self.expr()?;
            return Ok(Expr::If(Box::new(c), Box::new(t), Box::new(e)));
        }
        self.or()
    }

    fn or(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.and()?;
        while self.is_kw("or") {
            self.bump();
            lhs = Expr::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.not()?;
        while self.is_kw("and") {
            self.bump();
            lhs = Expr::and(lhs, self.not()?);
        }
        Ok(lhs)
    }

    fn not(&mut self) -> Result<Expr, ParseError> {
        if self.is_kw("not") {
            self.bump();
            return Ok(Expr::not(self.not()?));
        }
        self.cmp()
    }

    fn cmp(&mut self) -> Result<Expr, ParseError> {
        let lhs = self.add()?;
        if let Tok::Cmp(op) = *self.peek() {
            self.bump();
            let rhs = self.add()?;
            if let Tok::Cmp(_) = self.peek() {
                return Err(syntax(self.pos(), "comparisons do not chain; add parentheses"));
            }
            return Ok(Expr::compare(op, lhs, rhs));
        }
        Ok(lhs)
    }

    fn add(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.mul()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => ArithOp::Add,
                Tok::Minus => ArithOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            lhs = Expr::arith(op, lhs, self.mul()?);
        }
    }

    fn mul(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => ArithOp::Mul,
                Tok::Slash => ArithOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            lhs = Expr::arith(op, lhs, self.unary()?);
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            if let Tok::Num(n) = *self.peek() {
                self.bump();
                return Ok(Expr::Number(-n));
            }
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Tok::Num(n) => Ok(Expr::Number(n)),
            Tok::Str(s) => Ok(Expr::Text(s)),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(id) => match id.as_str() {
                "true" => Ok(Expr::Degree(1.0)),
                "false" => Ok(Expr::Degree(0.0)),
                "deg" => {
                    self.expect(Tok::LParen)?;
                    let at = self.pos();
                    let d = match self.bump() {
                        Tok::Num(n) => n,
                        other => return Err(syntax(at, format!("`deg` takes a number literal, found {other}"))),
                    };
                    if !(0.0..=1.0).contains(&d) {
                        return Err(syntax(at, format!("degree {d} outside [0, 1]")));
                    }
                    self.expect(Tok::RParen)?;
                    Ok(Expr::Degree(d))
                }
                "self" => {
                    self.expect(Tok::Dot)?;
                    let name = self.ident("property name")?;
                    if KEYWORDS.contains(&name.as_str()) {
                        return Err(syntax(pos, format!("`{name}` is a keyword")));
                    }
                    self.expect(Tok::Dot)?;
                    let at = self.pos();
                    let field = self.ident("property field")?;
                    let field = PropField::from_name(&field).ok_or_else(|| {
                        syntax(at, format!("unknown property field `{field}` (expected value, units, values or count)"))
                    })?;
                    Ok(Expr::Prop(PropRef { name, field }))
                }
                kw if KEYWORDS.contains(&kw) => Err(syntax(pos, format!("expected expression, found `{kw}`"))),
                _ if *self.peek() == Tok::LParen => {
                    let func =
                        Func::from_name(&id).ok_or_else(|| err(pos, ParseErrorKind::UnknownFunction(id.clone())))?;
                    self.bump();
                    let mut args = vec![self.expr()?];
                    while *self.peek() == Tok::Comma {
                        self.bump();
                        args.push(self.expr()?);
                    }
                    self.expect(Tok::RParen)?;
                    let (lo, hi) = func.arity();
                    if args.len() < lo || hi.is_some_and(|h| args.len() > h) {
                        let expected = match hi {
                            Some(h) if h == lo => lo.to_string(),
                            Some(h) => format!("{lo}..={h}"),
                            None => format!("at least {lo}"),
                        };
                        return Err(err(pos, ParseErrorKind::Arity { func: func.name(), expected, found: args.len() }));
                    }
                    Ok(Expr::Call(func, args))
                }
                _ => Ok(Expr::Param(id)),
            },
            other => Err(syntax(pos, format!("expected expression, found {other}"))),
        }
    }
}

/// Parses expression source text.
pub fn parse(source: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { toks: lex(source)?, at: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::Eof {
        return Err(syntax(p.pos(), format!("unexpected {} after expression", p.peek())));
    }
    Ok(e)
}

pub(super) fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Expr {
        parse(s).unwrap_or_else(|e| panic!("{s}: {e}"))
    }

    #[test]
    fn aggregates() {
        assert_eq!(p("sum(self.p2.values)"), Expr::call(Func::Sum, vec![Expr::prop("p2", PropField::Values)]));
        assert_eq!(
            p("all_equal(self.p2.values)"),
            Expr::call(Func::AllEqual, vec![Expr::prop("p2", PropField::Values)])
        );
    }

    #[test]
    fn trailing_connective_is_a_syntax_error() {
        let e = parse("self.p1.value == 4 and").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Syntax(_)));
        assert_eq!((e.line, e.column), (1, 23));
    }

    #[test]
    fn error_positions_span_lines() {
        let e = parse("1 +\n  * 2").unwrap_err();
        assert_eq!((e.line, e.column), (2, 3));
    }

    #[test]
    fn unknown_function_and_arity() {
        assert!(
            matches!(parse("avg(self.a.values)").unwrap_err().kind, ParseErrorKind::UnknownFunction(ref n) if n == "avg")
        );
        assert!(matches!(parse("at(self.a.values)").unwrap_err().kind, ParseErrorKind::Arity { found: 1, .. }));
        assert!(matches!(parse("at(self.a.values, 1, 2)").unwrap_err().kind, ParseErrorKind::Arity { found: 3, .. }));
    }

    #[test]
    fn precedence() {
        assert_eq!(
            p("1 + 2 * 3"),
            Expr::arith(
                ArithOp::Add,
                Expr::Number(1.0),
                Expr::arith(ArithOp::Mul, Expr::Number(2.0), Expr::Number(3.0))
            )
        );
        assert_eq!(
            p("not a > 1 and b < 2 or c == 3"),
            Expr::or(
                Expr::and(
                    Expr::not(Expr::compare(CmpOp::Gt, Expr::param("a"), Expr::Number(1.0))),
                    Expr::compare(CmpOp::Lt, Expr::param("b"), Expr::Number(2.0))
                ),
                Expr::compare(CmpOp::Eq, Expr::param("c"), Expr::Number(3.0))
            )
        );
        assert_eq!(p("a - b - c"), Expr::arith(ArithOp::Sub, Expr::arith(ArithOp::Sub, p("a"), p("b")), p("c")));
    }

    #[test]
    fn whitespace_insensitive() {
        assert_eq!(p("sum( self . p2 . values )"), p("sum(self.p2.values)"));
        assert_eq!(p("1+2"), p(" 1 +\n\t2 "));
    }

    #[test]
    fn negative_literals_and_negation() {
        assert_eq!(p("-3"), Expr::Number(-3.0));
        assert_eq!(p("- 3"), Expr::Number(-3.0));
        assert_eq!(p("-(3)"), Expr::Neg(Box::new(Expr::Number(3.0))));
        assert_eq!(p("--3"), Expr::Neg(Box::new(Expr::Number(-3.0))));
    }

    #[test]
    fn literals() {
        assert_eq!(p("deg(0.25)"), Expr::Degree(0.25));
        assert_eq!(p("true"), Expr::Degree(1.0));
        assert_eq!(p(r#""a \"b\"""#), Expr::Text("a \"b\"".into()));
        assert_eq!(p("1.5e3"), Expr::Number(1500.0));
        assert!(parse("deg(1.5)").is_err());
        assert!(parse("deg(x)").is_err());
        assert!(parse("\"open").is_err());
    }

    #[test]
    fn single_equals_is_accepted() {
        assert_eq!(p("self.a.value = 1"), p("self.a.value == 1"));
    }

    #[test]
    fn rejects_chained_comparison_and_bad_field() {
        assert!(parse("1 < 2 < 3").is_err());
        assert!(parse("self.a.size").is_err());
        assert!(parse("if a then b").is_err());
        assert!(parse("1 2").is_err());
    }
}
