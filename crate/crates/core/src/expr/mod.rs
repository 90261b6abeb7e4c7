//! Expression language for verification functions and method bodies.
//!
//! Expressions are small and total: literals, references to the subject's
//! properties (`self.<name>.value|units|values|count`), method parameters,
//! arithmetic, comparisons, fuzzy connectives, list aggregates and a
//! conditional. See `docs/grammar.md` for the concrete syntax.
//!
//! Every expression has a canonical normal form ([`normalize`]), which makes
//! equality of verification functions decidable ([`expr_equal`]).

mod eval;
mod normalize;
mod parse;
mod print;

use std::cmp::Ordering;
use std::fmt;

pub use eval::{evaluate, EvalContext, EvalError, Lookup, PropertySource, Value};
pub use normalize::normalize;
pub use parse::{parse, ParseError, ParseErrorKind};

/// Result sort of an expression node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sort {
    Number,
    Degree,
    Text,
    List,
}

impl Sort {
    fn is_numeric(self) -> bool {
        matches!(self, Sort::Number | Sort::Degree)
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sort::Number => "number",
            Sort::Degree => "degree",
            Sort::Text => "text",
            Sort::List => "list",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PropField {
    Value,
    Units,
    Values,
    Count,
}

impl PropField {
    pub fn as_str(self) -> &'static str {
        match self {
            PropField::Value => "value",
            PropField::Units => "units",
            PropField::Values => "values",
            PropField::Count => "count",
        }
    }

    fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "value" => PropField::Value,
            "units" => PropField::Units,
            "values" => PropField::Values,
            "count" => PropField::Count,
            _ => return None,
        })
    }
}

/// `self.<name>.<field>`
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PropRef {
    pub name: String,
    pub field: PropField,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl ArithOp {
    pub fn symbol(self) -> &'static str {
        match self {
            ArithOp::Add => "+",
            ArithOp::Sub => "-",
            ArithOp::Mul => "*",
            ArithOp::Div => "/",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "==",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }
}

/// Built-in functions. All but `at` are aggregates over the concatenation
/// of their arguments (list arguments are spliced, numbers taken as-is).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Func {
    Sum,
    Min,
    Max,
    Count,
    AllEqual,
    /// `at(list, index)`, zero-based.
    At,
}

impl Func {
    pub const ALL: [Func; 6] = [Func::Sum, Func::Min, Func::Max, Func::Count, Func::AllEqual, Func::At];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sum => "sum",
            Func::Min => "min",
            Func::Max => "max",
            Func::Count => "count",
            Func::AllEqual => "all_equal",
            Func::At => "at",
        }
    }

    fn from_name(s: &str) -> Option<Self> {
        Func::ALL.into_iter().find(|f| f.name() == s)
    }

    /// Accepted argument counts as (min, max).
    fn arity(self) -> (usize, Option<usize>) {
        match self {
            Func::At => (2, Some(2)),
            _ => (1, None),
        }
    }
}

/// Abstract syntax tree.
///
/// Equality and ordering follow the normal-form total order: variant tag
/// first (operators are part of the tag), then children left to right,
/// then literal payloads. Numbers compare with `f64::total_cmp`.
#[derive(Debug, Clone)]
pub enum Expr {
    Number(f64),
    /// Degree literal in [0, 1].
    Degree(f64),
    Text(String),
    Prop(PropRef),
    Param(String),
    Neg(Box<Expr>),
    Arith(ArithOp, Box<Expr>, Box<Expr>),
    Compare(CmpOp, Box<Expr>, Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    Not(Box<Expr>),
    Call(Func, Vec<Expr>),
    If(Box<Expr>, Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn prop(name: impl Into<String>, field: PropField) -> Expr {
        Expr::Prop(PropRef { name: name.into(), field })
    }

    pub fn param(name: impl Into<String>) -> Expr {
        Expr::Param(name.into())
    }

    pub fn call(func: Func, args: Vec<Expr>) -> Expr {
        Expr::Call(func, args)
    }

    pub fn arith(op: ArithOp, a: Expr, b: Expr) -> Expr {
        Expr::Arith(op, Box::new(a), Box::new(b))
    }

    pub fn compare(op: CmpOp, a: Expr, b: Expr) -> Expr {
        Expr::Compare(op, Box::new(a), Box::new(b))
    }

    pub fn and(a: Expr, b: Expr) -> Expr {
        Expr::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Expr, b: Expr) -> Expr {
        Expr::Or(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Expr) -> Expr {
        Expr::Not(Box::new(a))
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Expr::Number(_) | Expr::Degree(_) | Expr::Text(_))
    }

    pub fn children(&self) -> Vec<&Expr> {
        match self {
            Expr::Number(_) | Expr::Degree(_) | Expr::Text(_) | Expr::Prop(_) | Expr::Param(_) => vec![],
            Expr::Neg(a) | Expr::Not(a) => vec![a],
            Expr::Arith(_, a, b) | Expr::Compare(_, a, b) | Expr::And(a, b) | Expr::Or(a, b) => vec![a, b],
            Expr::Call(_, args) => args.iter().collect(),
            Expr::If(c, t, e) => vec![c, t, e],
        }
    }

    /// Names of all properties referenced through `self`.
    pub fn property_refs(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.walk(&mut |e| {
            if let Expr::Prop(r) = e {
                out.push(r.name.as_str());
            }
        });
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Names of all parameters referenced.
    pub fn param_refs(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.walk(&mut |e| {
            if let Expr::Param(p) = e {
                out.push(p.as_str());
            }
        });
        out.sort_unstable();
        out.dedup();
        out
    }

    fn walk<'a>(&'a self, f: &mut impl FnMut(&'a Expr)) {
        f(self);
        for c in self.children() {
            c.walk(f);
        }
    }

    /// Statically inferred result sort.
    pub fn sort(&self) -> Result<Sort, SortError> {
        let mismatch = |expected: &'static str, found: Sort| SortError { expected, found, node: self.to_string() };
        Ok(match self {
            Expr::Number(_) | Expr::Param(_) => Sort::Number,
            Expr::Degree(_) => Sort::Degree,
            Expr::Text(_) => Sort::Text,
            Expr::Prop(r) => match r.field {
                PropField::Value | PropField::Count => Sort::Number,
                PropField::Units => Sort::Text,
                PropField::Values => Sort::List,
            },
            Expr::Neg(a) => {
                let s = a.sort()?;
                if !s.is_numeric() {
                    return Err(mismatch("number", s));
                }
                Sort::Number
            }
            Expr::Arith(_, a, b) => {
                for s in [a.sort()?, b.sort()?] {
                    if !s.is_numeric() {
                        return Err(mismatch("number", s));
                    }
                }
                Sort::Number
            }
            Expr::Compare(_, a, b) => {
                let (sa, sb) = (a.sort()?, b.sort()?);
                let ok = (sa.is_numeric() && sb.is_numeric()) || (sa == Sort::Text && sb == Sort::Text);
                if !ok {
                    return Err(mismatch("two numbers or two texts", if sa.is_numeric() { sb } else { sa }));
                }
                Sort::Degree
            }
            Expr::And(a, b) | Expr::Or(a, b) => {
                for s in [a.sort()?, b.sort()?] {
                    if s != Sort::Degree {
                        return Err(mismatch("degree", s));
                    }
                }
                Sort::Degree
            }
            Expr::Not(a) => {
                let s = a.sort()?;
                if s != Sort::Degree {
                    return Err(mismatch("degree", s));
                }
                Sort::Degree
            }
            Expr::Call(Func::At, args) => {
                let (sl, si) = (args[0].sort()?, args[1].sort()?);
                if sl != Sort::List {
                    return Err(mismatch("list", sl));
                }
                if !si.is_numeric() {
                    return Err(mismatch("number", si));
                }
                Sort::Number
            }
            Expr::Call(f, args) => {
                for a in args {
                    let s = a.sort()?;
                    if !(s.is_numeric() || s == Sort::List) {
                        return Err(mismatch("list or number", s));
                    }
                }
                if *f == Func::AllEqual {
                    Sort::Degree
                } else {
                    Sort::Number
                }
            }
            Expr::If(c, t, e) => {
                let sc = c.sort()?;
                if sc != Sort::Degree {
                    return Err(mismatch("degree", sc));
                }
                let (st, se) = (t.sort()?, e.sort()?);
                if st == se {
                    st
                } else if st.is_numeric() && se.is_numeric() {
                    Sort::Number
                } else {
                    return Err(mismatch("branches of one sort", se));
                }
            }
        })
    }

    fn tag(&self) -> u8 {
        match self {
            Expr::Number(_) => 0,
            Expr::Degree(_) => 1,
            Expr::Text(_) => 2,
            Expr::Prop(_) => 3,
            Expr::Param(_) => 4,
            Expr::Neg(_) => 5,
            Expr::Arith(op, ..) => 6 + *op as u8,
            Expr::Compare(op, ..) => 10 + *op as u8,
            Expr::And(..) => 16,
            Expr::Or(..) => 17,
            Expr::Not(_) => 18,
            Expr::Call(f, _) => 19 + *f as u8,
            Expr::If(..) => 25,
        }
    }
}

impl Ord for Expr {
    fn cmp(&self, other: &Self) -> Ordering {
        self.tag()
            .cmp(&other.tag())
            .then_with(|| {
                let (a, b) = (self.children(), other.children());
                a.len().cmp(&b.len()).then_with(|| a.into_iter().cmp(b))
            })
            .then_with(|| match (self, other) {
                (Expr::Number(x), Expr::Number(y)) | (Expr::Degree(x), Expr::Degree(y)) => x.total_cmp(y),
                (Expr::Text(x), Expr::Text(y)) | (Expr::Param(x), Expr::Param(y)) => x.cmp(y),
                (Expr::Prop(x), Expr::Prop(y)) => x.cmp(y),
                _ => Ordering::Equal,
            })
    }
}

impl PartialOrd for Expr {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Expr {}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print::print(self))
    }
}

impl std::str::FromStr for Expr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

/// Renders an expression in the concrete syntax with minimal parentheses.
pub fn print(e: &Expr) -> String {
    print::print(e)
}

/// True for names usable as parameters or in `self.<name>` references.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !parse::is_keyword(s)
}

/// Structural equality of normal forms.
pub fn expr_equal(a: &Expr, b: &Expr) -> bool {
    a == b || normalize(a) == normalize(b)
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("sort mismatch in `{node}`: expected {expected}, found {found}")]
pub struct SortError {
    pub expected: &'static str,
    pub found: Sort,
    pub node: String,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorts() {
        let cases = [
            ("sum(self.p2.values)", Sort::Number),
            ("all_equal(self.p2.values)", Sort::Degree),
            ("self.p2.units", Sort::Text),
            ("self.p2.values", Sort::List),
            ("self.n.value > 0 and not deg(0.2)", Sort::Degree),
            ("if self.a.value > 1 then 2 else deg(0.5)", Sort::Number),
        ];
        for (src, sort) in cases {
            assert_eq!(parse(src).unwrap().sort().unwrap(), sort, "{src}");
        }
    }

    #[test]
    fn sort_errors() {
        for src in ["1 and deg(1)", "not 3", "self.a.units + 1", "at(1, 2)", "if 1 then 2 else 3"] {
            assert!(parse(src).unwrap().sort().is_err(), "{src}");
        }
    }

    #[test]
    fn order_is_tag_then_children_then_literal() {
        let a = parse("1").unwrap();
        let b = parse("deg(0)").unwrap();
        assert!(a < b);
        assert!(parse("2").unwrap() > parse("1").unwrap());
        assert!(parse("x + 1").unwrap() < parse("x - 1").unwrap());
        assert!(parse("1 + 9").unwrap() < parse("2 + 0").unwrap());
    }

    #[test]
    fn expr_equal_examples() {
        let p = |s: &str| parse(s).unwrap();
        assert!(expr_equal(&p("sum(self.p2.values)"), &p("sum(self.p2.values)")));
        assert!(expr_equal(&p("x and y"), &p("y and x")));
        assert!(!expr_equal(&p("d1 * d2 / 2"), &p("a * a")));
    }

    #[test]
    fn refs() {
        let e = parse("self.b.value + self.a.count * k + self.a.value").unwrap();
        assert_eq!(e.property_refs(), vec!["a", "b"]);
        assert_eq!(e.param_refs(), vec!["k"]);
    }
}
