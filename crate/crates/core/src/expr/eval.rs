use std::collections::BTreeMap;
use std::fmt;

use super::{ArithOp, CmpOp, Expr, Func, PropField, Sort};

/// Runtime value of an expression.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Number(f64),
    Degree(f64),
    Text(String),
    List(Vec<f64>),
}

impl Value {
    pub fn sort(&self) -> Sort {
        match self {
            Value::Number(_) => Sort::Number,
            Value::Degree(_) => Sort::Degree,
            Value::Text(_) => Sort::Text,
            Value::List(_) => Sort::List,
        }
    }

    /// The degree carried by this value, if it is one.
    pub fn as_degree(&self) -> Option<f64> {
        match self {
            Value::Degree(d) => Some(*d),
            _ => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Number(n) => write!(f, "{n}"),
            Value::Degree(d) => write!(f, "deg({d})"),
            Value::Text(s) => write!(f, "{s:?}"),
            Value::List(xs) => {
                f.write_str("[")?;
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str("]")
            }
        }
    }
}

/// What a property reference resolves to on the subject.
#[derive(Debug, Clone, Copy)]
pub enum Lookup<'a> {
    /// Quantitative property with a scalar value (or none, at class level).
    Scalar {
        value: Option<f64>,
        units: &'a str,
    },
    List {
        values: &'a [f64],
        units: &'a str,
    },
    /// Qualitative property and its stored degree, if any.
    Degree(Option<f64>),
}

/// Anything whose properties can be referenced through `self`.
pub trait PropertySource {
    fn lookup(&self, name: &str) -> Option<Lookup<'_>>;
}

/// A subject with no properties; used for constant folding.
pub(super) struct Nothing;

impl PropertySource for Nothing {
    fn lookup(&self, _: &str) -> Option<Lookup<'_>> {
        None
    }
}

pub struct EvalContext<'a> {
    pub subject: &'a dyn PropertySource,
    pub arguments: BTreeMap<String, f64>,
}

impl<'a> EvalContext<'a> {
    pub fn new(subject: &'a dyn PropertySource) -> Self {
        EvalContext { subject, arguments: BTreeMap::new() }
    }

    pub fn with_arguments(subject: &'a dyn PropertySource, arguments: BTreeMap<String, f64>) -> Self {
        EvalContext { subject, arguments }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("unresolved property `{name}` in `{node}`")]
    UnresolvedProperty { name: String, node: String },
    #[error("property `{name}` has no value in `{node}`")]
    MissingValue { name: String, node: String },
    #[error("unresolved parameter `{name}` in `{node}`")]
    UnresolvedParameter { name: String, node: String },
    #[error("sort mismatch in `{node}`: expected {expected}, found {found}")]
    SortMismatch { expected: &'static str, found: Sort, node: String },
    #[error("division by zero in `{node}`")]
    DivisionByZero { node: String },
    #[error("non-finite result in `{node}`")]
    NonFinite { node: String },
    #[error("aggregate over an empty list in `{node}`")]
    EmptyAggregate { node: String },
    #[error("index {index} out of range for list of length {len} in `{node}`")]
    IndexOutOfRange { index: f64, len: usize, node: String },
}

/// Evaluates `e` against `ctx`.
///
/// Connectives are fuzzy: `and` is the minimum, `or` the maximum and
/// `not x` is `1 - x`. Comparisons yield degree 1 or 0. A conditional takes
/// its `then` branch when the condition's degree is at least 0.5.
pub fn evaluate(e: &Expr, ctx: &EvalContext<'_>) -> Result<Value, EvalError> {
    let node = || e.to_string();
    let number = |v: Value| match v {
        Value::Number(n) | Value::Degree(n) => Ok(n),
        other => Err(EvalError::SortMismatch { expected: "number", found: other.sort(), node: node() }),
    };
    let degree = |v: Value| match v {
        Value::Degree(d) => Ok(d),
        other => Err(EvalError::SortMismatch { expected: "degree", found: other.sort(), node: node() }),
    };
    let finite = |n: f64| if n.is_finite() { Ok(Value::Number(n)) } else { Err(EvalError::NonFinite { node: node() }) };

    match e {
        Expr::Number(n) => Ok(Value::Number(*n)),
        Expr::Degree(d) => Ok(Value::Degree(*d)),
        Expr::Text(s) => Ok(Value::Text(s.clone())),
        Expr::Param(p) => ctx
            .arguments
            .get(p)
            .map(|v| Value::Number(*v))
            .ok_or_else(|| EvalError::UnresolvedParameter { name: p.clone(), node: node() }),
        Expr::Prop(r) => {
            let found = ctx
                .subject
                .lookup(&r.name)
                .ok_or_else(|| EvalError::UnresolvedProperty { name: r.name.clone(), node: node() })?;
            let missing = || EvalError::MissingValue { name: r.name.clone(), node: node() };
            match (r.field, found) {
                (PropField::Units, Lookup::Scalar { units, .. } | Lookup::List { units, .. }) => {
                    Ok(Value::Text(units.to_owned()))
                }
                (PropField::Value, Lookup::Scalar { value, .. }) => value.map(Value::Number).ok_or_else(missing),
                (PropField::Value, Lookup::Degree(d)) => d.map(Value::Number).ok_or_else(missing),
                (PropField::Values, Lookup::Scalar { value, .. }) => {
                    value.map(|v| Value::List(vec![v])).ok_or_else(missing)
                }
                (PropField::Values, Lookup::List { values, .. }) => Ok(Value::List(values.to_vec())),
                (PropField::Count, Lookup::List { values, .. }) => Ok(Value::Number(values.len() as f64)),
                (PropField::Count, Lookup::Scalar { value, .. }) => {
                    value.map(|_| Value::Number(1.0)).ok_or_else(missing)
                }
                (PropField::Value, Lookup::List { .. }) => Err(EvalError::SortMismatch {
                    expected: "scalar property (use `.values` for lists)",
                    found: Sort::List,
                    node: node(),
                }),
                (_, Lookup::Degree(_)) => Err(EvalError::SortMismatch {
                    expected: "quantitative property",
                    found: Sort::Degree,
                    node: node(),
                }),
            }
        }
        Expr::Neg(a) => finite(-number(evaluate(a, ctx)?)?),
        Expr::Arith(op, a, b) => {
            let x = number(evaluate(a, ctx)?)?;
            let y = number(evaluate(b, ctx)?)?;
            finite(match op {
                ArithOp::Add => x + y,
                ArithOp::Sub => x - y,
                ArithOp::Mul => x * y,
                ArithOp::Div => {
                    if y == 0.0 {
                        return Err(EvalError::DivisionByZero { node: node() });
                    }
                    x / y
                }
            })
        }
        Expr::Compare(op, a, b) => {
            let (x, y) = (evaluate(a, ctx)?, evaluate(b, ctx)?);
            let ord = match (&x, &y) {
                (Value::Text(s), Value::Text(t)) => s.cmp(t),
                (Value::Text(_) | Value::List(_), _) | (_, Value::Text(_) | Value::List(_)) => {
                    let found = if matches!(x, Value::Text(_) | Value::List(_)) { y.sort() } else { x.sort() };
                    return Err(EvalError::SortMismatch { expected: "two numbers or two texts", found, node: node() });
                }
                _ => {
                    let (x, y) = (number(x)?, number(y)?);
                    x.partial_cmp(&y).expect("finite operands")
                }
            };
            use std::cmp::Ordering::*;
            let holds = match op {
                CmpOp::Eq => ord == Equal,
                CmpOp::Ne => ord != Equal,
                CmpOp::Lt => ord == Less,
                CmpOp::Le => ord != Greater,
                CmpOp::Gt => ord == Greater,
                CmpOp::Ge => ord != Less,
            };
            Ok(Value::Degree(if holds { 1.0 } else { 0.0 }))
        }
        Expr::And(a, b) => Ok(Value::Degree(degree(evaluate(a, ctx)?)?.min(degree(evaluate(b, ctx)?)?))),
        Expr::Or(a, b) => Ok(Value::Degree(degree(evaluate(a, ctx)?)?.max(degree(evaluate(b, ctx)?)?))),
        Expr::Not(_) => {
            // Paired negations cancel exactly, as they do over the reals.
            let mut inner = e;
            let mut odd = false;
            while let Expr::Not(a) = inner {
                inner = a;
                odd = !odd;
            }
            let d = degree(evaluate(inner, ctx)?)?;
            Ok(Value::Degree(if odd { 1.0 - d } else { d }))
        }
        Expr::Call(Func::At, args) => {
            let list = match evaluate(&args[0], ctx)? {
                Value::List(xs) => xs,
                other => return Err(EvalError::SortMismatch { expected: "list", found: other.sort(), node: node() }),
            };
            let index = number(evaluate(&args[1], ctx)?)?;
            if index.fract() != 0.0 || index < 0.0 || index >= list.len() as f64 {
                return Err(EvalError::IndexOutOfRange { index, len: list.len(), node: node() });
            }
            Ok(Value::Number(list[index as usize]))
        }
        Expr::Call(f, args) => {
            let mut xs = Vec::new();
            for a in args {
                match evaluate(a, ctx)? {
                    Value::List(items) => xs.extend(items),
                    Value::Number(n) | Value::Degree(n) => xs.push(n),
                    other => {
                        return Err(EvalError::SortMismatch {
                            expected: "list or number",
                            found: other.sort(),
                            node: node(),
                        })
                    }
                }
            }
            match f {
                Func::Sum => finite(xs.iter().sum()),
                Func::Count => Ok(Value::Number(xs.len() as f64)),
                Func::Min | Func::Max => {
                    let pick = if *f == Func::Min { f64::min } else { f64::max };
                    xs.into_iter()
                        .reduce(pick)
                        .map(Value::Number)
                        .ok_or_else(|| EvalError::EmptyAggregate { node: node() })
                }
                Func::AllEqual => Ok(Value::Degree(if xs.windows(2).all(|w| w[0] == w[1]) { 1.0 } else { 0.0 })),
                Func::At => unreachable!(),
            }
        }
        Expr::If(c, t, f) => {
            if degree(evaluate(c, ctx)?)? >= 0.5 {
                evaluate(t, ctx)
            } else {
                evaluate(f, ctx)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;

    struct Props(Vec<(&'static str, Lookup<'static>)>);

    impl PropertySource for Props {
        fn lookup(&self, name: &str) -> Option<Lookup<'_>> {
            self.0.iter().find(|(n, _)| *n == name).map(|(_, l)| *l)
        }
    }

    fn eval(src: &str, props: &Props) -> Result<Value, EvalError> {
        evaluate(&parse(src).unwrap(), &EvalContext::new(props))
    }

    const RHOMBUS_ANGLES: &[f64] = &[70.0, 110.0, 70.0, 110.0];
    const RHOMBUS_SIDES: &[f64] = &[2.0, 2.0, 2.0, 2.0];

    fn rhombus() -> Props {
        Props(vec![
            ("p1", Lookup::Scalar { value: Some(4.0), units: "sizes" }),
            ("p2", Lookup::List { values: RHOMBUS_SIDES, units: "cm" }),
            ("p4", Lookup::List { values: RHOMBUS_ANGLES, units: "deg" }),
            ("p5", Lookup::Degree(Some(1.0))),
        ])
    }

    #[test]
    fn all_equal_on_rhombus() {
        assert_eq!(eval("all_equal(self.p2.values)", &rhombus()), Ok(Value::Degree(1.0)));
        assert_eq!(eval("all_equal(self.p4.values)", &rhombus()), Ok(Value::Degree(0.0)));
        assert_eq!(eval("sum(self.p2.values)", &rhombus()), Ok(Value::Number(8.0)));
    }

    #[test]
    fn natural_number_positivity() {
        let n = |v| Props(vec![("n", Lookup::Scalar { value: Some(v), units: "1" })]);
        assert_eq!(eval("self.n.value > 0", &n(12.0)), Ok(Value::Degree(1.0)));
        assert_eq!(eval("self.n.value > 0", &n(-1.0)), Ok(Value::Degree(0.0)));
    }

    #[test]
    fn fuzzy_connectives() {
        let none = Props(vec![]);
        assert_eq!(eval("deg(0.25) and deg(0.75)", &none), Ok(Value::Degree(0.25)));
        assert_eq!(eval("deg(0.25) or deg(0.75)", &none), Ok(Value::Degree(0.75)));
        assert_eq!(eval("not deg(0.25)", &none), Ok(Value::Degree(0.75)));
        assert_eq!(eval("not not deg(0.1)", &none), Ok(Value::Degree(0.1)));
    }

    #[test]
    fn field_access() {
        let r = rhombus();
        assert_eq!(eval("self.p2.units", &r), Ok(Value::Text("cm".into())));
        assert_eq!(eval("self.p2.count", &r), Ok(Value::Number(4.0)));
        assert_eq!(eval("self.p1.count", &r), Ok(Value::Number(1.0)));
        assert_eq!(eval("self.p1.values", &r), Ok(Value::List(vec![4.0])));
        assert_eq!(eval("self.p5.value", &r), Ok(Value::Number(1.0)));
        assert_eq!(eval("at(self.p4.values, 1)", &r), Ok(Value::Number(110.0)));
    }

    #[test]
    fn errors_name_the_offending_node() {
        let r = rhombus();
        match eval("1 + 1 / (self.p1.value - 4)", &r) {
            Err(EvalError::DivisionByZero { node }) => assert_eq!(node, "1 / (self.p1.value - 4)"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(eval("self.p9.value", &r), Err(EvalError::UnresolvedProperty { .. })));
        assert!(matches!(eval("k * 2", &r), Err(EvalError::UnresolvedParameter { .. })));
        assert!(matches!(eval("self.p2.value", &r), Err(EvalError::SortMismatch { .. })));
        assert!(matches!(eval("1 and deg(1)", &r), Err(EvalError::SortMismatch { .. })));
        assert!(matches!(eval("at(self.p4.values, 4)", &r), Err(EvalError::IndexOutOfRange { .. })));
        assert!(matches!(eval("self.p5.units", &r), Err(EvalError::SortMismatch { .. })));
    }

    #[test]
    fn parameters() {
        let r = rhombus();
        let mut args = BTreeMap::new();
        args.insert("d1".to_string(), 3.0);
        args.insert("d2".to_string(), 4.0);
        let v = evaluate(&parse("d1 * d2 / 2").unwrap(), &EvalContext::with_arguments(&r, args));
        assert_eq!(v, Ok(Value::Number(6.0)));
    }

    #[test]
    fn conditional() {
        let none = Props(vec![]);
        assert_eq!(eval("if deg(0.5) then 1 else 2", &none), Ok(Value::Number(1.0)));
        assert_eq!(eval("if 1 > 2 then 1 else 2", &none), Ok(Value::Number(2.0)));
    }
}
