use super::eval::{evaluate, EvalContext, Nothing, Value};
use super::{ArithOp, CmpOp, Expr, Func};

/// Canonical normal form.
///
/// One bottom-up pass: children are normalized first, then double negation
/// is dropped, constant subtrees are folded, and operands of commutative
/// operators (`+`, `*`, `and`, `or`, `==`, `!=`, `all_equal`) are sorted
/// under the [`Expr`] total order. Operands are never reassociated, so
/// floating-point results are unchanged.
pub fn normalize(e: &Expr) -> Expr {
    let b = |x: &Expr| Box::new(normalize(x));
    let node = match e {
        Expr::Number(_) | Expr::Degree(_) | Expr::Text(_) | Expr::Prop(_) | Expr::Param(_) => return e.clone(),
        Expr::Neg(a) => Expr::Neg(b(a)),
        Expr::Arith(op, x, y) => Expr::Arith(*op, b(x), b(y)),
        Expr::Compare(op, x, y) => Expr::Compare(*op, b(x), b(y)),
        Expr::And(x, y) => Expr::And(b(x), b(y)),
        Expr::Or(x, y) => Expr::Or(b(x), b(y)),
        Expr::Not(a) => match &**a {
            Expr::Not(inner) => return normalize(inner),
            _ => Expr::Not(b(a)),
        },
        Expr::Call(f, args) => Expr::Call(*f, args.iter().map(normalize).collect()),
        Expr::If(c, t, f) => Expr::If(b(c), b(t), b(f)),
    };
    if let Some(folded) = fold(&node) {
        return folded;
    }
    canonical_order(node)
}

fn fold(e: &Expr) -> Option<Expr> {
    if !e.children().iter().all(|c| c.is_literal()) {
        return None;
    }
    match evaluate(e, &EvalContext::new(&Nothing)).ok()? {
        Value::Number(n) if n.is_finite() => Some(Expr::Number(n)),
        Value::Degree(d) => Some(Expr::Degree(d)),
        Value::Text(s) => Some(Expr::Text(s)),
        _ => None,
    }
}

fn canonical_order(e: Expr) -> Expr {
    match e {
        Expr::Arith(op @ (ArithOp::Add | ArithOp::Mul), x, y) if x > y => Expr::Arith(op, y, x),
        Expr::Compare(op @ (CmpOp::Eq | CmpOp::Ne), x, y) if x > y => Expr::Compare(op, y, x),
        Expr::And(x, y) if x > y => Expr::And(y, x),
        Expr::Or(x, y) if x > y => Expr::Or(y, x),
        Expr::Call(Func::AllEqual, mut args) => {
            args.sort();
            Expr::Call(Func::AllEqual, args)
        }
        other => other,
    }
}
