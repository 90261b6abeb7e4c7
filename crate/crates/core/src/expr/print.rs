use std::fmt::Write;

use super::{ArithOp, Expr};

// Binding strength, loosest first. A child printed in a slot that demands a
// tighter level than its own gets parenthesized.
const IF: u8 = 0;
const OR: u8 = 1;
const AND: u8 = 2;
const NOT: u8 = 3;
const CMP: u8 = 4;
const ADD: u8 = 5;
const MUL: u8 = 6;
const UNARY: u8 = 7;
const ATOM: u8 = 8;

fn level(e: &Expr) -> u8 {
    match e {
        Expr::If(..) => IF,
        Expr::Or(..) => OR,
        Expr::And(..) => AND,
        Expr::Not(_) => NOT,
        Expr::Compare(..) => CMP,
        Expr::Arith(ArithOp::Add | ArithOp::Sub, ..) => ADD,
        Expr::Arith(..) => MUL,
        Expr::Neg(_) => UNARY,
        Expr::Number(n) if n.is_sign_negative() => UNARY,
        _ => ATOM,
    }
}

pub(super) fn print(e: &Expr) -> String {
    let mut out = String::new();
    write(e, IF, &mut out);
    out
}

fn write(e: &Expr, min: u8, out: &mut String) {
    let paren = level(e) < min;
    if paren {
        out.push('(');
    }
    match e {
        Expr::Number(n) => {
            let _ = write!(out, "{n}");
        }
        Expr::Degree(d) => {
            let _ = write!(out, "deg({d})");
        }
        Expr::Text(s) => {
            out.push('"');
            for c in s.chars() {
                match c {
                    '"' => out.push_str("\\\""),
                    '\\' => out.push_str("\\\\"),
                    '\n' => out.push_str("\\n"),
                    '\t' => out.push_str("\\t"),
                    c => out.push(c),
                }
            }
            out.push('"');
        }
        Expr::Prop(r) => {
            let _ = write!(out, "self.{}.{}", r.name, r.field.as_str());
        }
        Expr::Param(p) => out.push_str(p),
        Expr::Neg(a) => {
            out.push('-');
            // `-3` would read back as a negative literal
            let min = if matches!(**a, Expr::Number(n) if !n.is_sign_negative()) { ATOM + 1 } else { UNARY };
            write(a, min, out);
        }
        Expr::Arith(op, a, b) => {
            let lv = level(e);
            write(a, lv, out);
            let _ = write!(out, " {} ", op.symbol());
            write(b, lv + 1, out);
        }
        Expr::Compare(op, a, b) => {
            write(a, ADD, out);
            let _ = write!(out, " {} ", op.symbol());
            write(b, ADD, out);
        }
        Expr::And(a, b) => {
            write(a, AND, out);
            out.push_str(" and ");
            write(b, NOT, out);
        }
        Expr::Or(a, b) => {
            write(a, OR, out);
            out.push_str(" or ");
            write(b, AND, out);
        }
        Expr::Not(a) => {
            out.push_str("not ");
            write(a, NOT, out);
        }
        Expr::Call(f, args) => {
            out.push_str(f.name());
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write(a, IF, out);
            }
            out.push(')');
        }
        Expr::If(c, t, f) => {
            out.push_str("if ");
            write(c, IF, out);
            out.push_str(" then ");
            write(t, IF, out);
            out.push_str(" else ");
            write(f, IF, out);
        }
    }
    if paren {
        out.push(')');
    }
}
