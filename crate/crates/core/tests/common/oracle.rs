#![allow(dead_code)]

//! Brute-force reference for the class set operations. Every member of one
//! operand is compared against every member of the other; nothing from the
//! engine's matching code is reused.

use std::collections::BTreeSet;

use oodn::expr::normalize;
use oodn::model::{HasMembers, Member};
use oodn::{ClassDef, Core};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Key(pub bool, pub String);

fn key(m: &Member<'_>) -> Key {
    match m {
        Member::Property(p) => Key(false, p.name().to_owned()),
        Member::Method(f) => Key(true, f.name().to_owned()),
    }
}

fn same_expr(a: Option<&oodn::Expr>, b: Option<&oodn::Expr>) -> bool {
    match (a, b) {
        (None, None) => true,
        (Some(x), Some(y)) => normalize(x) == normalize(y),
        _ => false,
    }
}

pub fn equivalent(a: &Member<'_>, b: &Member<'_>) -> bool {
    match (a, b) {
        (Member::Property(p), Member::Property(q)) => {
            p.name() == q.name()
                && match (p.units(), q.units()) {
                    (Some(u), Some(v)) => u == v,
                    (None, None) => same_expr(p.verification(), q.verification()),
                    _ => false,
                }
        }
        (Member::Method(f), Member::Method(g)) => {
            f.name() == g.name() && f.params().len() == g.params().len() && same_expr(f.body(), g.body())
        }
        _ => false,
    }
}

fn core(c: &ClassDef) -> &Core {
    c.core().expect("homogeneous operand")
}

/// Keys of `a` with an equivalent member somewhere in `b`.
pub fn matched(a: &ClassDef, b: &ClassDef) -> BTreeSet<Key> {
    let (am, bm) = (core(a).members(), core(b).members());
    am.iter().filter(|x| bm.iter().any(|y| equivalent(x, y))).map(key).collect()
}

pub fn unmatched(a: &ClassDef, b: &ClassDef) -> BTreeSet<Key> {
    let hit = matched(a, b);
    core(a).members().iter().map(key).filter(|k| !hit.contains(k)).collect()
}

pub fn keys(h: &impl HasMembers) -> BTreeSet<Key> {
    h.members().iter().map(key).collect()
}

/// `(core keys, [(projection source, keys)])` of a present result.
pub type Shape = (BTreeSet<Key>, Vec<(String, BTreeSet<Key>)>);

/// Expected `(core keys, [(projection source, keys)])` of `op` on `a`, `b`;
/// `None` when the result should not exist.
pub fn expected(op: &str, a: &ClassDef, b: &ClassDef) -> Option<Shape> {
    let shared = matched(a, b);
    let (ua, ub) = (unmatched(a, b), unmatched(b, a));
    let proj = |parts: Vec<(&ClassDef, BTreeSet<Key>)>| -> Vec<(String, BTreeSet<Key>)> {
        parts.into_iter().filter(|(_, k)| !k.is_empty()).map(|(c, k)| (c.name().to_owned(), k)).collect()
    };
    match op {
        "union" => Some((shared, proj(vec![(a, ua), (b, ub)]))),
        "intersection" => (!shared.is_empty()).then(|| (shared, Vec::new())),
        "difference" => (!ua.is_empty()).then(|| (BTreeSet::new(), proj(vec![(a, ua)]))),
        "symmetric-difference" => {
            let p = proj(vec![(a, ua), (b, ub)]);
            (!p.is_empty()).then_some((BTreeSet::new(), p))
        }
        _ => panic!("unknown op {op}"),
    }
}

/// The engine's result in the same shape.
pub fn observed(result: &oodn::OperationResult) -> Option<Shape> {
    let c = result.class()?;
    let core = c.core().map(keys).unwrap_or_default();
    Some((core, c.projections().iter().map(|p| (p.source.clone(), keys(p))).collect()))
}
