//! Proptest strategies for expressions, classes and networks.
//!
//! Enabled by the `testing` feature.

use proptest::collection::{btree_set, vec};
use proptest::option;
use proptest::prelude::*;

use crate::exploiters::Exploiter;
use crate::expr::{self, ArithOp, CmpOp, Expr, Func, PropField, PropRef};
use crate::model::{ClassDef, Method, ObjectInstance, Property, Quantity, Signature, Specification};
use crate::modifiers::{ModificationFunction, Modifier, TargetKind};
use crate::network::{Network, NodeRef, Provenance, Relation, RelationKind};

fn identifier() -> impl Strategy<Value = String> {
    "[a-z_][a-z0-9_]{0,5}".prop_filter("identifier", |s| expr::is_identifier(s))
}

fn number() -> impl Strategy<Value = f64> {
    prop_oneof![
        (-20i32..20).prop_map(f64::from),
        (-1000i32..1000).prop_map(|n| f64::from(n) / 8.0),
        any::<f64>().prop_filter("finite", |x| x.is_finite()),
    ]
}

fn text() -> impl Strategy<Value = String> {
    "[a-zA-Z0-9 _\"\\\\\n\t.,()-]{0,8}"
}

fn field() -> impl Strategy<Value = PropField> {
    prop_oneof![Just(PropField::Value), Just(PropField::Units), Just(PropField::Values), Just(PropField::Count)]
}

fn arith() -> impl Strategy<Value = ArithOp> {
    prop_oneof![Just(ArithOp::Add), Just(ArithOp::Sub), Just(ArithOp::Mul), Just(ArithOp::Div)]
}

fn cmp() -> impl Strategy<Value = CmpOp> {
    prop_oneof![Just(CmpOp::Eq), Just(CmpOp::Ne), Just(CmpOp::Lt), Just(CmpOp::Le), Just(CmpOp::Gt), Just(CmpOp::Ge)]
}

fn aggregate() -> impl Strategy<Value = Func> {
    prop_oneof![Just(Func::Sum), Just(Func::Min), Just(Func::Max), Just(Func::Count), Just(Func::AllEqual)]
}

/// Any syntactically valid expression tree, well-sorted or not.
pub fn any_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        number().prop_map(Expr::Number),
        (0.0..=1.0f64).prop_map(Expr::Degree),
        text().prop_map(Expr::Text),
        (identifier(), field()).prop_map(|(name, field)| Expr::Prop(PropRef { name, field })),
        identifier().prop_map(Expr::Param),
    ];
    leaf.prop_recursive(5, 48, 3, |inner| {
        let b = |e: Expr| Box::new(e);
        prop_oneof![
            inner.clone().prop_map(move |e| Expr::Neg(b(e))),
            (arith(), inner.clone(), inner.clone()).prop_map(|(op, x, y)| Expr::Arith(op, Box::new(x), Box::new(y))),
            (cmp(), inner.clone(), inner.clone()).prop_map(|(op, x, y)| Expr::Compare(op, Box::new(x), Box::new(y))),
            (inner.clone(), inner.clone()).prop_map(|(x, y)| Expr::And(Box::new(x), Box::new(y))),
            (inner.clone(), inner.clone()).prop_map(|(x, y)| Expr::Or(Box::new(x), Box::new(y))),
            inner.clone().prop_map(|e| Expr::Not(Box::new(e))),
            (aggregate(), vec(inner.clone(), 1..=3)).prop_map(|(f, args)| Expr::Call(f, args)),
            (inner.clone(), inner.clone()).prop_map(|(l, i)| Expr::Call(Func::At, vec![l, i])),
            (inner.clone(), inner.clone(), inner).prop_map(|(c, t, f)| Expr::If(Box::new(c), Box::new(t), Box::new(f))),
        ]
    })
}

/// Property names used by [`numeric_expr`] and [`degree_expr`]: scalars
/// `a`, `b` and lists `xs`, `ys`, all quantitative.
pub const SUBJECT_SCALARS: [&str; 2] = ["a", "b"];
pub const SUBJECT_LISTS: [&str; 2] = ["xs", "ys"];
/// Parameters used by the typed strategies.
pub const PARAMS: [&str; 2] = ["x", "y"];

fn small() -> impl Strategy<Value = f64> {
    prop_oneof![(-6i32..7).prop_map(f64::from), (-40i32..40).prop_map(|n| f64::from(n) / 4.0)]
}

fn list_expr() -> impl Strategy<Value = Expr> {
    prop::sample::select(SUBJECT_LISTS.to_vec())
        .prop_map(|n| Expr::Prop(PropRef { name: n.to_owned(), field: PropField::Values }))
}

fn number_leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        small().prop_map(Expr::Number),
        prop::sample::select(PARAMS.to_vec()).prop_map(|p| Expr::Param(p.to_owned())),
        prop::sample::select(SUBJECT_SCALARS.to_vec())
            .prop_map(|n| Expr::Prop(PropRef { name: n.to_owned(), field: PropField::Value })),
        (prop_oneof![Just(Func::Sum), Just(Func::Min), Just(Func::Max), Just(Func::Count)], list_expr())
            .prop_map(|(f, l)| Expr::Call(f, vec![l])),
        (list_expr(), 0i32..5).prop_map(|(l, i)| Expr::Call(Func::At, vec![l, Expr::Number(f64::from(i))])),
    ]
}

fn degree_leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        prop_oneof![Just(0.0), Just(0.25), Just(0.5), Just(1.0), 0.0..=1.0f64].prop_map(Expr::Degree),
        vec(list_expr(), 1..=2).prop_map(|ls| Expr::Call(Func::AllEqual, ls)),
        (cmp(), number_leaf(), number_leaf()).prop_map(|(op, x, y)| Expr::Compare(op, Box::new(x), Box::new(y))),
    ]
}

/// Well-sorted `(number, degree)` expression pairs over the fixed subject
/// vocabulary, built together so each can nest inside the other.
fn typed(depth: u32) -> (BoxedStrategy<Expr>, BoxedStrategy<Expr>) {
    if depth == 0 {
        return (number_leaf().boxed(), degree_leaf().boxed());
    }
    let (n, d) = typed(depth - 1);
    let num = prop_oneof![
        2 => n.clone(),
        1 => n.clone().prop_map(|e| Expr::Neg(Box::new(e))),
        3 => (arith(), n.clone(), n.clone()).prop_map(|(op, x, y)| Expr::Arith(op, Box::new(x), Box::new(y))),
        1 => (prop_oneof![Just(Func::Sum), Just(Func::Min), Just(Func::Max)], vec(n.clone(), 1..=3))
            .prop_map(|(f, args)| Expr::Call(f, args)),
        1 => (d.clone(), n.clone(), n.clone()).prop_map(|(c, t, f)| Expr::If(Box::new(c), Box::new(t), Box::new(f))),
    ]
    .boxed();
    let deg = prop_oneof![
        2 => d.clone(),
        2 => (cmp(), n.clone(), n.clone()).prop_map(|(op, x, y)| Expr::Compare(op, Box::new(x), Box::new(y))),
        2 => (d.clone(), d.clone()).prop_map(|(x, y)| Expr::And(Box::new(x), Box::new(y))),
        2 => (d.clone(), d.clone()).prop_map(|(x, y)| Expr::Or(Box::new(x), Box::new(y))),
        2 => d.clone().prop_map(|e| Expr::Not(Box::new(e))),
        1 => (d.clone(), d.clone(), d).prop_map(|(c, t, f)| Expr::If(Box::new(c), Box::new(t), Box::new(f))),
    ]
    .boxed();
    (num, deg)
}

/// Well-sorted numeric expressions over `self.a`, `self.b`, `self.xs`,
/// `self.ys` and parameters `x`, `y`.
pub fn numeric_expr() -> impl Strategy<Value = Expr> {
    typed(3).0
}

/// Well-sorted degree expressions over the same vocabulary.
pub fn degree_expr() -> impl Strategy<Value = Expr> {
    typed(3).1
}

/// A subject for [`numeric_expr`] / [`degree_expr`] with arguments for
/// `x` and `y`.
pub fn subject() -> impl Strategy<Value = (Specification, [f64; 2])> {
    (small(), small(), vec(small(), 1..=4), vec(small(), 1..=4), small(), small()).prop_map(|(a, b, xs, ys, x, y)| {
        let spec = Specification::new(vec![
            Property::quantitative("a", Some(Quantity::Scalar(a)), "u").expect("valid"),
            Property::quantitative("b", Some(Quantity::Scalar(b)), "u").expect("valid"),
            Property::quantitative("xs", Some(Quantity::List(xs)), "u").expect("valid"),
            Property::quantitative("ys", Some(Quantity::List(ys)), "u").expect("valid"),
        ])
        .expect("unique names");
        (spec, [x, y])
    })
}

// ---- classes ----

/// Property names drawn by the class strategies.
pub const PROPERTY_NAMES: [&str; 5] = ["p1", "p2", "p3", "p4", "p5"];
/// Method names drawn by the class strategies.
pub const METHOD_NAMES: [&str; 3] = ["f1", "f2", "f3"];

// Pairs of entries that differ textually but share a normal form are
// included on purpose.
const VERIFICATIONS: [&str; 6] = [
    "self.p1.value + 1 > 2",
    "1 + self.p1.value > 2",
    "all_equal(self.p2.values)",
    "not not all_equal(self.p2.values)",
    "self.p3.value < 2 * 3",
    "self.p3.value < 6",
];
const BODIES: [&str; 4] =
    ["sum(self.p2.values)", "max(self.p2.values) * 2", "2 * max(self.p2.values)", "4 * self.p1.value"];
const UNITS: [&str; 3] = ["cm", "kg", "deg"];

fn class_property(name: &'static str) -> impl Strategy<Value = Property> {
    prop_oneof![
        (prop::sample::select(UNITS.to_vec()), option::of(small()))
            .prop_map(move |(u, v)| { Property::quantitative(name, v.map(Quantity::Scalar), u).expect("valid") }),
        prop::sample::select(VERIFICATIONS.to_vec()).prop_map(move |src| {
            Property::qualitative(name, Some(expr::parse(src).expect("fixed text parses")), None).expect("valid")
        }),
        prop_oneof![Just(0.0), Just(1.0)].prop_map(move |d| Property::qualitative(name, None, Some(d)).expect("valid")),
    ]
}

fn class_method(name: &'static str) -> impl Strategy<Value = Method> {
    (0usize..=2, option::of(prop::sample::select(BODIES.to_vec()))).prop_map(move |(arity, body)| {
        let params = (0..arity).map(|i| format!("x{i}")).collect();
        Method::new(name, params, body.map(|b| expr::parse(b).expect("fixed text parses"))).expect("valid")
    })
}

fn members() -> impl Strategy<Value = (Specification, Signature)> {
    (
        btree_set(prop::sample::select(PROPERTY_NAMES.to_vec()), 0..=5),
        btree_set(prop::sample::select(METHOD_NAMES.to_vec()), 0..=3),
    )
        .prop_filter("at least one member", |(p, m)| !p.is_empty() || !m.is_empty())
        .prop_flat_map(|(props, methods)| {
            let props: Vec<_> = props.into_iter().map(class_property).collect();
            let methods: Vec<_> = methods.into_iter().map(class_method).collect();
            (props, methods)
        })
        .prop_map(|(props, methods)| {
            (Specification::new(props).expect("unique"), Signature::new(methods).expect("unique"))
        })
}

/// Homogeneous class with one to eight members drawn from a small shared
/// vocabulary, so independently generated classes overlap by name often.
pub fn homogeneous_class(name: impl Into<String>) -> impl Strategy<Value = ClassDef> {
    let name = name.into();
    members().prop_map(move |(spec, sig)| ClassDef::homogeneous(name.clone(), spec, sig).expect("nonempty"))
}

/// Two independently generated homogeneous classes named `A` and `B`.
pub fn class_pair() -> impl Strategy<Value = (ClassDef, ClassDef)> {
    (homogeneous_class("A"), homogeneous_class("B"))
}

// ---- networks ----

fn node_name() -> impl Strategy<Value = String> {
    prop_oneof!["[A-Z][a-z0-9_]{0,3}", "T\\([A-Z]\\)", "[a-z]{1,3} [a-z\"]{1,3}"]
}

fn concrete(spec: &Specification) -> Specification {
    let props = spec
        .iter()
        .map(|p| match (p.units(), p.value()) {
            (Some(u), None) => {
                Property::quantitative(p.name(), Some(Quantity::List(vec![1.0, 2.5])), u).expect("valid")
            }
            _ => p.clone(),
        })
        .collect();
    Specification::new(props).expect("unique")
}

fn modifier(name: String) -> impl Strategy<Value = Modifier> {
    let edit = prop_oneof![
        (prop::sample::select(PROPERTY_NAMES.to_vec()), small())
            .prop_map(|(p, v)| ModificationFunction::SetValue { property: p.to_owned(), value: Quantity::Scalar(v) }),
        prop::sample::select(PROPERTY_NAMES.to_vec()).prop_map(|p| ModificationFunction::RemoveProperty(p.to_owned())),
        class_property("p9").prop_map(ModificationFunction::AddProperty),
        class_method("f9").prop_map(ModificationFunction::AddMethod),
        (prop::sample::select(METHOD_NAMES.to_vec()), prop::sample::select(BODIES.to_vec())).prop_map(|(m, b)| {
            ModificationFunction::SetExpression { name: m.to_owned(), expr: expr::parse(b).expect("parses") }
        }),
    ];
    (vec(edit, 1..=3), any::<bool>(), option::of(node_name())).prop_map(move |(edits, object, yields)| {
        let target = if object { TargetKind::Object } else { TargetKind::Class };
        let m = Modifier::new(name.clone(), target, edits).expect("nonempty");
        match yields {
            Some(y) => m.with_yields(y),
            None => m,
        }
    })
}

/// A network of up to four classes, three objects (with clones), three
/// modifiers and some declared relations, over awkward node names.
pub fn network() -> impl Strategy<Value = Network> {
    let classes = btree_set(node_name(), 0..=4)
        .prop_flat_map(|names| names.into_iter().map(homogeneous_class).collect::<Vec<_>>());
    let objects = vec((node_name(), 0u32..3, members()), 0..=3);
    let mods = btree_set("M[0-9]", 0..=3).prop_flat_map(|ns| ns.into_iter().map(modifier).collect::<Vec<_>>());
    let exploiters = btree_set(prop::sample::select(Exploiter::ALL.to_vec()), 0..=5);
    let relations = vec((any::<prop::sample::Index>(), any::<prop::sample::Index>(), 0usize..4), 0..=5);
    (classes, objects, mods, exploiters, relations, any::<bool>()).prop_map(
        |(classes, objects, mods, exploiters, relations, all_exploiters)| {
            let mut n = Network::new();
            if !all_exploiters {
                n = n.with_exploiters(exploiters);
            }
            for c in classes {
                n = n.add_class(c).expect("distinct names");
            }
            for (id, clone, (spec, sig)) in objects {
                let o = ObjectInstance::new(id, concrete(&spec), sig).expect("concrete").with_clone_index(clone);
                if let Ok(next) = n.add_object(o) {
                    n = next;
                }
            }
            for m in mods {
                n = n.add_modifier(m).expect("distinct names");
            }
            let nodes: Vec<NodeRef> = n.nodes();
            if !nodes.is_empty() {
                for (from, to, k) in relations {
                    let kind = match k {
                        0 => RelationKind::IsA,
                        1 => RelationKind::InstanceOf,
                        2 => RelationKind::User("near by".into()),
                        _ => RelationKind::ModificationOf,
                    };
                    let provenance = if k == 3 { Provenance::Recorded } else { Provenance::Declared };
                    let r = Relation { from: from.get(&nodes).clone(), to: to.get(&nodes).clone(), kind, provenance };
                    if let Ok(next) = n.declare_relation(r) {
                        n = next;
                    }
                }
            }
            n
        },
    )
}
