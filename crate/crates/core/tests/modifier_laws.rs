use std::collections::BTreeSet;

use oodn::expr;
use oodn::modifiers::{self, Kind, ModificationFunction as F, Modifier, Target, TargetKind};
use oodn::testing;
use oodn::{ClassDef, Method, Property, Quantity};
use proptest::prelude::*;

fn name() -> impl Strategy<Value = String> {
    prop::sample::select(vec!["p1", "p2", "p3", "p4", "p5", "p9"]).prop_map(String::from)
}

fn method_name() -> impl Strategy<Value = String> {
    prop::sample::select(vec!["f1", "f2", "f3", "f9"]).prop_map(String::from)
}

fn edit() -> impl Strategy<Value = F> {
    prop_oneof![
        (name(), -3i32..4).prop_map(|(p, v)| F::SetValue { property: p, value: Quantity::Scalar(v.into()) }),
        (name(), prop::sample::select(vec!["cm", "mm"]))
            .prop_map(|(p, u)| F::SetUnits { property: p, units: u.into() }),
        (prop_oneof![name(), method_name()])
            .prop_map(|n| F::SetExpression { name: n, expr: expr::parse("true").unwrap() }),
        name().prop_map(|n| F::AddProperty(Property::quantitative(n, None, "cm").unwrap())),
        name().prop_map(F::RemoveProperty),
        (name(), name())
            .prop_map(|(o, n)| F::ReplaceProperty { old: o, new: Property::qualitative(n, None, Some(1.0)).unwrap() }),
        method_name().prop_map(|n| F::AddMethod(Method::new(n, vec![], None).unwrap())),
        method_name().prop_map(F::RemoveMethod),
        (method_name(), method_name())
            .prop_map(|(o, n)| F::ReplaceMethod { old: o, new: Method::new(n, vec![], None).unwrap() }),
    ]
}

fn modifier() -> impl Strategy<Value = Modifier> {
    prop::collection::vec(edit(), 1..=4).prop_map(|e| Modifier::new("M", TargetKind::Class, e).unwrap())
}

fn has(m: &Modifier, pred: fn(&F) -> bool) -> bool {
    m.edits().iter().any(pred)
}

fn structural(k: &BTreeSet<Kind>) -> BTreeSet<Kind> {
    k.iter().copied().filter(|k| !matches!(k, Kind::Full | Kind::Partial)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn classification_matches_effect(t in testing::homogeneous_class("T"), m in modifier()) {
        let Ok(kind) = modifiers::classify(&m, Target::Class(&t)) else { return Ok(()) };
        let before = t.clone();
        let after = modifiers::apply_to_class(&m, &t).unwrap();
        prop_assert_eq!(&t, &before);
        prop_assert!(kind.contains(Kind::Full) != kind.contains(Kind::Partial));
        if kind.contains(Kind::Full) {
            prop_assert_eq!(kind.coverage.len(), kind.members);
        } else {
            prop_assert!(kind.coverage.len() < kind.members);
        }
        prop_assert_eq!(kind.members, t.member_count());
        let adds = has(&m, |e| matches!(e, F::AddProperty(_) | F::AddMethod(_)));
        let removes = has(&m, |e| matches!(e, F::RemoveProperty(_) | F::RemoveMethod(_)));
        prop_assert_eq!(kind.contains(Kind::Generating), adds);
        prop_assert_eq!(kind.contains(Kind::Destroying), removes);
        prop_assert_eq!(kind.contains(Kind::Commutable), has(&m, |e| matches!(e, F::ReplaceProperty { .. } | F::ReplaceMethod { .. })));
        if !removes {
            prop_assert_eq!(kind.contains(Kind::Generating), after.member_count() > t.member_count());
        }
        if !adds {
            prop_assert_eq!(kind.contains(Kind::Destroying), after.member_count() < t.member_count());
        }
    }

    #[test]
    fn composition_is_associative(t in testing::homogeneous_class("T"), a in modifier(), b in modifier(), c in modifier()) {
        let left = modifiers::compose(&a, &modifiers::compose(&b, &c).unwrap()).unwrap();
        let right = modifiers::compose(&modifiers::compose(&a, &b).unwrap(), &c).unwrap();
        let (l, r) = (modifiers::apply_to_class(&left, &t), modifiers::apply_to_class(&right, &t));
        prop_assert_eq!(l.is_ok(), r.is_ok());
        if let (Ok(l), Ok(r)) = (l, r) {
            prop_assert!(l.structurally_identical(&r));
        }
    }

    #[test]
    fn composed_kinds_are_the_union(t in testing::homogeneous_class("T"), a in modifier(), b in modifier()) {
        let Ok(ka) = modifiers::classify(&a, Target::Class(&t)) else { return Ok(()) };
        let mid = modifiers::apply_to_class(&a, &t).unwrap();
        let Ok(kb) = modifiers::classify(&b, Target::Class(&mid)) else { return Ok(()) };
        let kab = modifiers::classify(&modifiers::compose(&a, &b).unwrap(), Target::Class(&t)).unwrap();
        let want: BTreeSet<Kind> = structural(&ka.kinds).union(&structural(&kb.kinds)).copied().collect();
        prop_assert_eq!(structural(&kab.kinds), want);
    }
}

#[test]
fn class_that_loses_every_member_is_rejected() {
    let t = ClassDef::homogeneous(
        "T",
        oodn::Specification::new(vec![Property::quantitative("p1", None, "cm").unwrap()]).unwrap(),
        oodn::Signature::empty(),
    )
    .unwrap();
    let m = Modifier::new("M", TargetKind::Class, vec![F::RemoveProperty("p1".into())]).unwrap();
    assert!(modifiers::apply_to_class(&m, &t).is_err());
}
