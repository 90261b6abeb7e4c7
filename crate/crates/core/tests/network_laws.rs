#[path = "common/oracle.rs"]
mod oracle;

use std::collections::BTreeSet;

use oodn::exploiters::Exploiter;
use oodn::model::{self, HasMembers};
use oodn::modifiers::{self, ModificationFunction, Modifier, TargetKind};
use oodn::network::{NodeKind, NodeRef, RelationKind};
use oodn::{testing, ClassDef, Network, ObjectInstance, Property, Quantity, Specification};
use proptest::prelude::*;

fn lattice() -> impl Strategy<Value = Vec<ClassDef>> {
    (1usize..=5).prop_flat_map(|n| (0..n).map(|i| testing::homogeneous_class(format!("C{i}"))).collect::<Vec<_>>())
}

fn oracle_subsumes(x: &ClassDef, y: &ClassDef) -> bool {
    let (xm, ym) = (x.core().unwrap().members(), y.core().unwrap().members());
    xm.len() < ym.len() && xm.iter().all(|a| ym.iter().any(|b| oracle::equivalent(a, b)))
}

fn instance_of(c: &ClassDef, id: &str) -> ObjectInstance {
    let core = c.core().unwrap();
    let props = core
        .specification
        .iter()
        .map(|p| match p.units() {
            Some(u) => Property::quantitative(p.name(), Some(Quantity::List(vec![2.0, 2.0])), u).unwrap(),
            None => p.clone(),
        })
        .collect();
    ObjectInstance::new(id, Specification::new(props).unwrap(), core.signature.clone()).unwrap()
}

fn build(classes: &[ClassDef]) -> Network {
    let mut n = Network::new();
    for (i, c) in classes.iter().enumerate() {
        n = n.add_class(c.clone()).unwrap();
        n = n.add_object(instance_of(c, &format!("o{i}"))).unwrap();
    }
    n
}

fn endpoints_resolve(n: &Network) -> bool {
    n.relations().all(|r| n.contains(&r.from) && n.contains(&r.to))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn subsumption_edges_match_pairwise_check(classes in lattice()) {
        let n = build(&classes);
        let inferred = n.infer_relations(1.0).unwrap();
        let got: BTreeSet<(String, String)> = inferred
            .iter()
            .filter(|r| r.kind == RelationKind::AKindOf)
            .map(|r| (r.from.name.clone(), r.to.name.clone()))
            .collect();
        let mut want = BTreeSet::new();
        for x in &classes {
            for y in &classes {
                if oracle_subsumes(x, y) {
                    want.insert((y.name().to_owned(), x.name().to_owned()));
                }
            }
        }
        prop_assert_eq!(got, want);
    }

    #[test]
    fn instance_edges_are_sound_and_most_specific(classes in lattice(), threshold in prop_oneof![Just(1.0), 0.1..=1.0f64]) {
        let n = build(&classes);
        let inferred = n.infer_relations(threshold).unwrap();
        for r in inferred.iter().filter(|r| r.kind == RelationKind::InstanceOf) {
            let o = n.object(&r.from.name, r.from.clone_index).unwrap();
            let t = n.class(&r.to.name).unwrap();
            prop_assert!(model::satisfies(o, t, threshold).unwrap() >= threshold);
            for other in inferred.iter().filter(|s| s.kind == RelationKind::InstanceOf && s.from == r.from && s.to != r.to) {
                prop_assert!(!model::subsumes(t, n.class(&other.to.name).unwrap()));
            }
        }
        prop_assert_eq!(n.infer_relations(threshold).unwrap(), inferred.clone());
        let once = n.with_inferred(threshold).unwrap();
        let twice = once.with_inferred(threshold).unwrap();
        prop_assert_eq!(once.relations().collect::<Vec<_>>(), twice.relations().collect::<Vec<_>>());
    }

    #[test]
    fn operations_keep_values_and_endpoints(classes in lattice(), pick in any::<prop::sample::Index>(), ops in prop::collection::vec(0u8..4, 1..6)) {
        let n0 = build(&classes);
        let snapshot = oodn::io::save(&n0);
        let m = Modifier::new("M", TargetKind::Class, vec![ModificationFunction::AddProperty(
            Property::quantitative("extra", None, "kg").unwrap(),
        )]).unwrap();
        let mut n = n0.add_modifier(m.clone()).unwrap();
        for op in ops {
            let nodes = n.nodes();
            let target = pick.get(&nodes).clone();
            let classes: Vec<NodeRef> = nodes.iter().filter(|r| r.kind == NodeKind::Class).cloned().collect();
            n = match op {
                0 if target.kind == NodeKind::Class => match n.apply_modifier("M", &target) {
                    Ok((next, result)) => {
                        let direct = modifiers::apply_to_class(&m, n.class(&target.name).unwrap()).unwrap();
                        prop_assert!(next.class(&result.name).unwrap().member_equivalent(&direct));
                        next
                    }
                    Err(_) => n,
                },
                1 if classes.len() >= 2 => {
                    let out = n.apply_exploiter(Exploiter::Intersection, &classes[..2], None);
                    match out {
                        Ok(o) => o.network,
                        Err(_) => n,
                    }
                }
                2 if target.kind == NodeKind::Object => n.apply_exploiter(Exploiter::Clone, &[target], None).unwrap().network,
                _ => n.with_inferred(1.0).unwrap(),
            };
            prop_assert!(endpoints_resolve(&n));
        }
        prop_assert_eq!(oodn::io::save(&n0), snapshot);
    }
}

#[test]
fn single_class_single_object() {
    let c = ClassDef::homogeneous(
        "T",
        Specification::new(vec![Property::quantitative("p", None, "cm").unwrap()]).unwrap(),
        oodn::Signature::empty(),
    )
    .unwrap();
    let n = build(std::slice::from_ref(&c));
    let rels: Vec<_> = n.infer_relations(1.0).unwrap().into_iter().collect();
    assert_eq!(rels.len(), 1);
    assert_eq!(rels[0].kind, RelationKind::InstanceOf);
    assert_eq!(
        n.query(&oodn::network::Query::Neighbors {
            node: NodeRef::class("T"),
            kind: None,
            direction: oodn::network::Direction::Both,
        })
        .unwrap(),
        []
    );
    assert!(c.core().unwrap().member_count() == 1);
}
