#[path = "common/dot.rs"]
mod dot;

use oodn::exploiters::Exploiter;
use oodn::io::{export_dot, load, save};
use oodn::model;
use oodn::network::{NodeRef, RelationKind};
use oodn::{fixtures, testing, Network};
use proptest::prelude::*;

fn assert_equivalent(a: &Network, b: &Network) {
    let (ca, cb): (Vec<_>, Vec<_>) = (a.classes().collect(), b.classes().collect());
    assert_eq!(ca.len(), cb.len());
    for (x, y) in ca.iter().zip(&cb) {
        assert_eq!(x.name(), y.name());
        assert!(x.structurally_identical(y), "{x}\n{y}");
    }
    let (oa, ob): (Vec<_>, Vec<_>) = (a.objects().collect(), b.objects().collect());
    assert_eq!(oa.len(), ob.len());
    for (x, y) in oa.iter().zip(&ob) {
        assert_eq!(x.display_name(), y.display_name());
        assert!(model::members_identical(*x, *y));
    }
    assert_eq!(a.modifiers().collect::<Vec<_>>(), b.modifiers().collect::<Vec<_>>());
    assert_eq!(a.relations().collect::<Vec<_>>(), b.relations().collect::<Vec<_>>());
    assert_eq!(a.exploiters(), b.exploiters());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn save_load_round_trip(n in testing::network()) {
        let text = save(&n);
        let back = load(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        assert_equivalent(&n, &back);
        prop_assert_eq!(save(&back), text);
    }

    #[test]
    fn dot_output_parses(n in testing::network()) {
        let text = export_dot(&n, &[]);
        let g = dot::parse(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert!(g.directed);
        prop_assert_eq!(g.nodes.len(), n.node_count());
        prop_assert_eq!(g.edges.len(), n.relations().count());
    }
}

#[test]
fn save_is_deterministic() {
    let n = fixtures::polygons();
    assert_eq!(save(&n), save(&n));
    assert_eq!(save(&n), save(&fixtures::polygons()));
    assert_equivalent(&n, &load(&save(&n)).unwrap());
}

#[test]
fn saved_modification_edge_loads_back() {
    let (n, _) = fixtures::polygons().apply_modifier("M1(T(R))", &NodeRef::class("T(R)")).unwrap();
    let back = load(&save(&n)).unwrap();
    let edges: Vec<_> = back
        .relations()
        .filter(|r| r.kind == RelationKind::ModificationOf)
        .map(|r| (r.from.to_string(), r.to.to_string()))
        .collect();
    assert_eq!(edges, [("T(R)".to_string(), "T(L_1)".to_string())]);
}

#[test]
fn inferred_polygons_dot() {
    let n = fixtures::polygons().with_inferred(1.0).unwrap();
    let g = dot::parse(&export_dot(&n, &[])).unwrap();
    assert_eq!(g.nodes.len(), 5);
    assert_eq!(g.edges.len(), 5);
    let shapes: Vec<&str> = g
        .nodes
        .iter()
        .map(|(_, attrs)| attrs.iter().find(|(k, _)| k == "shape").map(|(_, v)| v.as_str()).unwrap())
        .collect();
    assert_eq!(shapes.iter().filter(|s| **s == "box").count(), 3);
    assert_eq!(shapes.iter().filter(|s| **s == "ellipse").count(), 2);
    assert!(g.edges.iter().all(|(_, _, attrs)| attrs.iter().any(|(k, _)| k == "label")));
}

#[test]
fn absent_attempts_are_dashed() {
    let f = fixtures::figures();
    let a = NodeRef::class("T(A)");
    let out = f.apply_exploiter(Exploiter::Difference, &[a.clone(), a], None).unwrap();
    let g = dot::parse(&export_dot(&out.network, &[out.absent.unwrap()])).unwrap();
    let dashed = |attrs: &Vec<(String, String)>| attrs.iter().any(|(k, v)| k == "style" && v == "dashed");
    assert_eq!(g.nodes.iter().filter(|(_, a)| dashed(a)).count(), 1);
    assert_eq!(g.edges.iter().filter(|(_, _, a)| dashed(a)).count(), 2);
}

#[test]
fn load_errors_name_the_reference() {
    let doc = r#"{"version": 1, "classes": [{"name": "T(P)", "properties": [{"name": "p", "units": "u"}]}],
                  "relations": [{"from": "T(P)", "to": "T(Q)", "kind": "a-kind-of"}]}"#;
    let err = load(doc).unwrap_err();
    assert_eq!(err.path, "relations[0].to");
    assert!(err.message.contains("T(Q)"), "{err}");
}
