//! Network documents (`.oodn.json`, schema version 1) and DOT export.
//!
//! The schema is described in `docs/schema.md`. Loading validates every
//! invariant a [`Network`] has; each failure carries the path of the
//! offending document element, e.g. `classes[1].properties[4].verify`.

use std::collections::BTreeMap;
use std::fmt::{self, Write};

use serde::{Deserialize, Serialize};

use crate::exploiters::Exploiter;
use crate::expr::{self, Expr};
use crate::model::{
    ClassDef, Core, HasMembers, Method, ObjectInstance, Projection, Property, Quantity, Signature, Specification,
};
use crate::modifiers::{ModificationFunction, Modifier, TargetKind};
use crate::network::{AbsentAttempt, Network, NodeKind, NodeRef, Provenance, Relation, RelationKind};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{path}: {message}")]
pub struct LoadError {
    /// Location in the document; empty for the document root.
    pub path: String,
    pub message: String,
}

impl LoadError {
    fn at(path: impl Into<String>, message: impl fmt::Display) -> LoadError {
        let path = path.into();
        LoadError { path: if path.is_empty() { ".".into() } else { path }, message: message.to_string() }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    exploiters: Option<Vec<String>>,
    #[serde(default)]
    classes: Vec<ClassDoc>,
    #[serde(default)]
    objects: Vec<ObjectDoc>,
    #[serde(default)]
    modifiers: Vec<ModifierDoc>,
    #[serde(default)]
    relations: Vec<RelationDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassDoc {
    name: String,
    /// Core properties.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    properties: Vec<PropertyDoc>,
    /// Core methods.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    methods: Vec<MethodDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    projections: Vec<ProjectionDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProjectionDoc {
    source: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    properties: Vec<PropertyDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    methods: Vec<MethodDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ObjectDoc {
    id: String,
    #[serde(default, skip_serializing_if = "is_zero")]
    clone: u32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    properties: Vec<PropertyDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    methods: Vec<MethodDoc>,
}

fn is_zero(n: &u32) -> bool {
    *n == 0
}

/// A property with `units` is quantitative; otherwise qualitative.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PropertyDoc {
    name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    units: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    value: Option<ValueDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    verify: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    degree: Option<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ValueDoc {
    Scalar(f64),
    List(Vec<f64>),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MethodDoc {
    name: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    params: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    body: Option<String>,
}

#[derive(Serialize, Deserialize, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
enum TargetDoc {
    Object,
    Class,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModifierDoc {
    name: String,
    target: TargetDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    yields: Option<String>,
    edits: Vec<EditDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "camelCase", deny_unknown_fields)]
enum EditDoc {
    SetValue { property: String, value: ValueDoc },
    SetUnits { property: String, units: String },
    SetExpression { name: String, expr: String },
    AddProperty { property: PropertyDoc },
    RemoveProperty { name: String },
    ReplaceProperty { old: String, property: PropertyDoc },
    AddMethod { method: MethodDoc },
    RemoveMethod { name: String },
    ReplaceMethod { old: String, method: MethodDoc },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RelationDoc {
    from: String,
    to: String,
    kind: String,
    #[serde(default = "declared", skip_serializing_if = "is_declared")]
    provenance: ProvenanceDoc,
}

#[derive(Serialize, Deserialize, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
enum ProvenanceDoc {
    Declared,
    Inferred,
    Recorded,
}

fn declared() -> ProvenanceDoc {
    ProvenanceDoc::Declared
}

fn is_declared(p: &ProvenanceDoc) -> bool {
    *p == ProvenanceDoc::Declared
}

// ---- loading ----

fn parse_expr(path: &str, src: &str) -> Result<Expr, LoadError> {
    expr::parse(src).map_err(|e| LoadError::at(path, e))
}

fn quantity(v: &ValueDoc) -> Quantity {
    match v {
        ValueDoc::Scalar(x) => Quantity::Scalar(*x),
        ValueDoc::List(xs) => Quantity::List(xs.clone()),
    }
}

fn property(path: &str, d: &PropertyDoc) -> Result<Property, LoadError> {
    let p = match &d.units {
        Some(units) => {
            if d.verify.is_some() || d.degree.is_some() {
                return Err(LoadError::at(
                    path,
                    "a property with units is quantitative and takes no `verify` or `degree`",
                ));
            }
            Property::quantitative(d.name.as_str(), d.value.as_ref().map(quantity), units.as_str())
        }
        None => {
            if d.value.is_some() {
                return Err(LoadError::at(path, "`value` requires `units`"));
            }
            let verification = d.verify.as_deref().map(|v| parse_expr(&format!("{path}.verify"), v)).transpose()?;
            Property::qualitative(d.name.as_str(), verification, d.degree)
        }
    };
    p.map_err(|e| LoadError::at(path, e))
}

fn method(path: &str, d: &MethodDoc) -> Result<Method, LoadError> {
    let body = d.body.as_deref().map(|b| parse_expr(&format!("{path}.body"), b)).transpose()?;
    Method::new(d.name.as_str(), d.params.clone(), body).map_err(|e| LoadError::at(path, e))
}

fn members(path: &str, props: &[PropertyDoc], methods: &[MethodDoc]) -> Result<(Specification, Signature), LoadError> {
    let props = props
        .iter()
        .enumerate()
        .map(|(i, p)| property(&format!("{path}.properties[{i}]"), p))
        .collect::<Result<Vec<_>, _>>()?;
    let methods = methods
        .iter()
        .enumerate()
        .map(|(i, m)| method(&format!("{path}.methods[{i}]"), m))
        .collect::<Result<Vec<_>, _>>()?;
    let spec = Specification::new(props).map_err(|e| LoadError::at(format!("{path}.properties"), e))?;
    let sig = Signature::new(methods).map_err(|e| LoadError::at(format!("{path}.methods"), e))?;
    Ok((spec, sig))
}

fn class(path: &str, d: &ClassDoc) -> Result<ClassDef, LoadError> {
    let (spec, sig) = members(path, &d.properties, &d.methods)?;
    let projections = d
        .projections
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let (specification, signature) = members(&format!("{path}.projections[{i}]"), &p.properties, &p.methods)?;
            Ok(Projection { source: p.source.clone(), specification, signature })
        })
        .collect::<Result<Vec<_>, LoadError>>()?;
    ClassDef::inhomogeneous(d.name.as_str(), Some(Core::new(spec, sig)), projections)
        .map_err(|e| LoadError::at(path, e))
}

fn object(path: &str, d: &ObjectDoc) -> Result<ObjectInstance, LoadError> {
    let (spec, sig) = members(path, &d.properties, &d.methods)?;
    Ok(ObjectInstance::new(d.id.as_str(), spec, sig).map_err(|e| LoadError::at(path, e))?.with_clone_index(d.clone))
}

fn edit(path: &str, d: &EditDoc) -> Result<ModificationFunction, LoadError> {
    use ModificationFunction as F;
    Ok(match d {
        EditDoc::SetValue { property, value } => F::SetValue { property: property.clone(), value: quantity(value) },
        EditDoc::SetUnits { property, units } => F::SetUnits { property: property.clone(), units: units.clone() },
        EditDoc::SetExpression { name, expr } => {
            F::SetExpression { name: name.clone(), expr: parse_expr(&format!("{path}.expr"), expr)? }
        }
        EditDoc::AddProperty { property: p } => F::AddProperty(property(&format!("{path}.property"), p)?),
        EditDoc::RemoveProperty { name } => F::RemoveProperty(name.clone()),
        EditDoc::ReplaceProperty { old, property: p } => {
            F::ReplaceProperty { old: old.clone(), new: property(&format!("{path}.property"), p)? }
        }
        EditDoc::AddMethod { method: m } => F::AddMethod(method(&format!("{path}.method"), m)?),
        EditDoc::RemoveMethod { name } => F::RemoveMethod(name.clone()),
        EditDoc::ReplaceMethod { old, method: m } => {
            F::ReplaceMethod { old: old.clone(), new: method(&format!("{path}.method"), m)? }
        }
    })
}

fn modifier(path: &str, d: &ModifierDoc) -> Result<Modifier, LoadError> {
    let edits = d
        .edits
        .iter()
        .enumerate()
        .map(|(i, e)| edit(&format!("{path}.edits[{i}]"), e))
        .collect::<Result<Vec<_>, _>>()?;
    let target = match d.target {
        TargetDoc::Object => TargetKind::Object,
        TargetDoc::Class => TargetKind::Class,
    };
    let m = Modifier::new(d.name.as_str(), target, edits).map_err(|e| LoadError::at(path, e))?;
    Ok(match &d.yields {
        Some(y) => m.with_yields(y.as_str()),
        None => m,
    })
}

/// Parses and validates a network document.
pub fn load(text: &str) -> Result<Network, LoadError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let doc: Document = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        LoadError::at(path, e.into_inner())
    })?;
    if doc.version != FORMAT_VERSION {
        return Err(LoadError::at(
            "version",
            format!("unsupported version {}, expected {FORMAT_VERSION}", doc.version),
        ));
    }
    let mut n = Network::new();
    if let Some(names) = &doc.exploiters {
        let mut enabled = Vec::new();
        for (i, name) in names.iter().enumerate() {
            enabled.push(name.parse::<Exploiter>().map_err(|e| LoadError::at(format!("exploiters[{i}]"), e))?);
        }
        n = n.with_exploiters(enabled);
    }
    for (i, d) in doc.classes.iter().enumerate() {
        let path = format!("classes[{i}]");
        n = n.add_class(class(&path, d)?).map_err(|e| LoadError::at(path, e))?;
    }
    for (i, d) in doc.objects.iter().enumerate() {
        let path = format!("objects[{i}]");
        n = n.add_object(object(&path, d)?).map_err(|e| LoadError::at(path, e))?;
    }
    for (i, d) in doc.modifiers.iter().enumerate() {
        let path = format!("modifiers[{i}]");
        n = n.add_modifier(modifier(&path, d)?).map_err(|e| LoadError::at(path, e))?;
    }
    for (i, d) in doc.relations.iter().enumerate() {
        let path = format!("relations[{i}]");
        let from = n.resolve(&d.from).map_err(|e| LoadError::at(format!("{path}.from"), e))?;
        let to = n.resolve(&d.to).map_err(|e| LoadError::at(format!("{path}.to"), e))?;
        let kind = RelationKind::parse(&d.kind).map_err(|e| LoadError::at(format!("{path}.kind"), e))?;
        let provenance = match d.provenance {
            ProvenanceDoc::Declared => Provenance::Declared,
            ProvenanceDoc::Inferred => Provenance::Inferred,
            ProvenanceDoc::Recorded => Provenance::Recorded,
        };
        n = n.declare_relation(Relation { from, to, kind, provenance }).map_err(|e| LoadError::at(path, e))?;
    }
    Ok(n)
}

// ---- saving ----

fn property_doc(p: &Property) -> PropertyDoc {
    PropertyDoc {
        name: p.name().to_owned(),
        units: p.units().map(str::to_owned),
        value: p.value().map(|q| match q {
            Quantity::Scalar(x) => ValueDoc::Scalar(*x),
            Quantity::List(xs) => ValueDoc::List(xs.clone()),
        }),
        verify: p.verification().map(Expr::to_string),
        degree: p.degree(),
    }
}

fn method_doc(m: &Method) -> MethodDoc {
    MethodDoc { name: m.name().to_owned(), params: m.params().to_vec(), body: m.body().map(Expr::to_string) }
}

fn member_docs(h: &impl HasMembers) -> (Vec<PropertyDoc>, Vec<MethodDoc>) {
    (h.specification().iter().map(property_doc).collect(), h.signature().iter().map(method_doc).collect())
}

fn edit_doc(e: &ModificationFunction) -> EditDoc {
    use ModificationFunction as F;
    let value = |q: &Quantity| match q {
        Quantity::Scalar(x) => ValueDoc::Scalar(*x),
        Quantity::List(xs) => ValueDoc::List(xs.clone()),
    };
    match e {
        F::SetValue { property, value: v } => EditDoc::SetValue { property: property.clone(), value: value(v) },
        F::SetUnits { property, units } => EditDoc::SetUnits { property: property.clone(), units: units.clone() },
        F::SetExpression { name, expr } => EditDoc::SetExpression { name: name.clone(), expr: expr.to_string() },
        F::AddProperty(p) => EditDoc::AddProperty { property: property_doc(p) },
        F::RemoveProperty(n) => EditDoc::RemoveProperty { name: n.clone() },
        F::ReplaceProperty { old, new } => EditDoc::ReplaceProperty { old: old.clone(), property: property_doc(new) },
        F::AddMethod(m) => EditDoc::AddMethod { method: method_doc(m) },
        F::RemoveMethod(n) => EditDoc::RemoveMethod { name: n.clone() },
        F::ReplaceMethod { old, new } => EditDoc::ReplaceMethod { old: old.clone(), method: method_doc(new) },
    }
}

/// The name under which `r` resolves uniquely in `n`: a `class:` or
/// `object:` prefix is added only when the bare name is ambiguous.
pub fn reference_name(n: &Network, r: &NodeRef) -> String {
    let bare = r.display_name();
    match n.resolve(&bare) {
        Ok(found) if &found == r => bare,
        _ => format!("{}:{bare}", r.kind),
    }
}

/// Serializes a network. Collections are written in sorted order, so equal
/// networks give identical text.
pub fn save(n: &Network) -> String {
    let classes = n
        .classes()
        .map(|c| {
            let (properties, methods) = c.core().map(member_docs).unwrap_or_default();
            let projections = c
                .projections()
                .iter()
                .map(|p| {
                    let (properties, methods) = member_docs(p);
                    ProjectionDoc { source: p.source.clone(), properties, methods }
                })
                .collect();
            ClassDoc { name: c.name().to_owned(), properties, methods, projections }
        })
        .collect();
    let objects = n
        .objects()
        .map(|o| {
            let (properties, methods) = member_docs(o);
            ObjectDoc { id: o.id().to_owned(), clone: o.clone_index(), properties, methods }
        })
        .collect();
    let modifiers = n
        .modifiers()
        .map(|m| ModifierDoc {
            name: m.name().to_owned(),
            target: match m.target_kind() {
                TargetKind::Object => TargetDoc::Object,
                TargetKind::Class => TargetDoc::Class,
            },
            yields: m.yields().map(str::to_owned),
            edits: m.edits().iter().map(edit_doc).collect(),
        })
        .collect();
    let relations = n
        .relations()
        .map(|r| RelationDoc {
            from: reference_name(n, &r.from),
            to: reference_name(n, &r.to),
            kind: r.kind.name().to_owned(),
            provenance: match r.provenance {
                Provenance::Declared => ProvenanceDoc::Declared,
                Provenance::Inferred => ProvenanceDoc::Inferred,
                Provenance::Recorded => ProvenanceDoc::Recorded,
            },
        })
        .collect();
    let exploiters = (n.exploiters().len() != Exploiter::ALL.len())
        .then(|| n.exploiters().iter().map(|e| e.name().to_owned()).collect());
    let doc = Document { version: FORMAT_VERSION, exploiters, classes, objects, modifiers, relations };
    let mut text = serde_json::to_string_pretty(&doc).expect("documents always serialize");
    text.push('\n');
    text
}

// ---- DOT ----

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn node_id(r: &NodeRef) -> String {
    quote(&format!("{}:{}", r.kind, r.display_name()))
}

/// Graphviz digraph of the network. Classes are boxes, objects ellipses,
/// edges are labelled with their relation kind. Each absent attempt shows
/// as a dashed node with dashed edges from its operands.
pub fn export_dot(n: &Network, absent: &[AbsentAttempt]) -> String {
    let mut out = String::from("digraph oodn {\n");
    for r in n.nodes() {
        let shape = match r.kind {
            NodeKind::Class => "box",
            NodeKind::Object => "ellipse",
        };
        let _ = writeln!(out, "  {} [label={}, shape={shape}];", node_id(&r), quote(&r.display_name()));
    }
    for r in n.relations() {
        let _ = writeln!(out, "  {} -> {} [label={}];", node_id(&r.from), node_id(&r.to), quote(r.kind.name()));
    }
    let mut seen = BTreeMap::new();
    for a in absent {
        let labels: Vec<String> = a.operands.iter().map(NodeRef::display_name).collect();
        let name = format!("{}({})", a.op.name(), labels.join(", "));
        if seen.insert(name.clone(), ()).is_some() {
            continue;
        }
        let id = quote(&format!("absent:{name}"));
        let _ = writeln!(out, "  {id} [label={}, shape=box, style=dashed];", quote(&format!("{name}\ndoes not exist")));
        for op in &a.operands {
            let _ = writeln!(out, "  {} -> {id} [label=\"operand-of\", style=dashed];", node_id(op));
        }
    }
    out.push_str("}\n");
    out
}
