//! Modification functions, modifiers, kind classification and composition.
//!
//! A modifier is an ordered list of primitive edits. Its kind is not
//! declared; it is derived from the effect the edits have on a concrete
//! target, so the same modifier can be full on one class and partial on
//! another.

use std::collections::BTreeSet;
use std::fmt;

use crate::expr::Expr;
use crate::model::{
    ClassDef, HasMembers, MemberKey, MemberKind, Method, ModelError, ObjectInstance, Property, Quantity, Signature,
    Specification,
};

#[derive(Debug, Clone, PartialEq)]
pub enum ModificationFunction {
    SetValue {
        property: String,
        value: Quantity,
    },
    SetUnits {
        property: String,
        units: String,
    },
    /// Applies to a qualitative property's verification or to a method body.
    SetExpression {
        name: String,
        expr: Expr,
    },
    AddProperty(Property),
    RemoveProperty(String),
    ReplaceProperty {
        old: String,
        new: Property,
    },
    AddMethod(Method),
    RemoveMethod(String),
    ReplaceMethod {
        old: String,
        new: Method,
    },
}

impl ModificationFunction {
    /// Name of the existing member the edit refers to, if any.
    pub fn target_name(&self) -> Option<&str> {
        use ModificationFunction::*;
        match self {
            SetValue { property: n, .. } | SetUnits { property: n, .. } | SetExpression { name: n, .. } => Some(n),
            RemoveProperty(n) | RemoveMethod(n) => Some(n),
            ReplaceProperty { old, .. } | ReplaceMethod { old, .. } => Some(old),
            AddProperty(_) | AddMethod(_) => None,
        }
    }

    pub fn verb(&self) -> &'static str {
        use ModificationFunction::*;
        match self {
            SetValue { .. } => "setValue",
            SetUnits { .. } => "setUnits",
            SetExpression { .. } => "setExpression",
            AddProperty(_) => "addProperty",
            RemoveProperty(_) => "removeProperty",
            ReplaceProperty { .. } => "replaceProperty",
            AddMethod(_) => "addMethod",
            RemoveMethod(_) => "removeMethod",
            ReplaceMethod { .. } => "replaceMethod",
        }
    }

    fn touches_methods(&self) -> bool {
        use ModificationFunction::*;
        matches!(self, AddMethod(_) | RemoveMethod(_) | ReplaceMethod { .. })
    }
}

impl fmt::Display for ModificationFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ModificationFunction::*;
        write!(f, "{}(", self.verb())?;
        match self {
            SetValue { property, value } => write!(f, "{property}, {value}"),
            SetUnits { property, units } => write!(f, "{property}, {units}"),
            SetExpression { name, expr } => write!(f, "{name}, {expr}"),
            AddProperty(p) => write!(f, "{p}"),
            RemoveProperty(n) | RemoveMethod(n) => write!(f, "{n}"),
            ReplaceProperty { old, new } => write!(f, "{old}, {new}"),
            AddMethod(m) => write!(f, "{m}"),
            ReplaceMethod { old, new } => write!(f, "{old}, {new}"),
        }?;
        f.write_str(")")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TargetKind {
    Object,
    Class,
}

impl fmt::Display for TargetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TargetKind::Object => "object",
            TargetKind::Class => "class",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    Full,
    Partial,
    Generating,
    Destroying,
    Commutable,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Full => "full",
            Kind::Partial => "partial",
            Kind::Generating => "generating",
            Kind::Destroying => "destroying",
            Kind::Commutable => "commutable",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Kind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "full" | "complete" => Kind::Full,
            "partial" => Kind::Partial,
            "generating" => Kind::Generating,
            "destroying" => Kind::Destroying,
            "commutable" => Kind::Commutable,
            _ => return Err(format!("unknown modifier kind `{s}`")),
        })
    }
}

/// Effect-derived classification of a modifier against one target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModifierKind {
    pub kinds: BTreeSet<Kind>,
    /// Pre-existing members touched by some edit.
    pub coverage: BTreeSet<MemberKey>,
    /// Number of members the target had (properties only for objects).
    pub members: usize,
}

impl ModifierKind {
    pub fn contains(&self, k: Kind) -> bool {
        self.kinds.contains(&k)
    }
}

impl fmt::Display for ModifierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.kinds.iter().map(|k| k.name()).collect();
        write!(f, "{{{}}} coverage {}/{}", names.join(", "), self.coverage.len(), self.members)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModifierError {
    #[error("modifier `{0}` has no edits")]
    NoEdits(String),
    #[error("empty name")]
    EmptyName,
    #[error("modifier `{modifier}` targets {expected}s, not {found}s")]
    WrongTarget { modifier: String, expected: TargetKind, found: TargetKind },
    #[error("cannot compose a {0} modifier with a {1} modifier")]
    MixedTargets(TargetKind, TargetKind),
    #[error("{edit}: no property `{name}`")]
    UnknownProperty { edit: &'static str, name: String },
    #[error("{edit}: no method `{name}`")]
    UnknownMethod { edit: &'static str, name: String },
    #[error("setExpression: no qualitative property or method `{0}`")]
    UnknownExpressionTarget(String),
    #[error("setExpression: `{0}` names both a property and a method")]
    AmbiguousExpressionTarget(String),
    #[error("{edit}: `{name}` already exists")]
    Duplicate { edit: &'static str, name: String },
    #[error("{edit}: property `{name}` is not quantitative")]
    NotQuantitative { edit: &'static str, name: String },
    #[error("{0}: object modifiers edit properties only")]
    MethodEditOnObject(&'static str),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Modifier {
    name: String,
    target_kind: TargetKind,
    edits: Vec<ModificationFunction>,
    yields: Option<String>,
}

impl Modifier {
    pub fn new(
        name: impl Into<String>,
        target_kind: TargetKind,
        edits: Vec<ModificationFunction>,
    ) -> Result<Modifier, ModifierError> {
        let name = name.into();
        if name.is_empty() {
            return Err(ModifierError::EmptyName);
        }
        if edits.is_empty() {
            return Err(ModifierError::NoEdits(name));
        }
        if edits.iter().any(|e| e.target_name() == Some("")) {
            return Err(ModifierError::EmptyName);
        }
        Ok(Modifier { name, target_kind, edits, yields: None })
    }

    /// Preferred name for the node this modifier produces.
    pub fn with_yields(mut self, yields: impl Into<String>) -> Modifier {
        self.yields = Some(yields.into()).filter(|y| !y.is_empty());
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn target_kind(&self) -> TargetKind {
        self.target_kind
    }

    pub fn edits(&self) -> &[ModificationFunction] {
        &self.edits
    }

    pub fn yields(&self) -> Option<&str> {
        self.yields.as_deref()
    }

    fn expect_target(&self, found: TargetKind) -> Result<(), ModifierError> {
        if self.target_kind == found {
            Ok(())
        } else {
            Err(ModifierError::WrongTarget { modifier: self.name.clone(), expected: self.target_kind, found })
        }
    }
}

impl fmt::Display for Modifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({}): ", self.name, self.target_kind)?;
        let edits: Vec<String> = self.edits.iter().map(|e| e.to_string()).collect();
        f.write_str(&edits.join("; "))
    }
}

/// Working copy of a target while edits run. `original` holds the keys of
/// pre-existing members that are still in place and unreplaced.
struct Work {
    props: Vec<Property>,
    methods: Vec<Method>,
    original: BTreeSet<MemberKey>,
    coverage: BTreeSet<MemberKey>,
    kinds: BTreeSet<Kind>,
    object: bool,
}

fn pkey(name: &str) -> MemberKey {
    MemberKey { kind: MemberKind::Property, name: name.to_owned() }
}

fn mkey(name: &str) -> MemberKey {
    MemberKey { kind: MemberKind::Method, name: name.to_owned() }
}

impl Work {
    fn new(target: &impl HasMembers, object: bool) -> Work {
        let props: Vec<Property> = target.specification().iter().cloned().collect();
        let methods: Vec<Method> = target.signature().iter().cloned().collect();
        let mut original: BTreeSet<MemberKey> = props.iter().map(|p| pkey(p.name())).collect();
        if !object {
            original.extend(methods.iter().map(|m| mkey(m.name())));
        }
        Work { props, methods, original, coverage: BTreeSet::new(), kinds: BTreeSet::new(), object }
    }

    fn touch(&mut self, key: MemberKey) {
        if self.original.contains(&key) {
            self.coverage.insert(key);
        }
    }

    fn prop_index(&self, edit: &'static str, name: &str) -> Result<usize, ModifierError> {
        self.props
            .iter()
            .position(|p| p.name() == name)
            .ok_or_else(|| ModifierError::UnknownProperty { edit, name: name.to_owned() })
    }

    fn method_index(&self, edit: &'static str, name: &str) -> Result<usize, ModifierError> {
        self.methods
            .iter()
            .position(|m| m.name() == name)
            .ok_or_else(|| ModifierError::UnknownMethod { edit, name: name.to_owned() })
    }

    fn apply(&mut self, edit: &ModificationFunction) -> Result<(), ModifierError> {
        use ModificationFunction::*;
        let verb = edit.verb();
        if self.object && edit.touches_methods() {
            return Err(ModifierError::MethodEditOnObject(verb));
        }
        match edit {
            SetValue { property, value } => {
                let i = self.prop_index(verb, property)?;
                let p = &self.props[i];
                let units =
                    p.units().ok_or_else(|| ModifierError::NotQuantitative { edit: verb, name: property.clone() })?;
                self.props[i] = Property::quantitative(property.as_str(), Some(value.clone()), units)?;
                self.touch(pkey(property));
            }
            SetUnits { property, units } => {
                let i = self.prop_index(verb, property)?;
                let p = &self.props[i];
                if !p.is_quantitative() {
                    return Err(ModifierError::NotQuantitative { edit: verb, name: property.clone() });
                }
                self.props[i] = Property::quantitative(property.as_str(), p.value().cloned(), units.as_str())?;
                self.touch(pkey(property));
            }
            SetExpression { name, expr } => {
                let prop = self.props.iter().position(|p| p.name() == name && !p.is_quantitative());
                let method = if self.object { None } else { self.methods.iter().position(|m| m.name() == name) };
                match (prop, method) {
                    (Some(_), Some(_)) => return Err(ModifierError::AmbiguousExpressionTarget(name.clone())),
                    (Some(i), None) => {
                        self.props[i] = Property::qualitative(name.as_str(), Some(expr.clone()), None)?;
                        self.touch(pkey(name));
                    }
                    (None, Some(i)) => {
                        let m = &self.methods[i];
                        self.methods[i] = Method::new(name.as_str(), m.params().to_vec(), Some(expr.clone()))?;
                        self.touch(mkey(name));
                    }
                    (None, None) => return Err(ModifierError::UnknownExpressionTarget(name.clone())),
                }
            }
            AddProperty(p) => {
                if self.props.iter().any(|q| q.name() == p.name()) {
                    return Err(ModifierError::Duplicate { edit: verb, name: p.name().to_owned() });
                }
                self.props.push(p.clone());
                self.kinds.insert(Kind::Generating);
            }
            RemoveProperty(name) => {
                let i = self.prop_index(verb, name)?;
                self.props.remove(i);
                self.touch(pkey(name));
                self.original.remove(&pkey(name));
                self.kinds.insert(Kind::Destroying);
            }
            ReplaceProperty { old, new } => {
                let i = self.prop_index(verb, old)?;
                if new.name() != old && self.props.iter().any(|q| q.name() == new.name()) {
                    return Err(ModifierError::Duplicate { edit: verb, name: new.name().to_owned() });
                }
                self.props[i] = new.clone();
                self.touch(pkey(old));
                self.original.remove(&pkey(old));
                self.kinds.insert(Kind::Commutable);
            }
            AddMethod(m) => {
                if self.methods.iter().any(|q| q.name() == m.name()) {
                    return Err(ModifierError::Duplicate { edit: verb, name: m.name().to_owned() });
                }
                self.methods.push(m.clone());
                self.kinds.insert(Kind::Generating);
            }
            RemoveMethod(name) => {
                let i = self.method_index(verb, name)?;
                self.methods.remove(i);
                self.touch(mkey(name));
                self.original.remove(&mkey(name));
                self.kinds.insert(Kind::Destroying);
            }
            ReplaceMethod { old, new } => {
                let i = self.method_index(verb, old)?;
                if new.name() != old && self.methods.iter().any(|q| q.name() == new.name()) {
                    return Err(ModifierError::Duplicate { edit: verb, name: new.name().to_owned() });
                }
                self.methods[i] = new.clone();
                self.touch(mkey(old));
                self.original.remove(&mkey(old));
                self.kinds.insert(Kind::Commutable);
            }
        }
        Ok(())
    }

    fn run(mut self, edits: &[ModificationFunction], members: usize) -> Result<(Work, ModifierKind), ModifierError> {
        for e in edits {
            self.apply(e)?;
        }
        let mut kinds = std::mem::take(&mut self.kinds);
        let coverage = std::mem::take(&mut self.coverage);
        kinds.insert(if members > 0 && coverage.len() == members { Kind::Full } else { Kind::Partial });
        Ok((self, ModifierKind { kinds, coverage, members }))
    }

    fn into_parts(self) -> Result<(Specification, Signature), ModifierError> {
        Ok((Specification::new(self.props)?, Signature::new(self.methods)?))
    }
}

fn run_on_class(m: &Modifier, t: &ClassDef) -> Result<(ClassDef, ModifierKind), ModifierError> {
    m.expect_target(TargetKind::Class)?;
    let core = t.as_homogeneous()?;
    let (work, kind) = Work::new(core, false).run(&m.edits, core.member_count())?;
    let (spec, sig) = work.into_parts()?;
    Ok((ClassDef::homogeneous(t.name(), spec, sig)?, kind))
}

fn run_on_object(m: &Modifier, o: &ObjectInstance) -> Result<(ObjectInstance, ModifierKind), ModifierError> {
    m.expect_target(TargetKind::Object)?;
    let (work, kind) = Work::new(o, true).run(&m.edits, o.specification().len())?;
    let (spec, sig) = work.into_parts()?;
    let result = ObjectInstance::new(o.id(), spec, sig)?.with_clone_index(o.clone_index());
    Ok((result, kind))
}

/// Applies the edits in order to a copy of the homogeneous class `t`. The
/// result keeps `t`'s name; callers rename it.
pub fn apply_to_class(m: &Modifier, t: &ClassDef) -> Result<ClassDef, ModifierError> {
    run_on_class(m, t).map(|(c, _)| c)
}

/// Applies the edits in order to a copy of `o`, keeping its identifier.
pub fn apply_to_object(m: &Modifier, o: &ObjectInstance) -> Result<ObjectInstance, ModifierError> {
    run_on_object(m, o).map(|(o, _)| o)
}

/// Classification target.
#[derive(Debug, Clone, Copy)]
pub enum Target<'a> {
    Class(&'a ClassDef),
    Object(&'a ObjectInstance),
}

/// Derives the modifier's kinds from its effect on `target`. Fails when the
/// modifier cannot be applied there.
pub fn classify(m: &Modifier, target: Target<'_>) -> Result<ModifierKind, ModifierError> {
    match target {
        Target::Class(t) => run_on_class(m, t).map(|(_, k)| k),
        Target::Object(o) => run_on_object(m, o).map(|(_, k)| k),
    }
}

/// `first`'s edits followed by `second`'s, under the name `first+second`.
pub fn compose(first: &Modifier, second: &Modifier) -> Result<Modifier, ModifierError> {
    if first.target_kind != second.target_kind {
        return Err(ModifierError::MixedTargets(first.target_kind, second.target_kind));
    }
    let edits = first.edits.iter().chain(&second.edits).cloned().collect();
    Modifier::new(format!("{}+{}", first.name, second.name), first.target_kind, edits)
}
