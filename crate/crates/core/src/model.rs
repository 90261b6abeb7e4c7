//! Properties, specifications, signatures, objects and classes, with the
//! equivalence, similarity, satisfaction and subsumption judgments.

use std::collections::BTreeMap;
use std::fmt;

use crate::expr::{self, evaluate, expr_equal, EvalContext, EvalError, Expr, Lookup, PropertySource, Value};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("empty name")]
    EmptyName,
    #[error("property `{0}`: units must not be empty")]
    EmptyUnits(String),
    #[error("property `{0}`: value list must not be empty")]
    EmptyList(String),
    #[error("property `{0}`: value must be finite")]
    NonFiniteValue(String),
    #[error("property `{name}`: degree {degree} outside [0, 1]")]
    DegreeOutOfRange { name: String, degree: f64 },
    #[error("property `{0}`: needs a verification expression or a degree")]
    EmptyQualitative(String),
    #[error("duplicate property `{0}`")]
    DuplicateProperty(String),
    #[error("duplicate method `{0}`")]
    DuplicateMethod(String),
    #[error("method `{method}`: invalid parameter `{param}`")]
    InvalidParameter { method: String, param: String },
    #[error("method `{method}`: body references undeclared parameter `{param}`")]
    UndeclaredParameter { method: String, param: String },
    #[error("object `{object}`: quantitative property `{property}` has no value")]
    MissingValue { object: String, property: String },
    #[error("class `{0}` has no members")]
    EmptyClass(String),
    #[error("class `{class}`: projection `{source_label}` has no members")]
    EmptyProjection { class: String, source_label: String },
    #[error("class `{0}` is inhomogeneous; a core-only class is required")]
    NotHomogeneous(String),
    #[error("threshold {0} outside (0, 1]")]
    InvalidThreshold(f64),
    #[error("property `{property}`: {source}")]
    Evaluation { property: String, source: EvalError },
}

/// Concrete quantitative value.
#[derive(Debug, Clone, PartialEq)]
pub enum Quantity {
    Scalar(f64),
    List(Vec<f64>),
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantity::Scalar(v) => write!(f, "{v}"),
            Quantity::List(vs) => {
                let parts: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
                write!(f, "[{}]", parts.join(", "))
            }
        }
    }
}

/// A value with units, e.g. `(150, km/hour)`. Classes may leave the value
/// out and declare units only.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantitativeProperty {
    name: String,
    value: Option<Quantity>,
    units: String,
}

/// A verification function into [0, 1], optionally with a stored degree.
#[derive(Debug, Clone, PartialEq)]
pub struct QualitativeProperty {
    name: String,
    verification: Option<Expr>,
    degree: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Property {
    Quantitative(QuantitativeProperty),
    Qualitative(QualitativeProperty),
}

impl Property {
    pub fn quantitative(
        name: impl Into<String>,
        value: Option<Quantity>,
        units: impl Into<String>,
    ) -> Result<Property, ModelError> {
        let (name, units) = (name.into(), units.into());
        if name.is_empty() {
            return Err(ModelError::EmptyName);
        }
        if units.is_empty() {
            return Err(ModelError::EmptyUnits(name));
        }
        match &value {
            Some(Quantity::List(vs)) if vs.is_empty() => return Err(ModelError::EmptyList(name)),
            Some(Quantity::List(vs)) if vs.iter().any(|v| !v.is_finite()) => {
                return Err(ModelError::NonFiniteValue(name))
            }
            Some(Quantity::Scalar(v)) if !v.is_finite() => return Err(ModelError::NonFiniteValue(name)),
            _ => {}
        }
        Ok(Property::Quantitative(QuantitativeProperty { name, value, units }))
    }

    pub fn qualitative(
        name: impl Into<String>,
        verification: Option<Expr>,
        degree: Option<f64>,
    ) -> Result<Property, ModelError> {
        let name = name.into();
        if name.is_empty() {
            return Err(ModelError::EmptyName);
        }
        if verification.is_none() && degree.is_none() {
            return Err(ModelError::EmptyQualitative(name));
        }
        if let Some(d) = degree {
            if !(0.0..=1.0).contains(&d) {
                return Err(ModelError::DegreeOutOfRange { name, degree: d });
            }
        }
        Ok(Property::Qualitative(QualitativeProperty { name, verification, degree }))
    }

    pub fn name(&self) -> &str {
        match self {
            Property::Quantitative(q) => &q.name,
            Property::Qualitative(q) => &q.name,
        }
    }

    pub fn value(&self) -> Option<&Quantity> {
        match self {
            Property::Quantitative(q) => q.value.as_ref(),
            Property::Qualitative(_) => None,
        }
    }

    pub fn units(&self) -> Option<&str> {
        match self {
            Property::Quantitative(q) => Some(&q.units),
            Property::Qualitative(_) => None,
        }
    }

    pub fn verification(&self) -> Option<&Expr> {
        match self {
            Property::Qualitative(q) => q.verification.as_ref(),
            Property::Quantitative(_) => None,
        }
    }

    pub fn degree(&self) -> Option<f64> {
        match self {
            Property::Qualitative(q) => q.degree,
            Property::Quantitative(_) => None,
        }
    }

    pub fn is_quantitative(&self) -> bool {
        matches!(self, Property::Quantitative(_))
    }

    /// Class-level form: quantitative values dropped; stored degrees
    /// dropped when a verification expression carries the meaning.
    pub fn abstracted(&self) -> Property {
        match self {
            Property::Quantitative(q) => Property::Quantitative(QuantitativeProperty { value: None, ..q.clone() }),
            Property::Qualitative(q) if q.verification.is_some() => {
                Property::Qualitative(QualitativeProperty { degree: None, ..q.clone() })
            }
            other => other.clone(),
        }
    }

    /// Equivalence plus equal values and stored degrees.
    pub fn identical(&self, other: &Property) -> bool {
        property_equivalent(self, other) && self.value() == other.value() && self.degree() == other.degree()
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Property::Quantitative(q) => match &q.value {
                Some(v) => write!(f, "{} = ({v}, {})", q.name, q.units),
                None => write!(f, "{} = (_, {})", q.name, q.units),
            },
            Property::Qualitative(q) => {
                write!(f, "{}", q.name)?;
                if let Some(e) = &q.verification {
                    write!(f, " := {e}")?;
                }
                if let Some(d) = q.degree {
                    write!(f, " [{d}]")?;
                }
                Ok(())
            }
        }
    }
}

/// Ordered properties with pairwise distinct names.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Specification(Vec<Property>);

impl Specification {
    pub fn new(props: Vec<Property>) -> Result<Self, ModelError> {
        for (i, p) in props.iter().enumerate() {
            if props[..i].iter().any(|q| q.name() == p.name()) {
                return Err(ModelError::DuplicateProperty(p.name().to_owned()));
            }
        }
        Ok(Specification(props))
    }

    pub fn empty() -> Self {
        Specification(Vec::new())
    }

    pub fn get(&self, name: &str) -> Option<&Property> {
        self.0.iter().find(|p| p.name() == name)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Property> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_vec(self) -> Vec<Property> {
        self.0
    }
}

impl PropertySource for Specification {
    fn lookup(&self, name: &str) -> Option<Lookup<'_>> {
        self.get(name).map(|p| match p {
            Property::Quantitative(q) => match &q.value {
                Some(Quantity::List(vs)) => Lookup::List { values: vs, units: &q.units },
                Some(Quantity::Scalar(v)) => Lookup::Scalar { value: Some(*v), units: &q.units },
                None => Lookup::Scalar { value: None, units: &q.units },
            },
            Property::Qualitative(q) => Lookup::Degree(q.degree),
        })
    }
}

/// An operation applicable to a subject, e.g. perimeter or area.
#[derive(Debug, Clone, PartialEq)]
pub struct Method {
    name: String,
    params: Vec<String>,
    body: Option<Expr>,
}

impl Method {
    /// `body` may be left out at class level, where only name and arity
    /// are fixed.
    pub fn new(name: impl Into<String>, params: Vec<String>, body: Option<Expr>) -> Result<Method, ModelError> {
        let name = name.into();
        if name.is_empty() {
            return Err(ModelError::EmptyName);
        }
        for (i, p) in params.iter().enumerate() {
            if !expr::is_identifier(p) || params[..i].contains(p) {
                return Err(ModelError::InvalidParameter { method: name, param: p.clone() });
            }
        }
        if let Some(b) = &body {
            if let Some(p) = b.param_refs().into_iter().find(|p| !params.iter().any(|q| q == p)) {
                return Err(ModelError::UndeclaredParameter { method: name, param: p.to_owned() });
            }
        }
        Ok(Method { name, params, body })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn arity(&self) -> usize {
        self.params.len()
    }

    pub fn body(&self) -> Option<&Expr> {
        self.body.as_ref()
    }

    /// Invokes the body on `subject` with positional arguments.
    pub fn call(&self, subject: &dyn PropertySource, args: &[f64]) -> Result<Option<Value>, EvalError> {
        let Some(body) = &self.body else { return Ok(None) };
        let arguments: BTreeMap<String, f64> = self.params.iter().cloned().zip(args.iter().copied()).collect();
        evaluate(body, &EvalContext::with_arguments(subject, arguments)).map(Some)
    }

    pub fn identical(&self, other: &Method) -> bool {
        method_equivalent(self, other) && self.params == other.params
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.name, self.params.join(", "))?;
        match &self.body {
            Some(b) => write!(f, " = {b}"),
            None => f.write_str(" = <abstract>"),
        }
    }
}

/// Ordered methods with pairwise distinct names.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Signature(Vec<Method>);

impl Signature {
    pub fn new(methods: Vec<Method>) -> Result<Self, ModelError> {
        for (i, m) in methods.iter().enumerate() {
            if methods[..i].iter().any(|n| n.name() == m.name()) {
                return Err(ModelError::DuplicateMethod(m.name().to_owned()));
            }
        }
        Ok(Signature(methods))
    }

    pub fn empty() -> Self {
        Signature(Vec::new())
    }

    pub fn get(&self, name: &str) -> Option<&Method> {
        self.0.iter().find(|m| m.name() == name)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Method> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_vec(self) -> Vec<Method> {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MemberKind {
    Property,
    Method,
}

/// Members are keyed by kind and name; names are unique per kind.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MemberKey {
    pub kind: MemberKind,
    pub name: String,
}

impl fmt::Display for MemberKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            MemberKind::Property => write!(f, "{}", self.name),
            MemberKind::Method => write!(f, "{}()", self.name),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Member<'a> {
    Property(&'a Property),
    Method(&'a Method),
}

impl Member<'_> {
    pub fn key(&self) -> MemberKey {
        match self {
            Member::Property(p) => MemberKey { kind: MemberKind::Property, name: p.name().to_owned() },
            Member::Method(m) => MemberKey { kind: MemberKind::Method, name: m.name().to_owned() },
        }
    }

    pub fn equivalent(&self, other: &Member<'_>) -> bool {
        match (self, other) {
            (Member::Property(a), Member::Property(b)) => property_equivalent(a, b),
            (Member::Method(a), Member::Method(b)) => method_equivalent(a, b),
            _ => false,
        }
    }

    pub fn identical(&self, other: &Member<'_>) -> bool {
        match (self, other) {
            (Member::Property(a), Member::Property(b)) => a.identical(b),
            (Member::Method(a), Member::Method(b)) => a.identical(b),
            _ => false,
        }
    }
}

impl fmt::Display for Member<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Member::Property(p) => p.fmt(f),
            Member::Method(m) => m.fmt(f),
        }
    }
}

/// A specification paired with a signature: the shape shared by objects,
/// cores and projections.
pub trait HasMembers {
    fn specification(&self) -> &Specification;
    fn signature(&self) -> &Signature;

    fn members(&self) -> Vec<Member<'_>> {
        self.specification().iter().map(Member::Property).chain(self.signature().iter().map(Member::Method)).collect()
    }

    fn member(&self, key: &MemberKey) -> Option<Member<'_>> {
        match key.kind {
            MemberKind::Property => self.specification().get(&key.name).map(Member::Property),
            MemberKind::Method => self.signature().get(&key.name).map(Member::Method),
        }
    }

    fn member_count(&self) -> usize {
        self.specification().len() + self.signature().len()
    }
}

/// Same member keys, each pair equivalent.
pub fn members_equivalent(a: &impl HasMembers, b: &impl HasMembers) -> bool {
    a.member_count() == b.member_count()
        && a.members().iter().all(|m| b.member(&m.key()).is_some_and(|n| m.equivalent(&n)))
}

/// Same member keys, each pair identical (values and parameter names included).
pub fn members_identical(a: &impl HasMembers, b: &impl HasMembers) -> bool {
    a.member_count() == b.member_count()
        && a.members().iter().all(|m| b.member(&m.key()).is_some_and(|n| m.identical(&n)))
}

/// Quantitative: same name and units (values are ignored). Qualitative:
/// same name and both verifications absent or equal in normal form.
pub fn property_equivalent(a: &Property, b: &Property) -> bool {
    match (a, b) {
        (Property::Quantitative(x), Property::Quantitative(y)) => x.name == y.name && x.units == y.units,
        (Property::Qualitative(x), Property::Qualitative(y)) => {
            x.name == y.name
                && match (&x.verification, &y.verification) {
                    (None, None) => true,
                    (Some(e), Some(f)) => expr_equal(e, f),
                    _ => false,
                }
        }
        _ => false,
    }
}

/// Same name, same arity, and bodies both absent or equal in normal form.
pub fn method_equivalent(a: &Method, b: &Method) -> bool {
    a.name == b.name
        && a.arity() == b.arity()
        && match (&a.body, &b.body) {
            (None, None) => true,
            (Some(e), Some(f)) => expr_equal(e, f),
            _ => false,
        }
}

/// A concrete object: identifier, clone index (0 for the original),
/// specification with concrete values, and signature.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectInstance {
    id: String,
    clone_index: u32,
    specification: Specification,
    signature: Signature,
}

impl ObjectInstance {
    pub fn new(
        id: impl Into<String>,
        specification: Specification,
        signature: Signature,
    ) -> Result<ObjectInstance, ModelError> {
        let id = id.into();
        if id.is_empty() {
            return Err(ModelError::EmptyName);
        }
        if let Some(p) = specification.iter().find(|p| p.is_quantitative() && p.value().is_none()) {
            return Err(ModelError::MissingValue { object: id, property: p.name().to_owned() });
        }
        Ok(ObjectInstance { id, clone_index: 0, specification, signature })
    }

    pub fn with_clone_index(mut self, index: u32) -> Self {
        self.clone_index = index;
        self
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn clone_index(&self) -> u32 {
        self.clone_index
    }

    /// `A` for originals, `Clone_k(A)` for clones.
    pub fn display_name(&self) -> String {
        if self.clone_index == 0 {
            self.id.clone()
        } else {
            format!("Clone_{}({})", self.clone_index, self.id)
        }
    }

    /// The homogeneous class `T(<name>)` this object induces: values
    /// abstracted away, bodies kept.
    pub fn induced_class(&self) -> ClassDef {
        let spec = Specification(self.specification.iter().map(Property::abstracted).collect());
        ClassDef {
            name: format!("T({})", self.display_name()),
            core: Some(Core { specification: spec, signature: self.signature.clone() }),
            projections: Vec::new(),
        }
    }
}

impl HasMembers for ObjectInstance {
    fn specification(&self) -> &Specification {
        &self.specification
    }

    fn signature(&self) -> &Signature {
        &self.signature
    }
}

impl PropertySource for ObjectInstance {
    fn lookup(&self, name: &str) -> Option<Lookup<'_>> {
        self.specification.lookup(name)
    }
}

/// Same properties and behaviour, up to property and method equivalence.
pub fn objects_similar(a: &ObjectInstance, b: &ObjectInstance) -> bool {
    members_equivalent(a, b)
}

/// Members shared by every constituent of a class.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Core {
    pub specification: Specification,
    pub signature: Signature,
}

impl Core {
    pub fn new(specification: Specification, signature: Signature) -> Self {
        Core { specification, signature }
    }
}

impl HasMembers for Core {
    fn specification(&self) -> &Specification {
        &self.specification
    }

    fn signature(&self) -> &Signature {
        &self.signature
    }
}

/// Members typical only of one constituent.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    pub source: String,
    pub specification: Specification,
    pub signature: Signature,
}

impl HasMembers for Projection {
    fn specification(&self) -> &Specification {
        &self.specification
    }

    fn signature(&self) -> &Signature {
        &self.signature
    }
}

/// A class of objects: an optional core plus zero or more projections.
/// A class with a core and no projections is homogeneous.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassDef {
    name: String,
    core: Option<Core>,
    projections: Vec<Projection>,
}

impl ClassDef {
    pub fn homogeneous(
        name: impl Into<String>,
        specification: Specification,
        signature: Signature,
    ) -> Result<ClassDef, ModelError> {
        ClassDef::inhomogeneous(name, Some(Core { specification, signature }), Vec::new())
    }

    /// An empty core is dropped; a class needs at least one member overall.
    pub fn inhomogeneous(
        name: impl Into<String>,
        core: Option<Core>,
        projections: Vec<Projection>,
    ) -> Result<ClassDef, ModelError> {
        let name = name.into();
        if name.is_empty() {
            return Err(ModelError::EmptyName);
        }
        let core = core.filter(|c| c.member_count() > 0);
        for p in &projections {
            if p.member_count() == 0 {
                return Err(ModelError::EmptyProjection { class: name, source_label: p.source.clone() });
            }
            if let Some(c) = &core {
                if let Some(m) = p.members().iter().find(|m| c.member(&m.key()).is_some()) {
                    let key = m.key();
                    return Err(match key.kind {
                        MemberKind::Property => ModelError::DuplicateProperty(key.name),
                        MemberKind::Method => ModelError::DuplicateMethod(key.name),
                    });
                }
            }
        }
        if core.is_none() && projections.is_empty() {
            return Err(ModelError::EmptyClass(name));
        }
        Ok(ClassDef { name, core, projections })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<String>) -> ClassDef {
        self.name = name.into();
        self
    }

    pub fn core(&self) -> Option<&Core> {
        self.core.as_ref()
    }

    pub fn projections(&self) -> &[Projection] {
        &self.projections
    }

    pub fn is_homogeneous(&self) -> bool {
        self.core.is_some() && self.projections.is_empty()
    }

    /// The core of a homogeneous class, or `NotHomogeneous`.
    pub fn as_homogeneous(&self) -> Result<&Core, ModelError> {
        match &self.core {
            Some(c) if self.projections.is_empty() => Ok(c),
            _ => Err(ModelError::NotHomogeneous(self.name.clone())),
        }
    }

    pub fn member_count(&self) -> usize {
        self.core.as_ref().map_or(0, |c| c.member_count())
            + self.projections.iter().map(|p| p.member_count()).sum::<usize>()
    }

    /// Cores member-equivalent and projections pairwise member-equivalent
    /// in order. Names and projection labels are ignored.
    pub fn member_equivalent(&self, other: &ClassDef) -> bool {
        self.same_shape(other, members_equivalent, members_equivalent)
    }

    /// Like [`member_equivalent`](Self::member_equivalent), but values,
    /// stored degrees and parameter names must also agree.
    pub fn structurally_identical(&self, other: &ClassDef) -> bool {
        self.same_shape(other, members_identical, members_identical)
    }

    fn same_shape(
        &self,
        other: &ClassDef,
        cores: impl Fn(&Core, &Core) -> bool,
        projections: impl Fn(&Projection, &Projection) -> bool,
    ) -> bool {
        let core_ok = match (&self.core, &other.core) {
            (None, None) => true,
            (Some(a), Some(b)) => cores(a, b),
            _ => false,
        };
        core_ok
            && self.projections.len() == other.projections.len()
            && self.projections.iter().zip(&other.projections).all(|(a, b)| projections(a, b))
    }
}

impl fmt::Display for ClassDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "class {}", self.name)?;
        if let Some(c) = &self.core {
            writeln!(f, "  core:")?;
            for m in c.members() {
                writeln!(f, "    {m}")?;
            }
        }
        for p in &self.projections {
            writeln!(f, "  projection {}:", p.source)?;
            for m in p.members() {
                writeln!(f, "    {m}")?;
            }
        }
        Ok(())
    }
}

fn score(o: &ObjectInstance, member: Member<'_>) -> Result<f64, ModelError> {
    let crisp = |b: bool| if b { 1.0 } else { 0.0 };
    Ok(match member {
        Member::Property(Property::Quantitative(q)) => {
            crisp(o.specification.get(&q.name).and_then(Property::units) == Some(q.units.as_str()))
        }
        Member::Property(Property::Qualitative(q)) => match &q.verification {
            Some(v) => {
                let value = evaluate(v, &EvalContext::new(o))
                    .map_err(|source| ModelError::Evaluation { property: q.name.clone(), source })?;
                value.as_degree().ok_or_else(|| ModelError::Evaluation {
                    property: q.name.clone(),
                    source: EvalError::SortMismatch { expected: "degree", found: value.sort(), node: v.to_string() },
                })?
            }
            None => match o.specification.get(&q.name) {
                Some(Property::Qualitative(own)) => match (own.degree, &own.verification) {
                    (Some(d), _) => d,
                    (None, Some(v)) => evaluate(v, &EvalContext::new(o))
                        .map_err(|source| ModelError::Evaluation { property: q.name.clone(), source })?
                        .as_degree()
                        .unwrap_or(0.0),
                    (None, None) => 0.0,
                },
                _ => 0.0,
            },
        },
        Member::Method(m) => crisp(o.signature.get(m.name()).is_some_and(|own| {
            own.arity() == m.arity()
                && match (m.body(), own.body()) {
                    (None, _) => true,
                    (Some(want), Some(have)) => expr_equal(want, have),
                    (Some(_), None) => false,
                }
        })),
    })
}

/// Degree to which `o` meets every requirement of the homogeneous class
/// `t`: the minimum of the per-member scores. Compare against `threshold`
/// for a crisp instance-of.
pub fn satisfies(o: &ObjectInstance, t: &ClassDef, threshold: f64) -> Result<f64, ModelError> {
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(ModelError::InvalidThreshold(threshold));
    }
    let core = t.as_homogeneous()?;
    let mut degree: f64 = 1.0;
    for m in core.members() {
        degree = degree.min(score(o, m)?);
    }
    Ok(degree.clamp(0.0, 1.0))
}

/// Proper structural subsumption between homogeneous classes: every member
/// of `general` has an equivalent in `specific`, and `specific` has more.
pub fn subsumes(general: &ClassDef, specific: &ClassDef) -> bool {
    let (Ok(g), Ok(s)) = (general.as_homogeneous(), specific.as_homogeneous()) else {
        return false;
    };
    g.member_count() < s.member_count()
        && g.members().iter().all(|m| s.member(&m.key()).is_some_and(|n| m.equivalent(&n)))
}
