//! Set-theoretic operations on classes and objects: union, intersection,
//! difference, symmetric difference and cloning.
//!
//! Operands are homogeneous classes. Members are matched by kind and name
//! (names are unique per operand, so the match is a bijection on shared
//! names) and then checked for equivalence. Intersection, difference and
//! symmetric difference are partial: when there is nothing to put in the
//! result they return [`OperationResult::Absent`].

use std::collections::BTreeSet;
use std::fmt;

use crate::model::{
    ClassDef, Core, HasMembers, Member, MemberKey, MemberKind, Method, ModelError, ObjectInstance, Projection,
    Property, Quantity, Signature, Specification,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Exploiter {
    Union,
    Intersection,
    Difference,
    SymmetricDifference,
    Clone,
}

impl Exploiter {
    pub const ALL: [Exploiter; 5] = [
        Exploiter::Union,
        Exploiter::Intersection,
        Exploiter::Difference,
        Exploiter::SymmetricDifference,
        Exploiter::Clone,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Exploiter::Union => "union",
            Exploiter::Intersection => "intersection",
            Exploiter::Difference => "difference",
            Exploiter::SymmetricDifference => "symmetric-difference",
            Exploiter::Clone => "clone",
        }
    }
}

impl fmt::Display for Exploiter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Exploiter {
    type Err = ExploitError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Exploiter::ALL.into_iter().find(|e| e.name() == s).ok_or_else(|| ExploitError::UnknownExploiter(s.to_owned()))
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExploitError {
    #[error("unknown exploiter `{0}`")]
    UnknownExploiter(String),
    #[error("{op} needs at least {min} operands, got {got}")]
    TooFewOperands { op: Exploiter, min: usize, got: usize },
    #[error("{op} takes {expected} operands, got {got}")]
    WrongOperandCount { op: Exploiter, expected: usize, got: usize },
    #[error("clone index must be positive")]
    ZeroCloneIndex,
    #[error("`{id}` already has a clone with index {index}")]
    DuplicateCloneIndex { id: String, index: u32 },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Outcome of an operation that may not exist.
#[derive(Debug, Clone, PartialEq)]
pub enum OperationResult {
    Present { class: ClassDef, objects: Option<Vec<ObjectInstance>> },
    Absent { reason: String },
}

impl OperationResult {
    pub fn class(&self) -> Option<&ClassDef> {
        match self {
            OperationResult::Present { class, .. } => Some(class),
            OperationResult::Absent { .. } => None,
        }
    }

    pub fn is_absent(&self) -> bool {
        matches!(self, OperationResult::Absent { .. })
    }

    fn present(class: ClassDef) -> Self {
        OperationResult::Present { class, objects: None }
    }
}

fn derived_name(op: Exploiter, labels: &[&str]) -> String {
    format!("{}({})", op.name(), labels.join(", "))
}

/// Members of `of` without an equivalent member in `against`.
fn unmatched<'a>(of: &'a Core, against: &Core) -> Vec<Member<'a>> {
    of.members().into_iter().filter(|m| !against.member(&m.key()).is_some_and(|n| m.equivalent(&n))).collect()
}

fn bundle<'a>(members: impl IntoIterator<Item = Member<'a>>) -> (Specification, Signature) {
    let (mut props, mut methods): (Vec<Property>, Vec<Method>) = (Vec::new(), Vec::new());
    for m in members {
        match m {
            Member::Property(p) => props.push(p.clone()),
            Member::Method(f) => methods.push(f.clone()),
        }
    }
    // names come from one operand, so they stay unique
    (Specification::new(props).expect("unique names"), Signature::new(methods).expect("unique names"))
}

fn projection<'a>(source: &str, members: Vec<Member<'a>>) -> Option<Projection> {
    if members.is_empty() {
        return None;
    }
    let (specification, signature) = bundle(members);
    Some(Projection { source: source.to_owned(), specification, signature })
}

/// The shared property as it appears in the result core: the first
/// operand's version, keeping a concrete value or stored degree only when
/// every operand agrees on it.
fn merged_property(name: &str, cores: &[&Core]) -> Property {
    let versions: Vec<&Property> = cores.iter().filter_map(|c| c.specification.get(name)).collect();
    let first = versions[0];
    let merged = match first {
        Property::Quantitative(_) => {
            let agree = versions.iter().all(|p| p.value() == first.value());
            let value: Option<Quantity> = if agree { first.value().cloned() } else { None };
            Property::quantitative(name, value, first.units().unwrap_or_default())
        }
        Property::Qualitative(_) => {
            let agree = versions.iter().all(|p| p.degree() == first.degree());
            let degree = if agree || first.verification().is_none() { first.degree() } else { None };
            Property::qualitative(name, first.verification().cloned(), degree)
        }
    };
    merged.expect("derived from a valid property")
}

fn homogeneous_cores<'a>(operands: &[&'a ClassDef]) -> Result<Vec<&'a Core>, ExploitError> {
    operands.iter().map(|c| c.as_homogeneous().map_err(ExploitError::from)).collect()
}

/// Keys of members equivalent across all cores, in first-operand order.
fn shared_keys(cores: &[&Core]) -> Vec<MemberKey> {
    cores[0]
        .members()
        .iter()
        .filter(|m| cores[1..].iter().all(|c| c.member(&m.key()).is_some_and(|n| m.equivalent(&n))))
        .map(Member::key)
        .collect()
}

fn core_of(keys: &[MemberKey], cores: &[&Core]) -> Core {
    let (mut props, mut methods) = (Vec::new(), Vec::new());
    for k in keys {
        match k.kind {
            MemberKind::Property => props.push(merged_property(&k.name, cores)),
            MemberKind::Method => methods.push(cores[0].signature.get(&k.name).expect("shared key").clone()),
        }
    }
    Core::new(Specification::new(props).expect("unique names"), Signature::new(methods).expect("unique names"))
}

/// Union of classes labelled by their names.
pub fn class_union(operands: &[&ClassDef]) -> Result<OperationResult, ExploitError> {
    let labelled: Vec<(&str, &ClassDef)> = operands.iter().map(|c| (c.name(), *c)).collect();
    class_union_labelled(&labelled)
}

/// Union: the core holds members equivalent across all operands, and each
/// operand contributes a projection of its remaining members, in operand
/// order. Empty projections are left out. Always present.
pub fn class_union_labelled(operands: &[(&str, &ClassDef)]) -> Result<OperationResult, ExploitError> {
    if operands.len() < 2 {
        return Err(ExploitError::TooFewOperands { op: Exploiter::Union, min: 2, got: operands.len() });
    }
    let classes: Vec<&ClassDef> = operands.iter().map(|(_, c)| *c).collect();
    let cores = homogeneous_cores(&classes)?;
    let keys = shared_keys(&cores);
    let shared: BTreeSet<&MemberKey> = keys.iter().collect();
    let projections = operands
        .iter()
        .zip(&cores)
        .filter_map(|((label, _), core)| {
            projection(label, core.members().into_iter().filter(|m| !shared.contains(&m.key())).collect())
        })
        .collect();
    let labels: Vec<&str> = operands.iter().map(|(l, _)| *l).collect();
    let class =
        ClassDef::inhomogeneous(derived_name(Exploiter::Union, &labels), Some(core_of(&keys, &cores)), projections)?;
    Ok(OperationResult::present(class))
}

/// Intersection: a core-only class of the pairwise-equivalent members;
/// absent when there are none.
pub fn class_intersection(a: &ClassDef, b: &ClassDef) -> Result<OperationResult, ExploitError> {
    let cores = homogeneous_cores(&[a, b])?;
    let keys = shared_keys(&cores);
    if keys.is_empty() {
        return Ok(OperationResult::Absent {
            reason: format!("{} and {} have no equivalent members", a.name(), b.name()),
        });
    }
    let class = ClassDef::inhomogeneous(
        derived_name(Exploiter::Intersection, &[a.name(), b.name()]),
        Some(core_of(&keys, &cores)),
        Vec::new(),
    )?;
    Ok(OperationResult::present(class))
}

/// Difference: no core, one projection (labelled by `a`) with the members
/// of `a` that have no equivalent in `b`; absent when every member matches.
pub fn class_difference(a: &ClassDef, b: &ClassDef) -> Result<OperationResult, ExploitError> {
    let cores = homogeneous_cores(&[a, b])?;
    match projection(a.name(), unmatched(cores[0], cores[1])) {
        None => Ok(OperationResult::Absent {
            reason: format!("every member of {} has an equivalent in {}", a.name(), b.name()),
        }),
        Some(p) => {
            let class =
                ClassDef::inhomogeneous(derived_name(Exploiter::Difference, &[a.name(), b.name()]), None, vec![p])?;
            Ok(OperationResult::present(class))
        }
    }
}

/// Symmetric difference: no core; the projection of `a \ b` followed by
/// that of `b \ a`. Absent when the operands are member-for-member
/// equivalent.
pub fn class_symmetric_difference(a: &ClassDef, b: &ClassDef) -> Result<OperationResult, ExploitError> {
    let cores = homogeneous_cores(&[a, b])?;
    let projections: Vec<Projection> =
        [projection(a.name(), unmatched(cores[0], cores[1])), projection(b.name(), unmatched(cores[1], cores[0]))]
            .into_iter()
            .flatten()
            .collect();
    if projections.is_empty() {
        return Ok(OperationResult::Absent {
            reason: format!("{} and {} are member-for-member equivalent", a.name(), b.name()),
        });
    }
    let class = ClassDef::inhomogeneous(
        derived_name(Exploiter::SymmetricDifference, &[a.name(), b.name()]),
        None,
        projections,
    )?;
    Ok(OperationResult::present(class))
}

/// An indexed copy of `o`. `existing` is the object population the clone
/// joins; the index must be positive and unused for `o`'s identifier.
pub fn clone_object(
    o: &ObjectInstance,
    index: u32,
    existing: &[ObjectInstance],
) -> Result<ObjectInstance, ExploitError> {
    if index == 0 {
        return Err(ExploitError::ZeroCloneIndex);
    }
    if existing.iter().any(|e| e.id() == o.id() && e.clone_index() == index) {
        return Err(ExploitError::DuplicateCloneIndex { id: o.id().to_owned(), index });
    }
    Ok(o.clone().with_clone_index(index))
}

/// Union of objects: the object set (repeated identifiers become clones
/// with the next free index) and the union of their induced classes.
pub fn object_union(objects: &[ObjectInstance]) -> Result<(Vec<ObjectInstance>, OperationResult), ExploitError> {
    if objects.len() < 2 {
        return Err(ExploitError::TooFewOperands { op: Exploiter::Union, min: 2, got: objects.len() });
    }
    let mut set: Vec<ObjectInstance> = Vec::with_capacity(objects.len());
    for o in objects {
        let taken = |idx: u32| set.iter().any(|e| e.id() == o.id() && e.clone_index() == idx);
        let member = if taken(o.clone_index()) {
            let next = (1..).find(|i| !taken(*i) && !objects.iter().any(|x| x.id() == o.id() && x.clone_index() == *i));
            o.clone().with_clone_index(next.expect("unbounded"))
        } else {
            o.clone()
        };
        set.push(member);
    }
    let induced: Vec<ClassDef> = set.iter().map(ObjectInstance::induced_class).collect();
    let names: Vec<String> = set.iter().map(ObjectInstance::display_name).collect();
    let labelled: Vec<(&str, &ClassDef)> = names.iter().map(String::as_str).zip(&induced).collect();
    let result = match class_union_labelled(&labelled)? {
        OperationResult::Present { class, .. } => OperationResult::Present { class, objects: Some(set.clone()) },
        absent => absent,
    };
    Ok((set, result))
}
