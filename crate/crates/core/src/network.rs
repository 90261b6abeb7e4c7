//! The network: objects, classes, relations, enabled exploiters and
//! modifiers, as a persistent value. Every operation returns a new network
//! and leaves the receiver untouched; unchanged collections are shared.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use crate::exploiters::{self, ExploitError, Exploiter, OperationResult};
use crate::model::{self, ClassDef, HasMembers, ModelError, ObjectInstance};
use crate::modifiers::{self, Modifier, ModifierError, TargetKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeKind {
    Object,
    Class,
}

impl NodeKind {
    pub fn name(self) -> &'static str {
        match self {
            NodeKind::Object => "object",
            NodeKind::Class => "class",
        }
    }
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Reference to a node. Objects are identified by identifier and clone
/// index; classes by name (clone index 0). Ordered by name first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeRef {
    pub name: String,
    pub clone_index: u32,
    pub kind: NodeKind,
}

impl NodeRef {
    pub fn class(name: impl Into<String>) -> NodeRef {
        NodeRef { name: name.into(), clone_index: 0, kind: NodeKind::Class }
    }

    pub fn object(id: impl Into<String>, clone_index: u32) -> NodeRef {
        NodeRef { name: id.into(), clone_index, kind: NodeKind::Object }
    }

    pub fn of_object(o: &ObjectInstance) -> NodeRef {
        NodeRef::object(o.id(), o.clone_index())
    }

    /// Reads an object display name: `A` or `Clone_k(A)`.
    pub fn parse_object(s: &str) -> NodeRef {
        let clone = s
            .strip_prefix("Clone_")
            .and_then(|rest| rest.split_once('('))
            .and_then(|(k, rest)| Some((k.parse::<u32>().ok().filter(|k| *k > 0)?, rest.strip_suffix(')')?)))
            .filter(|(_, id)| !id.is_empty());
        match clone {
            Some((k, id)) => NodeRef::object(id, k),
            None => NodeRef::object(s, 0),
        }
    }

    /// Display name: the class name, `A`, or `Clone_k(A)`.
    pub fn display_name(&self) -> String {
        if self.clone_index == 0 {
            self.name.clone()
        } else {
            format!("Clone_{}({})", self.clone_index, self.name)
        }
    }
}

impl fmt::Display for NodeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RelationKind {
    InstanceOf,
    IsA,
    AKindOf,
    ModificationOf,
    ResultOf,
    OperandOf,
    User(String),
}

impl RelationKind {
    pub fn name(&self) -> &str {
        match self {
            RelationKind::InstanceOf => "instance-of",
            RelationKind::IsA => "is-a",
            RelationKind::AKindOf => "a-kind-of",
            RelationKind::ModificationOf => "modification-of",
            RelationKind::ResultOf => "result-of",
            RelationKind::OperandOf => "operand-of",
            RelationKind::User(label) => label,
        }
    }

    pub fn is_subsumption(&self) -> bool {
        matches!(self, RelationKind::IsA | RelationKind::AKindOf)
    }

    /// Query matching: is-a and a-kind-of are aliases.
    pub fn matches(&self, other: &RelationKind) -> bool {
        self == other || (self.is_subsumption() && other.is_subsumption())
    }

    /// Built-in kinds by name; anything else is a user label.
    pub fn parse(s: &str) -> Result<RelationKind, NetworkError> {
        Ok(match s {
            "instance-of" => RelationKind::InstanceOf,
            "is-a" => RelationKind::IsA,
            "a-kind-of" => RelationKind::AKindOf,
            "modification-of" => RelationKind::ModificationOf,
            "result-of" => RelationKind::ResultOf,
            "operand-of" => RelationKind::OperandOf,
            "" => return Err(NetworkError::EmptyRelationLabel),
            other => RelationKind::User(other.to_owned()),
        })
    }
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Provenance {
    Declared,
    Inferred,
    Recorded,
}

impl Provenance {
    pub fn name(self) -> &'static str {
        match self {
            Provenance::Declared => "declared",
            Provenance::Inferred => "inferred",
            Provenance::Recorded => "recorded",
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Relation {
    pub from: NodeRef,
    pub to: NodeRef,
    pub kind: RelationKind,
    pub provenance: Provenance,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -[{}]-> {} ({})", self.from, self.kind, self.to, self.provenance)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NetworkError {
    #[error("duplicate object `{0}`")]
    DuplicateObject(String),
    #[error("duplicate class `{0}`")]
    DuplicateClass(String),
    #[error("duplicate modifier `{0}`")]
    DuplicateModifier(String),
    #[error("relation {0} is already present")]
    DuplicateRelation(String),
    #[error("unknown {kind} `{name}`")]
    UnknownNode { kind: NodeKind, name: String },
    #[error("unknown modifier `{0}`")]
    UnknownModifier(String),
    #[error("relation label must not be empty")]
    EmptyRelationLabel,
    #[error("exploiter `{0}` is not enabled in this network")]
    ExploiterDisabled(Exploiter),
    #[error("{op} cannot take {found} operands")]
    OperandKind { op: Exploiter, found: String },
    #[error("modifier `{modifier}` targets {expected}s, `{target}` is a {found}")]
    ModifierTarget { modifier: String, expected: TargetKind, target: String, found: NodeKind },
    #[error("threshold {0} outside (0, 1]")]
    InvalidThreshold(f64),
    #[error(transparent)]
    Exploit(#[from] ExploitError),
    #[error(transparent)]
    Modifier(#[from] ModifierError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// An exploiter application whose result does not exist. The network is
/// unchanged by it; the record lets exports show the attempt.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbsentAttempt {
    pub op: Exploiter,
    pub operands: Vec<NodeRef>,
    pub reason: String,
}

/// What [`Network::apply_exploiter`] produced.
#[derive(Debug, Clone)]
pub struct ExploitOutcome {
    pub network: Network,
    /// The result node, `None` when the result does not exist.
    pub node: Option<NodeRef>,
    pub result: OperationResult,
    pub absent: Option<AbsentAttempt>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Out,
    In,
    Both,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Query {
    Neighbors {
        node: NodeRef,
        kind: Option<RelationKind>,
        direction: Direction,
    },
    /// Nodes reachable along outgoing edges of `kind` by a nonempty path.
    Reachable {
        node: NodeRef,
        kind: RelationKind,
    },
    InstancesOf(NodeRef),
    /// Transitive subclasses along subsumption edges.
    SubclassesOf(NodeRef),
}

type RelationKey = (NodeRef, NodeRef, RelationKind);

#[derive(Debug, Clone)]
pub struct Network {
    objects: Arc<BTreeMap<(String, u32), ObjectInstance>>,
    classes: Arc<BTreeMap<String, ClassDef>>,
    relations: Arc<BTreeMap<RelationKey, Provenance>>,
    exploiters: BTreeSet<Exploiter>,
    modifiers: Arc<BTreeMap<String, Modifier>>,
    dedup: bool,
}

impl Default for Network {
    fn default() -> Self {
        Network::new()
    }
}

impl Network {
    /// Empty network with all five exploiters enabled and dedup on.
    pub fn new() -> Network {
        Network {
            objects: Arc::default(),
            classes: Arc::default(),
            relations: Arc::default(),
            exploiters: Exploiter::ALL.into_iter().collect(),
            modifiers: Arc::default(),
            dedup: true,
        }
    }

    pub fn with_exploiters(&self, enabled: impl IntoIterator<Item = Exploiter>) -> Network {
        let mut n = self.clone();
        n.exploiters = enabled.into_iter().collect();
        n
    }

    /// Structural dedup of results: when on, a result structurally
    /// identical to an existing node reuses that node.
    pub fn with_dedup(&self, dedup: bool) -> Network {
        let mut n = self.clone();
        n.dedup = dedup;
        n
    }

    pub fn dedup(&self) -> bool {
        self.dedup
    }

    pub fn objects(&self) -> impl Iterator<Item = &ObjectInstance> {
        self.objects.values()
    }

    pub fn classes(&self) -> impl Iterator<Item = &ClassDef> {
        self.classes.values()
    }

    pub fn modifiers(&self) -> impl Iterator<Item = &Modifier> {
        self.modifiers.values()
    }

    pub fn exploiters(&self) -> &BTreeSet<Exploiter> {
        &self.exploiters
    }

    /// Relations sorted by (from, to, kind).
    pub fn relations(&self) -> impl Iterator<Item = Relation> + '_ {
        self.relations.iter().map(|((from, to, kind), p)| Relation {
            from: from.clone(),
            to: to.clone(),
            kind: kind.clone(),
            provenance: *p,
        })
    }

    pub fn object(&self, id: &str, clone_index: u32) -> Option<&ObjectInstance> {
        self.objects.get(&(id.to_owned(), clone_index))
    }

    pub fn class(&self, name: &str) -> Option<&ClassDef> {
        self.classes.get(name)
    }

    pub fn modifier(&self, name: &str) -> Option<&Modifier> {
        self.modifiers.get(name)
    }

    pub fn node_count(&self) -> usize {
        self.objects.len() + self.classes.len()
    }

    pub fn contains(&self, r: &NodeRef) -> bool {
        match r.kind {
            NodeKind::Object => self.objects.contains_key(&(r.name.clone(), r.clone_index)),
            NodeKind::Class => r.clone_index == 0 && self.classes.contains_key(&r.name),
        }
    }

    fn check(&self, r: &NodeRef) -> Result<(), NetworkError> {
        if self.contains(r) {
            Ok(())
        } else {
            Err(NetworkError::UnknownNode { kind: r.kind, name: r.display_name() })
        }
    }

    /// All nodes, sorted.
    pub fn nodes(&self) -> Vec<NodeRef> {
        let mut all: Vec<NodeRef> = self
            .objects
            .keys()
            .map(|(id, k)| NodeRef::object(id.as_str(), *k))
            .chain(self.classes.keys().map(|n| NodeRef::class(n.as_str())))
            .collect();
        all.sort();
        all
    }

    /// Finds a node by display name. `class:` and `object:` prefixes pick
    /// the kind; without one, a name matching both kinds is an error.
    pub fn resolve(&self, name: &str) -> Result<NodeRef, ResolveError> {
        let (kinds, bare) = match name.split_once(':') {
            Some(("class", rest)) => (vec![NodeKind::Class], rest),
            Some(("object", rest)) => (vec![NodeKind::Object], rest),
            _ => (vec![NodeKind::Class, NodeKind::Object], name),
        };
        let found: Vec<NodeRef> = kinds
            .into_iter()
            .map(|k| match k {
                NodeKind::Class => NodeRef::class(bare),
                NodeKind::Object => NodeRef::parse_object(bare),
            })
            .filter(|r| self.contains(r))
            .collect();
        match found.len() {
            0 => Err(ResolveError::NotFound(name.to_owned())),
            1 => Ok(found.into_iter().next().expect("one")),
            _ => Err(ResolveError::Ambiguous(name.to_owned())),
        }
    }

    pub fn add_object(&self, o: ObjectInstance) -> Result<Network, NetworkError> {
        let key = (o.id().to_owned(), o.clone_index());
        if self.objects.contains_key(&key) {
            return Err(NetworkError::DuplicateObject(o.display_name()));
        }
        let mut n = self.clone();
        Arc::make_mut(&mut n.objects).insert(key, o);
        Ok(n)
    }

    pub fn add_class(&self, c: ClassDef) -> Result<Network, NetworkError> {
        if self.classes.contains_key(c.name()) {
            return Err(NetworkError::DuplicateClass(c.name().to_owned()));
        }
        let mut n = self.clone();
        Arc::make_mut(&mut n.classes).insert(c.name().to_owned(), c);
        Ok(n)
    }

    pub fn add_modifier(&self, m: Modifier) -> Result<Network, NetworkError> {
        if self.modifiers.contains_key(m.name()) {
            return Err(NetworkError::DuplicateModifier(m.name().to_owned()));
        }
        let mut n = self.clone();
        Arc::make_mut(&mut n.modifiers).insert(m.name().to_owned(), m);
        Ok(n)
    }

    /// Adds a relation; both endpoints must exist and the (from, to, kind)
    /// triple must be new.
    pub fn declare_relation(&self, r: Relation) -> Result<Network, NetworkError> {
        self.check(&r.from)?;
        self.check(&r.to)?;
        if matches!(&r.kind, RelationKind::User(l) if l.is_empty()) {
            return Err(NetworkError::EmptyRelationLabel);
        }
        let key = (r.from.clone(), r.to.clone(), r.kind.clone());
        if self.relations.contains_key(&key) {
            return Err(NetworkError::DuplicateRelation(r.to_string()));
        }
        let mut n = self.clone();
        Arc::make_mut(&mut n.relations).insert(key, r.provenance);
        Ok(n)
    }

    fn record(&mut self, from: NodeRef, to: NodeRef, kind: RelationKind) {
        Arc::make_mut(&mut self.relations).entry((from, to, kind)).or_insert(Provenance::Recorded);
    }

    /// Structural relations implied by the current nodes: a-kind-of from
    /// each homogeneous class to every class subsuming it (transitive pairs
    /// included), and instance-of from each object to each most-specific
    /// class it satisfies to at least `threshold`. An evaluation error
    /// counts as degree 0.
    pub fn infer_relations(&self, threshold: f64) -> Result<BTreeSet<Relation>, NetworkError> {
        if !(threshold > 0.0 && threshold <= 1.0) {
            return Err(NetworkError::InvalidThreshold(threshold));
        }
        let classes: Vec<&ClassDef> = self.classes.values().filter(|c| c.is_homogeneous()).collect();
        let mut out = BTreeSet::new();
        let edge = |from: NodeRef, to: NodeRef, kind| Relation { from, to, kind, provenance: Provenance::Inferred };
        for x in &classes {
            for y in &classes {
                if model::subsumes(x, y) {
                    out.insert(edge(NodeRef::class(y.name()), NodeRef::class(x.name()), RelationKind::AKindOf));
                }
            }
        }
        for o in self.objects.values() {
            let satisfied: Vec<&ClassDef> = classes
                .iter()
                .copied()
                .filter(|t| model::satisfies(o, t, threshold).unwrap_or(0.0) >= threshold)
                .collect();
            for t in &satisfied {
                if !satisfied.iter().any(|s| model::subsumes(t, s)) {
                    out.insert(edge(NodeRef::of_object(o), NodeRef::class(t.name()), RelationKind::InstanceOf));
                }
            }
        }
        Ok(out)
    }

    /// The network with previously inferred relations replaced by a fresh
    /// inference. Declared or recorded triples are kept as they are.
    pub fn with_inferred(&self, threshold: f64) -> Result<Network, NetworkError> {
        let inferred = self.infer_relations(threshold)?;
        let mut n = self.clone();
        let rel = Arc::make_mut(&mut n.relations);
        rel.retain(|_, p| *p != Provenance::Inferred);
        for r in inferred {
            rel.entry((r.from, r.to, r.kind)).or_insert(r.provenance);
        }
        Ok(n)
    }

    fn free_class_name(&self, base: &str) -> String {
        free_name(base, |n| self.classes.contains_key(n))
    }

    fn free_object_id(&self, base: &str) -> String {
        free_name(base, |n| self.objects.keys().any(|(id, _)| id == n))
    }

    /// Adds `c` unless dedup finds a structurally identical class; returns
    /// the node holding the result.
    fn place_class(&mut self, c: ClassDef, preferred: &[String]) -> NodeRef {
        if self.dedup {
            if let Some(existing) = self.classes.values().find(|e| e.structurally_identical(&c)) {
                return NodeRef::class(existing.name());
            }
        }
        let name = preferred
            .iter()
            .find(|p| !self.classes.contains_key(p.as_str()))
            .cloned()
            .unwrap_or_else(|| self.free_class_name(preferred.last().expect("nonempty")));
        Arc::make_mut(&mut self.classes).insert(name.clone(), c.renamed(name.as_str()));
        NodeRef::class(name)
    }

    /// Applies a named modifier to a node. The result joins the network
    /// (or, with dedup, resolves to an identical existing node) and a
    /// modification-of edge is recorded from the target to it.
    pub fn apply_modifier(&self, modifier: &str, target: &NodeRef) -> Result<(Network, NodeRef), NetworkError> {
        let m = self.modifiers.get(modifier).ok_or_else(|| NetworkError::UnknownModifier(modifier.to_owned()))?;
        self.check(target)?;
        let expected = match target.kind {
            NodeKind::Class => TargetKind::Class,
            NodeKind::Object => TargetKind::Object,
        };
        if m.target_kind() != expected {
            return Err(NetworkError::ModifierTarget {
                modifier: m.name().to_owned(),
                expected: m.target_kind(),
                target: target.display_name(),
                found: target.kind,
            });
        }
        let fallback = format!("{}({})", m.name(), target.display_name());
        let preferred: Vec<String> = m.yields().map(str::to_owned).into_iter().chain([fallback]).collect();
        let mut n = self.clone();
        let result = match target.kind {
            NodeKind::Class => {
                let t = &self.classes[&target.name];
                n.place_class(modifiers::apply_to_class(m, t)?, &preferred)
            }
            NodeKind::Object => {
                let o = &self.objects[&(target.name.clone(), target.clone_index)];
                let modified = modifiers::apply_to_object(m, o)?;
                let existing = self.objects.values().find(|e| self.dedup && model::members_identical(*e, &modified));
                match existing {
                    Some(e) => NodeRef::of_object(e),
                    None => {
                        let id = preferred
                            .iter()
                            .find(|p| !self.objects.keys().any(|(id, _)| id == *p))
                            .cloned()
                            .unwrap_or_else(|| self.free_object_id(&preferred[preferred.len() - 1]));
                        let o = ObjectInstance::new(
                            id.as_str(),
                            modified.specification().clone(),
                            modified.signature().clone(),
                        )?;
                        Arc::make_mut(&mut n.objects).insert((id.clone(), 0), o);
                        NodeRef::object(id, 0)
                    }
                }
            }
        };
        n.record(target.clone(), result.clone(), RelationKind::ModificationOf);
        Ok((n, result))
    }

    /// Runs an enabled exploiter over network nodes.
    ///
    /// Class operands: union (two or more), intersection, difference and
    /// symmetric difference (exactly two). Object operands: union (two or
    /// more, yielding the object set and its class) and clone (exactly one;
    /// `clone_index` defaults to the next free index). A present result is
    /// placed like a modifier result and linked by operand-of edges from
    /// each operand and result-of edges back to them. An absent result
    /// leaves the network unchanged.
    pub fn apply_exploiter(
        &self,
        op: Exploiter,
        operands: &[NodeRef],
        clone_index: Option<u32>,
    ) -> Result<ExploitOutcome, NetworkError> {
        if !self.exploiters.contains(&op) {
            return Err(NetworkError::ExploiterDisabled(op));
        }
        for r in operands {
            self.check(r)?;
        }
        let kinds: BTreeSet<NodeKind> = operands.iter().map(|r| r.kind).collect();
        let kind_error = || NetworkError::OperandKind {
            op,
            found: kinds.iter().map(|k| k.name()).collect::<Vec<_>>().join(" and "),
        };
        let two = |ops: &[NodeRef]| -> Result<(), NetworkError> {
            if ops.len() == 2 {
                Ok(())
            } else {
                Err(ExploitError::WrongOperandCount { op, expected: 2, got: ops.len() }.into())
            }
        };
        let mut n = self.clone();
        let labels: Vec<String> = operands.iter().map(NodeRef::display_name).collect();
        let label_refs: Vec<&str> = labels.iter().map(String::as_str).collect();
        let derived = format!("{}({})", op.name(), label_refs.join(", "));

        let result = match (op, kinds.iter().copied().collect::<Vec<_>>().as_slice()) {
            (Exploiter::Clone, [NodeKind::Object]) => {
                if operands.len() != 1 {
                    return Err(ExploitError::WrongOperandCount { op, expected: 1, got: operands.len() }.into());
                }
                let o = &self.objects[&(operands[0].name.clone(), operands[0].clone_index)];
                let existing: Vec<ObjectInstance> = self.objects.values().cloned().collect();
                let index = clone_index.unwrap_or_else(|| {
                    (1..).find(|i| !self.objects.contains_key(&(o.id().to_owned(), *i))).expect("unbounded")
                });
                let c = exploiters::clone_object(o, index, &existing)?;
                let node = NodeRef::of_object(&c);
                Arc::make_mut(&mut n.objects).insert((c.id().to_owned(), c.clone_index()), c.clone());
                let result = OperationResult::Present { class: c.induced_class(), objects: Some(vec![c]) };
                return Ok(n.finish(operands, Some(node), result));
            }
            (Exploiter::Union, [NodeKind::Object]) => {
                let objs: Vec<ObjectInstance> =
                    operands.iter().map(|r| self.objects[&(r.name.clone(), r.clone_index)].clone()).collect();
                let (set, result) = exploiters::object_union(&objs)?;
                for o in &set {
                    let key = (o.id().to_owned(), o.clone_index());
                    if !n.objects.contains_key(&key) {
                        Arc::make_mut(&mut n.objects).insert(key, o.clone());
                    }
                }
                if let OperationResult::Present { class, .. } = &result {
                    let node = n.place_class(class.clone(), &[derived]);
                    for o in &set {
                        n.record(NodeRef::of_object(o), node.clone(), RelationKind::InstanceOf);
                    }
                    return Ok(n.finish(operands, Some(node), result));
                }
                result
            }
            (_, [NodeKind::Class]) => {
                let cs: Vec<&ClassDef> = operands.iter().map(|r| &self.classes[&r.name]).collect();
                match op {
                    Exploiter::Union => exploiters::class_union(&cs)?,
                    Exploiter::Intersection => {
                        two(operands)?;
                        exploiters::class_intersection(cs[0], cs[1])?
                    }
                    Exploiter::Difference => {
                        two(operands)?;
                        exploiters::class_difference(cs[0], cs[1])?
                    }
                    Exploiter::SymmetricDifference => {
                        two(operands)?;
                        exploiters::class_symmetric_difference(cs[0], cs[1])?
                    }
                    Exploiter::Clone => return Err(kind_error()),
                }
            }
            (_, []) => return Err(ExploitError::TooFewOperands { op, min: 1, got: 0 }.into()),
            _ => return Err(kind_error()),
        };
        match result {
            OperationResult::Present { ref class, .. } => {
                let node = n.place_class(class.clone(), &[derived]);
                Ok(n.finish(operands, Some(node), result))
            }
            OperationResult::Absent { ref reason } => Ok(ExploitOutcome {
                network: self.clone(),
                node: None,
                absent: Some(AbsentAttempt { op, operands: operands.to_vec(), reason: reason.clone() }),
                result,
            }),
        }
    }

    fn finish(mut self, operands: &[NodeRef], node: Option<NodeRef>, result: OperationResult) -> ExploitOutcome {
        if let Some(node) = &node {
            for r in operands {
                self.record(r.clone(), node.clone(), RelationKind::OperandOf);
                self.record(node.clone(), r.clone(), RelationKind::ResultOf);
            }
        }
        ExploitOutcome { network: self, node, result, absent: None }
    }

    /// Runs a query. Results are sorted by name.
    pub fn query(&self, q: &Query) -> Result<Vec<NodeRef>, NetworkError> {
        let out: BTreeSet<NodeRef> = match q {
            Query::Neighbors { node, kind, direction } => {
                self.check(node)?;
                let fits = |k: &RelationKind| kind.as_ref().is_none_or(|want| want.matches(k));
                self.relations
                    .keys()
                    .filter(|(_, _, k)| fits(k))
                    .filter_map(|(from, to, _)| match direction {
                        Direction::Out if from == node => Some(to.clone()),
                        Direction::In if to == node => Some(from.clone()),
                        Direction::Both if from == node => Some(to.clone()),
                        Direction::Both if to == node => Some(from.clone()),
                        _ => None,
                    })
                    .collect()
            }
            Query::Reachable { node, kind } => {
                self.check(node)?;
                self.closure(node, |k| kind.matches(k), false)
            }
            Query::InstancesOf(class) => {
                self.check(class)?;
                self.relations
                    .keys()
                    .filter(|(_, to, k)| to == class && *k == RelationKind::InstanceOf)
                    .map(|(from, _, _)| from.clone())
                    .collect()
            }
            Query::SubclassesOf(class) => {
                self.check(class)?;
                self.closure(class, RelationKind::is_subsumption, true)
            }
        };
        Ok(out.into_iter().collect())
    }

    fn closure(&self, start: &NodeRef, fits: impl Fn(&RelationKind) -> bool, reverse: bool) -> BTreeSet<NodeRef> {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([start.clone()]);
        while let Some(cur) = queue.pop_front() {
            for (from, to, k) in self.relations.keys() {
                let (src, dst) = if reverse { (to, from) } else { (from, to) };
                if src == &cur && fits(k) && seen.insert(dst.clone()) {
                    queue.push_back(dst.clone());
                }
            }
        }
        seen
    }
}

fn free_name(base: &str, taken: impl Fn(&str) -> bool) -> String {
    if !taken(base) {
        return base.to_owned();
    }
    (2..).map(|i| format!("{base}_{i}")).find(|n| !taken(n)).expect("unbounded")
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ResolveError {
    #[error("no node named `{0}`")]
    NotFound(String),
    #[error("`{0}` names both a class and an object; prefix it with `class:` or `object:`")]
    Ambiguous(String),
}
