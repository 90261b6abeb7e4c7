//! Object-oriented dynamic networks.
//!
//! Objects and classes are described by their properties and methods.
//! Classes combine through union, intersection, difference and symmetric
//! difference (yielding inhomogeneous classes with a core and projections),
//! objects can be cloned, and modifiers turn one concept into another. A
//! [`Network`](network::Network) holds all of it as a directed graph whose
//! structural relations can be inferred.

pub mod exploiters;
pub mod expr;
pub mod fixtures;
pub mod io;
pub mod model;
pub mod modifiers;
pub mod network;
#[cfg(feature = "testing")]
pub mod testing;

pub use exploiters::OperationResult;
pub use expr::Expr;
pub use model::{ClassDef, Core, Method, ObjectInstance, Projection, Property, Quantity, Signature, Specification};
pub use modifiers::{ModificationFunction, Modifier, ModifierKind, TargetKind};
pub use network::{Network, NodeKind, NodeRef, Relation, RelationKind};
