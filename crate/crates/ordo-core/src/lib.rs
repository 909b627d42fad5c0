//! Degree-bounded vertex orderings and family-constrained arc partitions of
//! loop-free multidigraphs, with exhaustive oracles, hardness-gadget
//! builders and independent certificate checking.

pub mod applications;
pub mod bounded;
pub mod certify;
pub mod digraph;
pub mod ext;
pub mod family;
pub mod gen;
pub mod oracle;
pub mod reductions;
pub mod simultaneous;
pub mod solution;
mod sweep;

pub use digraph::{
    classify_arc_set, degree_profile, induced_min_outdegree, is_acyclic, topological_order, Arc,
    ArcFamilyKind, CycleWitness, DegreeProfile, Digraph, DigraphError, VertexOrder,
};
pub use ext::ExtendedValue;
pub use solution::{ArcPartition, BoundSpec, SolveError, SolveResult, Witness};
