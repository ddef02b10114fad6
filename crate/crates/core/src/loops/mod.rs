//! Loop-equation hierarchy for the Gaussian potential.

pub mod canonical;
pub mod laurent;
pub mod potential;
pub mod ring;
pub mod solver;

pub use canonical::canonical_check;
pub use laurent::{HPoly, LaurentCorrelator};
pub use potential::Potential;
pub use ring::LoopRing;
pub use solver::{
    dependencies, known_part, loop_residual, resolvent_expansion, resolvent_from_store, solve_base,
    solve_order, DependencyEdge, Hierarchy, HierarchyStore, LaurentHierarchy, Slot, ZHierarchy,
};
