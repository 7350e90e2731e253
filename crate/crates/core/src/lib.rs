//! Exact balanced-cut entanglement of antiferromagnetic Ising ground states on
//! small graphs, together with the degeneracy bound and the
//! automorphism-induced (intertwiner rank) bound.

pub mod bounds;
pub mod cli;
pub mod entangle;
pub mod error;
pub mod families;
pub mod graph;
pub mod ground_space;
pub mod perm_group;
pub mod seeding;

pub use error::{Error, Result};
