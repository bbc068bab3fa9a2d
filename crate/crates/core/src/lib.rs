//! Steiner triple systems and the poems built on them.
//!
//! [`design`] constructs, verifies and resolves triple systems, [`graph`]
//! views them as triangle decompositions of complete graphs, and [`poem`]
//! parses and validates poems whose lines realize the triples.

pub mod design;
pub mod error;
pub mod graph;
pub mod interchange;
pub mod poem;
