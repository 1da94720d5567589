//! Pairwise balanced designs with a guaranteed lower bound on dimension.
//!
//! The crate builds designs from finite geometries and classical triple
//! systems, composes them with dimension-preserving constructions (block
//! breaking, Wilson's fundamental construction, truncation, point deletion
//! and addition), and certifies every result exactly: pair coverage by
//! exhaustive count, dimension by closure search.

pub mod algebra;
pub mod cli;
pub mod closure;
pub mod constructions;
pub mod designs;
pub mod format;
pub mod pipeline;
