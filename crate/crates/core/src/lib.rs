//! Alternating surgery analysis via changemaker lattices.
//!
//! The pipeline runs from a symmetrized Alexander polynomial to stable
//! coefficients, builds the relevant changemaker lattices, searches them
//! for obtuse superbases and classifies the set of alternating slopes.

pub mod alexpoly;
pub mod changemaker;
pub mod classify;
pub mod corpus;
pub mod error;
pub mod goeritz;
pub mod lattice;
pub mod linalg;
pub mod osb_search;
pub mod voronoi;

pub use error::{Error, Result};
