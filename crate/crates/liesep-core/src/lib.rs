//! Lie-algebraic second-order operators in three variables: construction from
//! a realization, induced metrics and their curvature, degeneracy analysis,
//! gauge reduction to Schrödinger form, and separability tests.

pub mod degeneracy;
pub mod error;
pub mod examples_builtin;
pub mod gauge;
pub mod geometry;
pub mod operators;
pub mod separability;
pub mod symcore;

pub use error::{Error, Result};
