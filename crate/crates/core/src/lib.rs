//! Exact lattice arithmetic for intersection forms of closed oriented
//! 4-manifolds, homological actions of twists and reflections, and
//! Nielsen-realization obstruction checks.

pub mod action;
pub mod classify;
pub mod degtyarev;
pub mod error;
pub mod lattice;
pub mod linalg;
pub mod manifold;
pub mod obstruction;
pub mod scenario;
pub mod suite;

pub use error::{Error, Result};
