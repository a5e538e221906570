//! Local representations of the quantum Teichmüller space of punctured
//! surfaces at a root of unity.
//!
//! The crate builds concrete matrix models from triangulation combinatorics:
//! skew-commuting edge algebras, their finite-dimensional local
//! representations, weight transport under diagonal exchanges, the
//! intertwining operators relating representations across flips, and the
//! pleated-surface holonomy realizing the classical shadow.  The `qteich`
//! binary exposes the same operations as a deterministic command-line tool.

pub mod cli;
pub mod error;
pub mod fixtures;
pub mod holonomy;
pub mod intertwine;
pub mod json;
pub mod linalg;
pub mod qalgebra;
pub mod rep;
pub mod surface;
pub mod transport;

pub use error::{Error, Result};
