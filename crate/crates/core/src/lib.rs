//! Fiber graphs of circle-valued Morse maps on 3-manifolds.
//!
//! A [`MorseGraph`] records the critical levels of a circle-valued Morse map
//! and the fiber pieces between them. On top of it the crate computes
//! harmonicity (marked points, repeller trees, loop integrals), the vertical
//! norm and its lower bounds, curve-system resolution, the surgery moves and
//! the tangency index checks.

pub mod angle;
pub mod curves;
pub mod dot;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod graph;
pub mod harmonic;
pub mod lattice;
pub mod moves;
pub mod random;
mod scc;
pub mod tangency;
pub mod vertical;

pub use angle::{Angle, Rational};
pub use curves::{CurveKind, CurveSystem};
pub use error::{Error, Result};
pub use graph::{chi_minus, Edge, MorseGraph, Vertex, VertexKind};
pub use harmonic::MarkKind;
pub use vertical::VerticalClass;
