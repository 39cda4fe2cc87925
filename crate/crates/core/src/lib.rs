//! Exact Lie-algebra invariants (trace forms, Chevalley–Eilenberg cohomology)
//! and finite-difference geometry of frame fields, jets and local groups.

// `!(x <= tol)` rejects NaN residuals, which plain `x > tol` would let through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra_file;
pub mod catalog;
pub mod chart;
pub mod cohomology;
pub mod error;
pub mod exact;
pub mod forms;
pub mod geometry;
pub mod jet;
pub mod lie;
pub mod rational;
pub mod report;
pub mod sampling;
pub mod verify;

pub use algebra_file::{parse_algebra, serialize, AlgebraFile};
pub use catalog::{CatalogEntry, EntryKind, Payload};
pub use chart::{Chart, MatrixField, ScalarField, VectorField};
pub use cohomology::{betti, betti_table, is_closed, is_exact, ClassStatus, Exactness};
pub use error::{Error, Result};
pub use exact::QMatrix;
pub use forms::{trace_form, AlternatingForm};
pub use geometry::{FrameDiagnostics, FrameField, GroupElement, LocalGroupMultiplication, Tensor};
pub use jet::{Form1J1T, J1TSection};
pub use lie::{LieAlgebra, LinearOperator, Signature, ValidationReport};
pub use rational::Rational;
