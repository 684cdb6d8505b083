//! Exact-arithmetic machinery for graded quiver algebras `kQ/I`.
//!
//! Given a presentation of a graded algebra by a quiver and homogeneous
//! relations, this crate computes, over the rationals or a prime field:
//!
//! - the generator data of the minimal graded right resolution of the
//!   degree-zero part, together with its differential coefficients,
//! - the comultiplicative constants splitting each generator into products
//!   of lower-level generators,
//! - the induced minimal resolution on the left side,
//! - the minimal projective bimodule resolution over the enveloping
//!   algebra, with symbolic verification that its differential squares to
//!   zero and recovers both one-sided resolutions,
//! - a Koszulity certificate up to a chosen homological level and internal
//!   degree, or an explicit witness of failure.
//!
//! All scalar arithmetic is exact and all bases are canonical (reduced row
//! echelon form with a fixed pivot rule), so repeated runs are
//! bit-identical.

pub mod bimodule;
pub mod cli;
pub mod comult;
pub mod error;
pub mod linalg;
pub mod presentation;
pub mod quiver;
pub mod quotient;
pub mod report;
pub mod resolution;
pub mod scalar;

pub use error::Error;
pub use presentation::{
    parse_presentation, validate_presentation, Diagnostic, Presentation, Severity,
};
pub use quiver::{enumerate_paths, Arrow, Path, PathVector, Quiver, UniformBlock};
pub use resolution::{certify_koszul_up_to, compute_resolution, KoszulVerdict, ResolutionData};
pub use scalar::{FieldSpec, Scalar};

/// Default cap on the number of paths of any single degree the engines will
/// materialize before giving up with a resource-limit error.
pub const DEFAULT_SIZE_LIMIT: usize = 50_000;
