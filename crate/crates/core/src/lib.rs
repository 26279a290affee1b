//! F^α-calculus on fractal curves embedded in R³ and Schrödinger evolution in
//! staircase coordinates.
//!
//! The staircase function `S(v)` of a curve serves as its coordinate chart:
//! derivatives, integrals and the Laplacian are taken with respect to `S`,
//! and the Schrödinger equation on the curve becomes the ordinary one in
//! `ξ = S(v)`, `τ = S(t)`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calculus;
pub mod curve;
pub mod error;
pub mod flow;
pub mod io;
pub mod measure;
pub mod quantum;
pub mod special;

pub use calculus::{FieldOnCurve, Scalar, VectorFieldOnCurve};
pub use curve::{CurveGrid, GeneratorSpec, TimeSet};
pub use error::{Error, Result};
pub use measure::{DimensionEstimate, PreMeasureResult, Staircase};
pub use quantum::{PhysicalConstants, PotentialOnCurve, WaveFunction};

pub use num_complex::Complex64;
