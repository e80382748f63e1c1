//! Finite element solver for the Ericksen model of nematic liquid crystals.
//!
//! The director `n` and the degree of orientation `s` are discretized with
//! continuous piecewise affine elements on simplicial meshes. Discrete local
//! minimizers of the one-constant Ericksen energy are computed with an
//! alternating gradient flow: tangential director updates without nodal
//! projection, followed by an implicit step for `s` with a convex splitting
//! of the double-well potential.
//!
//! Runnable programs covering each capability live in `examples/`:
//!
//! ```bash
//! cargo run --release --example point_defect_2d
//! cargo run --release --example plane_defect_3d
//! ```
//!
//! The `ericksen` binary wraps [`cli`] for batch runs and parameter sweeps.

// negated comparisons deliberately reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod fem;
pub mod flow;
pub mod linalg;
pub mod mesh;
pub mod model;
pub mod postio;

pub use error::{Error, Result};
pub use fem::{FeSpace, ScalarField, VectorField};
pub use flow::{FlowConfig, GradientFlow, Metric};
pub use linalg::CsrMatrix;
pub use mesh::SimplicialMesh;
pub use model::{DirichletData, DoubleWell, EricksenState};
