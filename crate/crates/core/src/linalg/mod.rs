//! Sparse symmetric linear algebra.

mod cg;
mod csr;
mod tangent;

pub use cg::{cg_solve, pcg, CgOutcome, CgSettings, LinearOperator};
pub use csr::CsrMatrix;
pub use tangent::{reduced_solve, ReducedOperator, TangentBasis};

pub(crate) use csr::dot;
