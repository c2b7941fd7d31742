//! Exact arithmetic over ℚ and ℚ(ω) and the sparse linear algebra used by
//! every other module.

mod matrix;
mod scalar;

pub use matrix::{in_span, quotient_basis, rank, Matrix, RowSpace, Vector};
pub use scalar::Scalar;
