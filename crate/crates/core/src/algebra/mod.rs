//! Exact arithmetic substrate: rationals, polynomials, rational functions,
//! truncated series and dense matrices.

pub mod matrix;
pub mod poly;
pub mod ratfunc;
pub mod rational;
pub mod series;

pub use matrix::{cofactor, det_exact, kernel_basis, rank, IntMatrix, Matrix, RatMatrix};
pub use poly::{IntPoly, Poly, RatPoly};
pub use ratfunc::{parse_poly, ParseExprError, RatFunc};
pub use rational::{den, format_rational, parse_rational, Integer, ParseRationalError, Rational};
pub use series::RatSeries;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("index ({row}, {col}) out of range for a {size}x{size} matrix")]
    IndexOutOfRange { row: usize, col: usize, size: usize },
}
