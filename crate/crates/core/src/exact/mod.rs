//! Exact arithmetic substrate: rationals, dense polynomials, truncated
//! series, rational-function matrices, rational-endpoint intervals and
//! products of real powers.

pub mod interval;
pub mod matrix;
pub mod poly;
pub mod power;
pub mod rational;
pub mod series;

pub use interval::{interval_refine, CertifiedReal, IntervalReal};
pub use matrix::{PolyMatrix, RatFun, RatFunMatrix};
pub use poly::{poly_height, product_height_bound, Poly};
pub use power::PowerProduct;
pub use rational::{lcm_range, Rational};
pub use series::SeriesTrunc;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("{0}")]
    Domain(String),
    #[error("no convergent tail bound")]
    NoTailBound,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal error: {0}")]
    Internal(String),
}
