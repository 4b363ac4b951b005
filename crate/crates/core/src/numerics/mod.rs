//! Deterministic numerical substrate shared by the bound evaluators and
//! the case-study simulator.

mod matrix;
mod quadrature;
mod rng;
mod special;

pub use matrix::{
    frobenius_norm, numerical_rank, operator_norm, weight_products, MatrixR, WeightStack,
    DEFAULT_RANK_TOL,
};
pub use quadrature::GaussHermite;
pub use rng::SeededRng;
pub use special::q_function;
