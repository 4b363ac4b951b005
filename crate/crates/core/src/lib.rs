//! Information-theoretic generalization bounds for deep networks.
//!
//! The crate evaluates mutual-information generalization bounds whose
//! feature term is tightened by strong data processing inequality (SDPI)
//! contraction coefficients of regularized layers (Dropout, DropConnect,
//! Gaussian noise injection), and it simulates a binary Gaussian-mixture
//! classification problem with linear networks where the hierarchical KL
//! and Wasserstein bounds have closed forms.
//!
//! Modules:
//!
//! - [`numerics`]: matrices, norms, numerical rank, the Gaussian Q function,
//!   Gauss-Hermite quadrature and the seeded RNG.
//! - [`sdpi`]: analytic contraction coefficients plus brute-force oracles on
//!   finite channels.
//! - [`bounds`]: closed-form bound evaluators.
//! - [`casestudy`]: the Gaussian-mixture simulator, bound profiles, the
//!   funnel-layer experiment and Monte-Carlo generalization error.
//! - [`experiment`]: config-driven runners and CSV/JSON reports used by the
//!   `infobound` binary.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod casestudy;
mod error;
pub mod experiment;
pub mod network;
pub mod numerics;
pub mod sdpi;

pub use error::{Error, Result};
pub use network::{LayerRegularization, NetworkSpec};
pub use numerics::{MatrixR, SeededRng, WeightStack};
