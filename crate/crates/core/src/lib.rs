//! Statistical-learning workbench around margin classifiers: empirical risk
//! minimization for affine and lifted polynomial separators, closed-form
//! generalization bounds with numeric sample-complexity inversion, a
//! two-Gaussian laboratory with the exact optimal quadratic decision
//! surface, rate and error-decomposition experiment harnesses, and the
//! tumor-dataset comparison pipeline.
//!
//! Everything randomized is driven by explicit `u64` seeds through one
//! documented generator ([`seed`]), so every experiment is reproducible
//! bit for bit.

pub mod bounds;
pub mod config;
pub mod data;
pub mod error;
pub mod experiments;
pub mod gaussian;
pub mod model;
pub mod seed;
pub mod solver;

pub use error::{Error, Result};
