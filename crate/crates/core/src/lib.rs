//! Exact decision procedures for the vanishing of zero-dimensional Abelian
//! integrals Σ n_i Q(x_i(z)) along roots of P(x) = z, and their use for
//! hyperelliptic integrals over ovals of y² - f(x) = t.

pub mod config;
pub mod cycles;
pub mod error;
pub mod hyperelliptic;
pub mod invariant;
pub mod linalg;
pub mod monodromy;
pub mod numeric;
pub mod poly;
pub mod solver;

pub use config::Config;
pub use error::{Error, Result};
