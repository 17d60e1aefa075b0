use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numeric knobs shared by every module.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub precision_bits: u32,
    /// Largest tracking step as a fraction of a path segment.
    pub track_step: f64,
    /// Relative distance below which two tracked roots count as collided.
    pub collision_tol: f64,
    /// Residual threshold of the numeric oracle; `None` means 2^(-precision/4).
    pub oracle_tol: Option<f64>,
    /// Degree bound for solution spaces; `None` means twice the degree of P.
    pub degree_bound: Option<usize>,
    pub samples: usize,
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            precision_bits: 128,
            track_step: 1.0 / 32.0,
            collision_tol: (2.0f64).powi(-40),
            oracle_tol: None,
            degree_bound: None,
            samples: 8,
            seed: 0x5eed,
        }
    }
}

impl Config {
    pub fn validate(&self) -> Result<()> {
        if self.precision_bits < 64 {
            return Err(Error::InvalidInput(format!(
                "precision_bits must be at least 64, got {}",
                self.precision_bits
            )));
        }
        if !(self.track_step > 0.0 && self.track_step <= 1.0) {
            return Err(Error::InvalidInput(format!(
                "track_step must lie in (0, 1], got {}",
                self.track_step
            )));
        }
        if !(self.collision_tol > 0.0 && self.collision_tol < 1.0) {
            return Err(Error::InvalidInput(format!(
                "collision_tol must lie in (0, 1), got {}",
                self.collision_tol
            )));
        }
        if let Some(t) = self.oracle_tol {
            if !(t > 0.0) {
                return Err(Error::InvalidInput(format!("oracle_tol must be positive, got {t}")));
            }
        }
        if self.samples == 0 {
            return Err(Error::InvalidInput("samples must be positive".into()));
        }
        Ok(())
    }

    pub fn oracle_tolerance(&self) -> f64 {
        self.oracle_tol
            .unwrap_or_else(|| (2.0f64).powf(-(self.precision_bits as f64) / 4.0))
    }

    pub fn bound_for(&self, degree: usize) -> usize {
        self.degree_bound.unwrap_or(2 * degree)
    }

    pub fn with_precision(&self, bits: u32) -> Config {
        Config { precision_bits: bits, ..self.clone() }
    }
}
