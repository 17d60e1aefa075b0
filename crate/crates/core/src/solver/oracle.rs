//! Numeric check of Σ v_i Q(x_i(z)) ≡ 0 on labeled fibers near the base point.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Complex, Float};
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::cycles::CycleVector;
use crate::error::{Error, Result};
use crate::monodromy::{transport, MonodromyRep};
use crate::numeric::{abs_f64, dist, unit};
use crate::poly::RatPoly;

/// Labeled fibers over random points in a disc around the base point that avoids
/// every critical value; each fiber is reached by a straight segment.
#[derive(Clone, Debug)]
pub struct FiberSamples {
    pub points: Vec<Complex>,
    pub fibers: Vec<Vec<Complex>>,
}

impl FiberSamples {
    pub fn new(rep: &MonodromyRep, cfg: &Config) -> Result<Self> {
        let prec = rep.precision_bits.max(cfg.precision_bits);
        let cfg = cfg.with_precision(prec);
        let nearest = rep
            .critical_values
            .iter()
            .map(|c| dist(c, &rep.base_point))
            .fold(f64::INFINITY, f64::min);
        let radius = if nearest.is_finite() { 0.5 * nearest } else { 1.0 };
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut points = Vec::with_capacity(cfg.samples);
        let mut fibers = Vec::with_capacity(cfg.samples);
        for _ in 0..cfg.samples {
            let r = radius * rng.gen_range(0.1..0.95);
            let theta = Float::with_val(prec, rng.gen_range(0.0..std::f64::consts::TAU));
            let z = Complex::with_val(prec, &rep.base_point + unit(prec, &theta) * Float::with_val(prec, r));
            let fiber = transport(rep, &[rep.base_point.clone(), z.clone()], &cfg)?;
            points.push(z);
            fibers.push(fiber);
        }
        Ok(FiberSamples { points, fibers })
    }

    /// max over samples of |Σ v_i Q(x_i)|.
    pub fn residual(&self, v: &CycleVector, q: &RatPoly) -> Result<f64> {
        let mut worst = 0.0f64;
        for fiber in &self.fibers {
            if fiber.len() != v.len() {
                return Err(Error::InvalidInput("cycle length differs from the fiber size".into()));
            }
            let prec = fiber.first().map_or(64, |x| x.prec().0);
            let mut acc = Complex::new(prec);
            for (x, vi) in fiber.iter().zip(v.entries()) {
                if *vi != 0 {
                    acc += q.eval_complex(x) * Float::with_val(prec, vi);
                }
            }
            worst = worst.max(abs_f64(&acc));
        }
        Ok(worst)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OracleReport {
    pub vanishes: bool,
    pub residual: f64,
    pub tolerance: f64,
    pub samples: usize,
}

pub fn verify_vanishing_numeric(
    v: &CycleVector,
    q: &RatPoly,
    rep: &MonodromyRep,
    cfg: &Config,
) -> Result<OracleReport> {
    let samples = FiberSamples::new(rep, cfg)?;
    let residual = samples.residual(v, q)?;
    let tolerance = cfg.oracle_tolerance();
    Ok(OracleReport { vanishes: residual < tolerance, residual, tolerance, samples: samples.points.len() })
}
