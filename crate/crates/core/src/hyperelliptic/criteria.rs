//! Vanishing of I(t) = ∫_γ(t) k y dx through the 0-cycle of γ: the exact criterion on
//! K = ∫k, the common-factor test with its numeric identification, and the remark fixture.

use num_complex::Complex64 as C64;
use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use super::quadrature::{circle_integral, integral_i, OvalFamily};
use crate::config::Config;
use crate::cycles::{real_interval_to_coefficients, CycleVector, IntervalSystem};
use crate::error::{Error, Result};
use crate::monodromy::{divisor_lattice, monodromy, DivisorLattice};
use crate::numeric::float_string;
use crate::poly::{right_factors, trace_poly, RatPoly};
use crate::solver::{classify, pullback_outer, z_delta_space, ClassificationReport, FiberSamples};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VanishingVerdict {
    /// K = ∫k with K(0) = 0.
    pub primitive: RatPoly,
    /// Whether ∫_δ(z) K is constant in z.
    pub constant: bool,
    /// The constant value when it is.
    #[serde(with = "opt_rational")]
    pub value: Option<Rational>,
    /// Classification of K - c with Σ v_i (K - c)(x_i) ≡ 0.
    pub certificate: Option<ClassificationReport>,
}

mod opt_rational {
    use rug::Rational;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        r.as_ref().map(Rational::to_string).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| crate::poly::parse_rational(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

/// Decides whether ∫_δ(z) K is constant, i.e. K ∈ Z_δ + C·1, exactly.
pub fn vanishing_criterion(f: &RatPoly, k: &RatPoly, v: &CycleVector, lattice: &DivisorLattice) -> Result<VanishingVerdict> {
    let n = f.deg().filter(|&n| n >= 2).ok_or_else(|| Error::InvalidInput("f must have degree at least 2".into()))?;
    if lattice.degree != n || v.len() != n {
        return Err(Error::InvalidInput("cycle and lattice must match deg f".into()));
    }
    let primitive = k.antiderivative();
    let bound = primitive.deg().unwrap_or(0);
    let z = z_delta_space(v, lattice, bound)?;
    let one = RatPoly::one();
    let shift = if z.contains(&primitive) {
        Some(Rational::new())
    } else if z.contains(&one) {
        None
    } else {
        // K = z + c·1 is read off a functional that kills Z_δ but not 1
        let rows = z.annihilator();
        let coeffs = primitive.to_vec(bound + 1);
        let row = rows.iter().find(|r| r[0] != 0).expect("1 ∉ Z_δ has a separating functional");
        let dot: Rational = row.iter().zip(&coeffs).map(|(a, b)| Rational::from(a * b)).sum();
        let c = dot / &row[0];
        let rest = &primitive - &RatPoly::constant(c.clone());
        z.contains(&rest).then_some(c)
    };
    match shift {
        Some(c) => {
            let value = Rational::from(&c * &v.sum());
            let rest = &primitive - &RatPoly::constant(c);
            let certificate = classify(v, &rest, lattice)?;
            Ok(VanishingVerdict { primitive, constant: true, value: Some(value), certificate: Some(certificate) })
        }
        None => Ok(VanishingVerdict { primitive, constant: false, value: None, certificate: None }),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Evidence {
    /// r = x² with f and K even: x_1 = -x_2 identifies r on the two endpoints.
    Exact,
    /// r(x_1(t)) = r(x_2(t)) at every sampled t.
    Numeric,
    None,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Main3Cycle {
    pub lower: String,
    pub upper: String,
    pub cycle: CycleVector,
    pub constant: bool,
    /// max |Σ v_i K(x_i)| over fibers near the base point, a witness when not constant.
    pub residual: f64,
}

/// The 0-cycle route: decompose γ(t_0) over the real levels and test every piece.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Main3Route {
    pub t0: f64,
    pub cycles: Vec<Main3Cycle>,
    /// I(t) is a rational function of t iff every piece is constant.
    pub constant: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExthReport {
    pub primitive: RatPoly,
    pub candidates: Vec<RatPoly>,
    pub witness: Option<RatPoly>,
    pub evidence: Evidence,
    pub samples: usize,
    /// Largest relative |r(x_1) - r(x_2)| for the witness.
    pub max_gap: Option<f64>,
    pub main3: Main3Route,
    /// Some(true) from a witness, Some(false) when I(t) is not even rational, None otherwise.
    pub vanishes: Option<bool>,
    /// "common-factor" or "main3".
    pub route: String,
}

const EXTH_SAMPLES: usize = 24;
const EXTH_PREC: u32 = 128;
const GAP_TOL: f64 = 1e-25;

fn is_even(p: &RatPoly) -> bool {
    p.coeffs().iter().enumerate().all(|(i, c)| i % 2 == 0 || *c == 0)
}

fn endpoint_gap(family: &OvalFamily, r: &RatPoly, t: f64) -> Result<f64> {
    let (x1, x2) = family.endpoints_hp(t, EXTH_PREC)?;
    let (a, b) = (r.eval_float(&x1), r.eval_float(&x2));
    let diff = Float::with_val(EXTH_PREC, &a - &b).abs().to_f64();
    Ok(diff / (1.0 + a.abs().to_f64()))
}

fn main3_route(family: &OvalFamily, k: &RatPoly, cfg: &Config) -> Result<Main3Route> {
    let f = &family.f;
    let t0 = family.sample_ts(1)[0];
    let (x1, x2) = family.endpoints_hp(t0, cfg.precision_bits.max(EXTH_PREC))?;
    let rep = monodromy(f, cfg)?;
    let lattice = divisor_lattice(&rep, f)?;
    let system = IntervalSystem::single(&float_string(&x1), &float_string(&x2));
    let level_cycles = real_interval_to_coefficients(f, &system, &rep, cfg)?;
    let samples = FiberSamples::new(&rep, cfg)?;
    let primitive = k.antiderivative();
    let mut cycles = Vec::new();
    for lc in level_cycles.into_iter().filter(|lc| !lc.cycle.is_zero()) {
        let verdict = vanishing_criterion(f, k, &lc.cycle, &lattice)?;
        let residual = samples.residual(&lc.cycle, &primitive)?;
        cycles.push(Main3Cycle { lower: lc.lower, upper: lc.upper, cycle: lc.cycle, constant: verdict.constant, residual });
    }
    let constant = cycles.iter().all(|c| c.constant);
    Ok(Main3Route { t0, cycles, constant })
}

/// Looks for a right factor r of f with K ∈ C[r] identifying the oval endpoints, and
/// runs the 0-cycle route independently.
pub fn check_exth(family: &OvalFamily, k: &RatPoly, cfg: &Config) -> Result<ExthReport> {
    family.validate()?;
    let f = &family.f;
    let primitive = k.antiderivative();
    let mut candidates = Vec::new();
    for r in right_factors(f)? {
        if r.deg().is_some_and(|d| d >= 2) && pullback_outer(&primitive, &r)?.is_some() {
            candidates.push(r);
        }
    }
    candidates.sort_by_key(|r| std::cmp::Reverse(r.deg()));

    let ts = family.sample_ts(EXTH_SAMPLES);
    // every sampled t must carry the oval, whatever the candidates
    for &t in &ts {
        family.endpoints_hp(t, EXTH_PREC)?;
    }
    let mut witness = None;
    let mut max_gap = None;
    for r in &candidates {
        let mut worst = 0.0f64;
        for &t in &ts {
            worst = worst.max(endpoint_gap(family, r, t)?);
        }
        if worst < GAP_TOL {
            witness = Some(r.clone());
            max_gap = Some(worst);
            break;
        }
    }
    let evidence = match &witness {
        None => Evidence::None,
        Some(r) if *r == RatPoly::from_ints(&[0, 0, 1]) && is_even(f) && is_even(&primitive) => Evidence::Exact,
        Some(_) => Evidence::Numeric,
    };
    let main3 = main3_route(family, k, cfg)?;
    let (vanishes, route) = if witness.is_some() {
        (Some(true), "common-factor")
    } else if !main3.constant {
        (Some(false), "main3")
    } else {
        (None, "main3")
    };
    Ok(ExthReport {
        primitive,
        candidates,
        witness,
        evidence,
        samples: ts.len(),
        max_gap,
        main3,
        vanishes,
        route: route.into(),
    })
}

/// Numeric I(t) on the symmetric ovals at `count` sampled t.
pub fn oval_values(family: &OvalFamily, k: &RatPoly, count: usize) -> Result<Vec<(f64, f64)>> {
    family.sample_ts(count).into_iter().map(|t| integral_i(family, k, t).map(|v| (t, v))).collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RemarkReport {
    /// Σ x_i(z)² over the fiber of f, as a polynomial in z.
    pub trace: RatPoly,
    pub radius: f64,
    pub ts: Vec<f64>,
    /// I(t) = ∮ x y dx on |x| = radius.
    pub values: Vec<[f64; 2]>,
    pub slope: [f64; 2],
    pub intercept: [f64; 2],
    pub fit_residual: f64,
    /// I'(t) = (1/2) ∮ x dx / y at the same t.
    pub derivatives: Vec<[f64; 2]>,
    pub derivative_spread: f64,
}

/// f = (x²/2 - 1)² and ω = x y dx on the cycle at infinity: the 0-cycle integral is the
/// constant Σ x_i² and I(t) is linear in t.
pub fn remark_fixture() -> Result<RemarkReport> {
    let half = Rational::from((1, 2));
    let f = RatPoly::new(vec![Rational::from(-1), Rational::new(), half]).pow(2);
    let x = RatPoly::x();
    let trace = trace_poly(&x.pow(2), &f)?;
    let radius = 4.0;
    let center = C64::new(0.0, 0.0);
    let ts: Vec<f64> = (0..12).map(|j| -0.9 + 1.8 * j as f64 / 11.0 + 0.013).collect();
    let mut values = Vec::new();
    let mut derivatives = Vec::new();
    for &t in &ts {
        let tc = C64::new(t, 0.0);
        values.push(circle_integral(&f, tc, center, radius, |x, y| x * y)?);
        derivatives.push(0.5 * circle_integral(&f, tc, center, radius, |x, y| x / y)?);
    }
    // least squares line through (t, I(t))
    let m = ts.len() as f64;
    let tm = ts.iter().sum::<f64>() / m;
    let im = values.iter().sum::<C64>() / m;
    let stt: f64 = ts.iter().map(|t| (t - tm) * (t - tm)).sum();
    let sti: C64 = ts.iter().zip(&values).map(|(t, v)| (v - im) * (t - tm)).sum();
    let slope = sti / stt;
    let intercept = im - slope * tm;
    let fit_residual = ts.iter().zip(&values).map(|(t, v)| (v - intercept - slope * t).norm()).fold(0.0, f64::max);
    let dm = derivatives.iter().sum::<C64>() / m;
    let derivative_spread = derivatives.iter().map(|d| (d - dm).norm()).fold(0.0, f64::max);
    let pair = |z: C64| [z.re, z.im];
    Ok(RemarkReport {
        trace,
        radius,
        ts,
        values: values.into_iter().map(pair).collect(),
        slope: pair(slope),
        intercept: pair(intercept),
        fit_residual,
        derivatives: derivatives.into_iter().map(pair).collect(),
        derivative_spread,
    })
}
