//! Numeric integrals on y² = f(x) + t: ovals by the sin² substitution, closed contours on
//! one sheet by the periodic trapezoid rule, and the Cauchy integral J_t(z).

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rug::{Complex, Rational};
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::cycles::VanishingCycleCombo;
use crate::error::{Error, Result};
use crate::numeric::{fiber, to_c64};
use crate::poly::RatPoly;

const QUAD_TOL: f64 = 1e-14;
const MAX_NODES: usize = 1 << 18;

/// Real ovals of y² - f(x) = t over [x_1(t), x_2(t)], the pair of adjacent real roots of
/// f + t with index `pair_index` in increasing order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OvalFamily {
    pub f: RatPoly,
    pub pair_index: usize,
    #[serde(with = "crate::poly::rational_string")]
    pub t_min: Rational,
    #[serde(with = "crate::poly::rational_string")]
    pub t_max: Rational,
}

impl OvalFamily {
    pub fn validate(&self) -> Result<()> {
        if self.f.deg().is_none_or(|d| d < 2) {
            return Err(Error::InvalidInput("oval family needs deg f ≥ 2".into()));
        }
        if self.t_min >= self.t_max {
            return Err(Error::InvalidInput("empty t range".into()));
        }
        Ok(())
    }

    /// `count` evenly spaced interior points of the t range.
    pub fn sample_ts(&self, count: usize) -> Vec<f64> {
        let (a, b) = (self.t_min.to_f64(), self.t_max.to_f64());
        (0..count).map(|j| a + (b - a) * (j as f64 + 0.5) / count as f64).collect()
    }

    /// Real roots of f + t, increasing.
    pub fn real_roots(&self, t: f64, prec: u32) -> Result<Vec<rug::Float>> {
        let z = Complex::with_val(prec, (-Rational::from_f64(t).ok_or_else(|| Error::InvalidInput("t is not finite".into()))?, 0));
        let roots = fiber(&self.f, &z, prec)?;
        let mut real: Vec<rug::Float> = roots
            .into_iter()
            .filter(|r| r.imag().clone().abs().to_f64() < 1e-20 * (1.0 + r.real().clone().abs().to_f64()))
            .map(|r| r.real().clone())
            .collect();
        real.sort_by(|a, b| a.partial_cmp(b).expect("finite roots"));
        Ok(real)
    }

    pub fn endpoints_hp(&self, t: f64, prec: u32) -> Result<(rug::Float, rug::Float)> {
        let roots = self.real_roots(t, prec)?;
        if self.pair_index + 1 >= roots.len() {
            return Err(Error::Family(format!("f + t has {} real roots at t = {t}", roots.len())));
        }
        let (x1, x2) = (roots[self.pair_index].clone(), roots[self.pair_index + 1].clone());
        let mid = 0.5 * (x1.to_f64() + x2.to_f64());
        if self.f.eval_f64(mid) + t <= 0.0 {
            return Err(Error::Family(format!("f + t is not positive between the selected roots at t = {t}")));
        }
        Ok((x1, x2))
    }

    pub fn endpoints(&self, t: f64) -> Result<(f64, f64)> {
        let (a, b) = self.endpoints_hp(t, 128)?;
        Ok((a.to_f64(), b.to_f64()))
    }

    /// g with f + t = (x - x_1)(x_2 - x) g, little-endian f64 coefficients.
    fn cofactor(&self, t: f64, x1: f64, x2: f64) -> Vec<f64> {
        let mut c: Vec<f64> = self.f.coeffs().iter().map(Rational::to_f64).collect();
        c[0] += t;
        let g = deflate(&deflate(&c, x1), x2);
        g.into_iter().map(|v| -v).collect()
    }

    /// Roots of f + t other than the oval endpoints.
    fn other_roots(&self, t: f64, x1: f64, x2: f64) -> Result<Vec<C64>> {
        let z = Complex::with_val(128, (-Rational::from_f64(t).expect("finite"), 0));
        let mut roots: Vec<C64> = fiber(&self.f, &z, 128)?.iter().map(to_c64).collect();
        for e in [x1, x2] {
            let (k, _) = roots
                .iter()
                .enumerate()
                .map(|(k, r)| (k, (r - e).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .expect("nonempty");
            roots.swap_remove(k);
        }
        Ok(roots)
    }
}

fn deflate(c: &[f64], root: f64) -> Vec<f64> {
    let n = c.len() - 1;
    let mut out = vec![0.0; n];
    let mut acc = 0.0;
    for k in (1..=n).rev() {
        acc = c[k] + root * acc;
        out[k - 1] = acc;
    }
    out
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, v| acc * x + v)
}

fn horner_c(c: &[f64], x: C64) -> C64 {
    c.iter().rev().fold(C64::new(0.0, 0.0), |acc, v| acc * x + v)
}

/// Periodic trapezoid rule on [0, period), doubling until two rules agree.
fn periodic_trapezoid<F: Fn(f64) -> Result<C64>>(period: f64, start: usize, integrand: F) -> Result<C64> {
    let eval = |n: usize| -> Result<(C64, f64)> {
        let h = period / n as f64;
        let mut sum = C64::new(0.0, 0.0);
        let mut mag = 0.0;
        for j in 0..n {
            let v = integrand(j as f64 * h)?;
            sum += v;
            mag += v.norm();
        }
        Ok((sum * h, mag * h))
    };
    let mut n = start;
    let (mut prev, _) = eval(n)?;
    while n < MAX_NODES {
        n *= 2;
        let (cur, mag) = eval(n)?;
        if (cur - prev).norm() <= QUAD_TOL * mag.max(1e-300) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::Quadrature(format!("trapezoid rule did not settle with {MAX_NODES} nodes")))
}

/// I(t) = 2 ∫ k(x) √(f + t) dx over [x_1, x_2], with x = x_1 + L sin²φ.
pub fn integral_i(family: &OvalFamily, k: &RatPoly, t: f64) -> Result<f64> {
    let (x1, x2) = family.endpoints(t)?;
    let g = family.cofactor(t, x1, x2);
    let len = x2 - x1;
    let v = periodic_trapezoid(PI, 16, |phi| {
        let (s, c) = phi.sin_cos();
        let x = x1 + len * s * s;
        let gx = horner(&g, x);
        if gx <= 0.0 {
            return Err(Error::Family("cofactor of the oval is not positive".into()));
        }
        Ok(C64::new(k.eval_f64(x) * s * s * c * c * gx.sqrt(), 0.0))
    })?;
    Ok(2.0 * len * len * v.re)
}

/// I'(t) = (1/2) ∫_γ k dx / y = ∫_0^π k(x) / √g(x) dφ.
pub fn integral_i_derivative(family: &OvalFamily, k: &RatPoly, t: f64) -> Result<f64> {
    let (x1, x2) = family.endpoints(t)?;
    let g = family.cofactor(t, x1, x2);
    let len = x2 - x1;
    let v = periodic_trapezoid(PI, 16, |phi| {
        let s = phi.sin();
        let x = x1 + len * s * s;
        let gx = horner(&g, x);
        if gx <= 0.0 {
            return Err(Error::Family("cofactor of the oval is not positive".into()));
        }
        Ok(C64::new(k.eval_f64(x) / gx.sqrt(), 0.0))
    })?;
    Ok(v.re)
}

fn continue_sqrt(prev: Option<C64>, w: C64) -> C64 {
    let s = w.sqrt();
    match prev {
        Some(p) if (s - p).norm() > (s + p).norm() => -s,
        _ => s,
    }
}

/// A closed loop θ ↦ x(θ), θ ∈ [0, 2π), on which y = factor(θ)·√radicand(x) is
/// continued node by node from the principal value at θ = 0.
struct LiftedLoop<'a> {
    point: &'a dyn Fn(f64) -> (C64, C64),
    radicand: &'a dyn Fn(C64) -> C64,
    factor: &'a dyn Fn(f64) -> C64,
}

impl LiftedLoop<'_> {
    fn sum<H: Fn(C64, C64) -> C64>(&self, n: usize, h: &H) -> Result<(C64, f64)> {
        let step = 2.0 * PI / n as f64;
        let mut root: Option<C64> = None;
        let mut first = C64::new(0.0, 0.0);
        let mut sum = C64::new(0.0, 0.0);
        let mut mag = 0.0;
        for j in 0..=n {
            let theta = j as f64 * step;
            let (x, dx) = (self.point)(theta);
            let r = continue_sqrt(root, (self.radicand)(x));
            root = Some(r);
            if j == 0 {
                first = r;
            }
            if j == n {
                if (r - first).norm() > 1e-6 * first.norm().max(1e-300) {
                    return Err(Error::Regime("the square root changes sheet around the contour".into()));
                }
                break;
            }
            let v = h(x, (self.factor)(theta) * r) * dx;
            sum += v;
            mag += v.norm();
        }
        Ok((sum * step, mag * step))
    }

    fn integrate<H: Fn(C64, C64) -> C64>(&self, h: H) -> Result<C64> {
        let mut n = 256;
        let (mut prev, _) = self.sum(n, &h)?;
        while n < MAX_NODES {
            n *= 2;
            let (cur, mag) = self.sum(n, &h)?;
            if (cur - prev).norm() <= QUAD_TOL * mag.max(1e-300) {
                return Ok(cur);
            }
            prev = cur;
        }
        Err(Error::Quadrature(format!("contour rule did not settle with {MAX_NODES} nodes")))
    }
}

/// Ellipse with foci x_1, x_2 enclosing no other root of f + t. On it
/// y = (L/2) sin(θ + iη) √g(x) with √g positive on the segment.
struct OvalContour {
    mid: f64,
    half: f64,
    eta: f64,
    g: Vec<f64>,
}

impl OvalContour {
    fn new(family: &OvalFamily, t: f64) -> Result<Self> {
        let (x1, x2) = family.endpoints(t)?;
        let mid = 0.5 * (x1 + x2);
        let half = 0.5 * (x2 - x1);
        let others = family.other_roots(t, x1, x2)?;
        let eta = others
            .iter()
            .map(|r| ellipse_parameter(mid, half, *r))
            .fold(2.0f64, f64::min)
            * 0.5;
        Ok(OvalContour { mid, half, eta, g: family.cofactor(t, x1, x2) })
    }

    /// ∫_γ(t) h(x, y) dx; the ellipse is run against θ so that its upper half goes from x_1 to x_2.
    fn integrate<H: Fn(C64, C64) -> C64>(&self, h: H) -> Result<C64> {
        let w = |theta: f64| C64::new(theta, self.eta);
        let point = |theta: f64| (self.mid + self.half * w(theta).cos(), -self.half * w(theta).sin());
        let radicand = |x: C64| horner_c(&self.g, x);
        let factor = |theta: f64| self.half * w(theta).sin();
        let lp = LiftedLoop { point: &point, radicand: &radicand, factor: &factor };
        Ok(-lp.integrate(h)?)
    }

    fn parameter_of(&self, p: C64) -> f64 {
        ellipse_parameter(self.mid, self.half, p)
    }
}

/// η with p on the ellipse x = m + h cos(θ + iη).
fn ellipse_parameter(mid: f64, half: f64, p: C64) -> f64 {
    ((p - mid) / half).acosh().re.abs()
}

/// Independent contour evaluation of I(t).
pub fn integral_i_contour(family: &OvalFamily, k: &RatPoly, t: f64) -> Result<f64> {
    let contour = OvalContour::new(family, t)?;
    Ok(contour.integrate(|x, y| k.eval_c64(x) * y)?.re)
}

/// ∫_γ(t) P dx + Q dy with dy = f'(x) dx / (2y) on the curve.
pub fn form_integral(family: &OvalFamily, t: f64, omega: &super::OneForm) -> Result<f64> {
    let contour = OvalContour::new(family, t)?;
    let fp = family.f.derivative();
    let p = omega.p();
    let q = omega.q();
    let eval = |b: &super::Bivariate, x: C64, y: C64| -> C64 {
        b.iter().map(|(&(i, j), c)| c.to_f64() * x.powu(i as u32) * y.powu(j as u32)).sum()
    };
    Ok(contour.integrate(|x, y| eval(&p, x, y) + eval(&q, x, y) * fp.eval_c64(x) / (2.0 * y))?.re)
}

/// J_t(z) = ∫_γ(t) k y / (y² - z) dx for z near 0.
pub fn cauchy_j(family: &OvalFamily, k: &RatPoly, t: f64, z: C64) -> Result<C64> {
    let contour = OvalContour::new(family, t)?;
    if z.norm() > 0.0 {
        let zc = Complex::with_val(128, (z.re - t, z.im));
        let poles: Vec<C64> = fiber(&family.f, &zc, 128)?.iter().map(to_c64).collect();
        let mut inside = 0;
        for p in poles {
            let eta = contour.parameter_of(p);
            if (eta - contour.eta).abs() < 0.2 * contour.eta {
                return Err(Error::PoleProximity(format!("pole at {p} lies near the contour")));
            }
            if eta < contour.eta {
                inside += 1;
            }
        }
        if inside != 2 {
            return Err(Error::PoleProximity(format!("{inside} poles inside the contour, expected 2")));
        }
    }
    contour.integrate(|x, y| k.eval_c64(x) * y / (y * y - z))
}

/// J_t^{(m)}(0) for m = 0..=order from Cauchy's formula on |z| = radius.
pub fn cauchy_j_derivatives(family: &OvalFamily, k: &RatPoly, t: f64, order: usize, radius: f64) -> Result<Vec<C64>> {
    let nodes = 32;
    let values: Vec<(C64, C64)> = (0..nodes)
        .map(|j| {
            let u = C64::from_polar(1.0, 2.0 * PI * j as f64 / nodes as f64);
            cauchy_j(family, k, t, u * radius).map(|v| (u, v))
        })
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(order + 1);
    let mut factorial = 1.0;
    for m in 0..=order {
        if m > 0 {
            factorial *= m as f64;
        }
        let mean: C64 = values.iter().map(|(u, v)| v * u.powi(-(m as i32))).sum::<C64>() / nodes as f64;
        out.push(mean * factorial / radius.powi(m as i32));
    }
    Ok(out)
}

/// ∮ h(x, y) dx counterclockwise over |x - center| = radius with y = √(f + t)
/// continued from the principal value at angle 0.
pub fn circle_integral<H: Fn(C64, C64) -> C64>(f: &RatPoly, t: C64, center: C64, radius: f64, h: H) -> Result<C64> {
    let point = |theta: f64| {
        let e = C64::from_polar(1.0, theta);
        (center + e * radius, C64::new(0.0, radius) * e)
    };
    let radicand = |x: C64| f.eval_c64(x) + t;
    let factor = |_: f64| C64::new(1.0, 0.0);
    LiftedLoop { point: &point, radicand: &radicand, factor: &factor }.integrate(h)
}

/// Meromorphic 1-form num(x)/den(x) dx.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalForm {
    pub num: RatPoly,
    pub den: RatPoly,
}

/// m_s = ∮ f^s ω for s < count over the circle |x - center| = radius.
pub fn moments(f: &RatPoly, omega: &RationalForm, center: C64, radius: f64, count: usize) -> Result<Vec<C64>> {
    if omega.den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    (0..count)
        .map(|s| {
            periodic_trapezoid(2.0 * PI, 64, |theta| {
                let e = C64::from_polar(1.0, theta);
                let x = center + e * radius;
                let w = omega.num.eval_c64(x) / omega.den.eval_c64(x);
                Ok(f.eval_c64(x).powu(s as u32) * w * C64::new(0.0, radius) * e)
            })
        })
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Main4Sample {
    pub z: f64,
    pub limit: [f64; 2],
    pub formula: [f64; 2],
    pub relative_deviation: f64,
    /// +1 or -1: the global branch sign relating the two sides.
    pub sign: i32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Main4Report {
    pub center: f64,
    pub critical_value: f64,
    pub contour_radius: f64,
    pub samples: Vec<Main4Sample>,
    pub max_deviation: f64,
}

/// Polynomial through (s_j, v_j) evaluated at s = 0.
fn neville_at_zero(s: &[f64], v: &[C64]) -> C64 {
    let mut p = v.to_vec();
    let n = p.len();
    for m in 1..n {
        for i in 0..n - m {
            p[i] = (p[i] * s[i + m] - p[i + 1] * s[i]) / (s[i + m] - s[i]);
        }
    }
    p[0]
}

fn local_roots(f: &RatPoly, level: C64, center: C64, count: usize) -> Result<(Vec<C64>, f64)> {
    let z = Complex::with_val(128, (level.re, level.im));
    let mut roots: Vec<C64> = fiber(f, &z, 128)?.iter().map(to_c64).collect();
    roots.sort_by(|a, b| (a - center).norm().total_cmp(&(b - center).norm()));
    let rest = roots.get(count).map_or(f64::INFINITY, |r| (r - center).norm());
    roots.truncate(count);
    Ok((roots, rest))
}

/// Compares the limit of J_t(z) as t tends to the critical level with 2π√(-z) d/dz ∫_δ K
/// at negative real z, for a Morse point `center` and δ a combination of the two local roots.
pub fn main4_limit_check(
    f: &RatPoly,
    k: &RatPoly,
    center: f64,
    combo: &VanishingCycleCombo,
    z_samples: &[f64],
    _cfg: &Config,
) -> Result<Main4Report> {
    combo.validate()?;
    let fp = f.derivative();
    let c = f.eval_f64(center);
    if fp.eval_f64(center).abs() > 1e-10 * (1.0 + c.abs()) {
        return Err(Error::InvalidInput(format!("{center} is not a critical point")));
    }
    if fp.derivative().eval_f64(center).abs() < 1e-8 {
        return Err(Error::Regime("only Morse critical points are supported".into()));
    }
    if combo.n_local != 2 {
        return Err(Error::Regime("the contour continuation handles two confluent roots".into()));
    }
    let xc = C64::new(center, 0.0);
    let (_, rest) = local_roots(f, C64::new(c, 0.0), xc, 2)?;
    let radius = if rest.is_finite() { 0.4 * rest } else { 1.0 };
    let weights = combo.local_weights();
    let t1 = -c;

    let mut samples = Vec::new();
    for &z in z_samples {
        if z >= 0.0 {
            return Err(Error::InvalidInput("z samples must be negative reals".into()));
        }
        let zc = C64::new(z, 0.0);
        let (poles, far) = local_roots(f, C64::new(c + z, 0.0), xc, 2)?;
        if poles.iter().any(|p| (p - xc).norm() > 0.8 * radius) || far < 1.2 * radius {
            return Err(Error::PoleProximity(format!("|z| = {} is too large for the contour", z.abs())));
        }
        // formula side, roots ordered by argument about the critical point
        let mut ordered = poles.clone();
        ordered.sort_by(|a, b| (a - xc).arg().rem_euclid(2.0 * PI).total_cmp(&(b - xc).arg().rem_euclid(2.0 * PI)));
        let ratio: C64 = ordered
            .iter()
            .zip(&weights)
            .map(|(x, &w)| k.eval_c64(*x) / fp.eval_c64(*x) * w as f64)
            .sum();
        let formula = 2.0 * PI * (-z).sqrt() * ratio;

        let limit = if weights.iter().all(|&w| w == 0) {
            C64::new(0.0, 0.0)
        } else {
            let steps: Vec<f64> = (0..6).map(|j| 0.1 * z.abs() * 0.5f64.powi(j)).collect();
            let values: Vec<C64> = steps
                .iter()
                .map(|s| circle_integral(f, C64::new(t1 + s, 0.0), xc, radius, |x, y| k.eval_c64(x) * y / (y * y - zc)))
                .collect::<Result<_>>()?;
            // the circle carries γ_12; the combination is a multiple of it
            neville_at_zero(&steps, &values) * weights[0] as f64
        };
        let (dev, sign) = if formula.norm() == 0.0 {
            (limit.norm(), 1)
        } else {
            let plus = (limit - formula).norm();
            let minus = (limit + formula).norm();
            if plus <= minus {
                (plus / formula.norm(), 1)
            } else {
                (minus / formula.norm(), -1)
            }
        };
        samples.push(Main4Sample {
            z,
            limit: [limit.re, limit.im],
            formula: [formula.re, formula.im],
            relative_deviation: dev,
            sign,
        });
    }
    let max_deviation = samples.iter().map(|s| s.relative_deviation).fold(0.0, f64::max);
    Ok(Main4Report { center, critical_value: c, contour_radius: radius, samples, max_deviation })
}

/// Orders at 0 of J(z) = ∮ k y dx / (y² - z) on the critical level and of I'(t) = (1/2)∮ k dx / y,
/// with t measured from the critical level, over a circle around a Morse point.
pub fn morse_orders(f: &RatPoly, k: &RatPoly, center: f64, radius: f64, max_order: usize) -> Result<(usize, usize)> {
    let xc = C64::new(center, 0.0);
    let c = f.eval_f64(center);
    let t1 = C64::new(-c, 0.0);
    let nodes = 32;
    let min_level = (0..64)
        .map(|j| (f.eval_c64(xc + C64::from_polar(radius, 2.0 * PI * j as f64 / 64.0)) - c).norm())
        .fold(f64::INFINITY, f64::min);
    let rho = 0.1 * min_level;
    let coefficients = |g: &dyn Fn(C64) -> Result<C64>| -> Result<Vec<f64>> {
        let vals: Vec<(C64, C64)> = (0..nodes)
            .map(|j| {
                let u = C64::from_polar(1.0, 2.0 * PI * j as f64 / nodes as f64);
                g(u * rho).map(|v| (u, v))
            })
            .collect::<Result<_>>()?;
        // size of the m-th Taylor term at |z| = rho
        Ok((0..=max_order)
            .map(|m| (vals.iter().map(|(u, v)| v * u.powi(-(m as i32))).sum::<C64>() / nodes as f64).norm())
            .collect())
    };
    let order = |terms: Vec<f64>| -> usize {
        let top = terms.iter().cloned().fold(0.0, f64::max);
        terms.iter().position(|&a| a > 1e-9 * top).unwrap_or(max_order + 1)
    };
    let j_terms = coefficients(&|z| circle_integral(f, t1, xc, radius, |x, y| k.eval_c64(x) * y / (y * y - z)))?;
    let i_terms = coefficients(&|s| Ok(0.5 * circle_integral(f, t1 + s, xc, radius, |x, y| k.eval_c64(x) / y)?))?;
    Ok((order(j_terms), order(i_terms)))
}
