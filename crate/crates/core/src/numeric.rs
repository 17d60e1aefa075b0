//! Multiprecision complex helpers: root finding and fiber tracking along paths.

use num_complex::Complex64;
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Assign, Complex, Float};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::poly::RatPoly;

pub fn cx(prec: u32, re: f64, im: f64) -> Complex {
    Complex::with_val(prec, (re, im))
}

pub fn to_c64(z: &Complex) -> Complex64 {
    Complex64::new(z.real().to_f64(), z.imag().to_f64())
}

pub fn from_c64(prec: u32, z: Complex64) -> Complex {
    cx(prec, z.re, z.im)
}

pub fn abs_f64(z: &Complex) -> f64 {
    Float::with_val(53, z.abs_ref()).to_f64()
}

pub fn dist(a: &Complex, b: &Complex) -> f64 {
    let d = Complex::with_val(a.prec().0.max(64), a - b);
    abs_f64(&d)
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

/// e^{iθ} at the given precision.
pub fn unit(prec: u32, theta: &Float) -> Complex {
    let (s, c) = Float::with_val(prec, theta).sin_cos(Float::new(prec));
    Complex::with_val(prec, (c, s))
}

/// Decimal rendering of a float with enough digits for the precision.
pub fn float_string(f: &Float) -> String {
    let digits = (f.prec() as f64 * std::f64::consts::LOG10_2).ceil() as usize + 2;
    f.to_string_radix(10, Some(digits))
}

pub fn complex_strings(z: &Complex) -> [String; 2] {
    [float_string(z.real()), float_string(z.imag())]
}

pub fn parse_float(s: &str, prec: u32) -> Result<Float> {
    match Float::parse(s.trim()) {
        Ok(v) => Ok(Float::with_val(prec, v)),
        Err(_) => Err(Error::InvalidInput(format!("malformed decimal number {s:?}"))),
    }
}

pub fn parse_complex(parts: &[String; 2], prec: u32) -> Result<Complex> {
    Ok(Complex::with_val(prec, (parse_float(&parts[0], prec)?, parse_float(&parts[1], prec)?)))
}

/// Polynomial with complex multiprecision coefficients, lowest degree first.
#[derive(Clone, Debug)]
pub struct CPoly {
    coeffs: Vec<Complex>,
    prec: u32,
}

impl CPoly {
    pub fn from_rat(p: &RatPoly, prec: u32) -> Self {
        CPoly {
            coeffs: p.coeffs().iter().map(|c| Complex::with_val(prec, (Float::with_val(prec, c), 0))).collect(),
            prec,
        }
    }

    /// p(x) - z.
    pub fn shifted(p: &RatPoly, z: &Complex, prec: u32) -> Self {
        let mut cp = CPoly::from_rat(p, prec);
        if cp.coeffs.is_empty() {
            cp.coeffs.push(Complex::new(prec));
        }
        cp.coeffs[0] -= z;
        cp
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn eval(&self, x: &Complex) -> Complex {
        let mut acc = Complex::new(self.prec);
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    /// Value and first derivative by a double Horner pass.
    pub fn eval_d(&self, x: &Complex) -> (Complex, Complex) {
        let mut v = Complex::new(self.prec);
        let mut d = Complex::new(self.prec);
        for c in self.coeffs.iter().rev() {
            d *= x;
            d += &v;
            v *= x;
            v += c;
        }
        (v, d)
    }

    fn to_c64(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(to_c64).collect()
    }
}

fn aberth_f64(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    let radius = 1.0 + coeffs[..n].iter().map(|c| (c / lead).norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4))
        .collect();
    let eval = |x: Complex64| {
        let mut v = Complex64::new(0.0, 0.0);
        let mut d = Complex64::new(0.0, 0.0);
        for c in coeffs.iter().rev() {
            d = d * x + v;
            v = v * x + c;
        }
        (v, d)
    };
    for _ in 0..2000 {
        let mut max_step: f64 = 0.0;
        for k in 0..n {
            let (v, d) = eval(z[k]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / d;
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != k {
                    s += (z[k] - z[j]).inv();
                }
            }
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if step.is_finite() {
                z[k] -= step;
                max_step = max_step.max(step.norm() / (1.0 + z[k].norm()));
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }
    z
}

/// All roots of a polynomial with simple roots, refined to the working precision.
/// With `strict` the refinement must converge; otherwise the best estimates are returned.
pub fn roots(poly: &CPoly, strict: bool) -> Result<Vec<Complex>> {
    let n = poly.degree();
    if n == 0 {
        return Ok(Vec::new());
    }
    let prec = poly.prec;
    let start = aberth_f64(&poly.to_c64());
    let mut z: Vec<Complex> = start.into_iter().map(|c| from_c64(prec, c)).collect();
    let tol = Float::with_val(prec, Float::i_exp(1, -(prec as i32) + 6));
    for _ in 0..400 {
        let mut converged = true;
        for k in 0..n {
            let (v, d) = poly.eval_d(&z[k]);
            if v.is_zero() {
                continue;
            }
            let ratio = Complex::with_val(prec, &v / &d);
            let mut s = Complex::new(prec);
            for j in 0..n {
                if j != k {
                    let diff = Complex::with_val(prec, &z[k] - &z[j]);
                    s += diff.recip();
                }
            }
            let denom = Complex::with_val(prec, 1 - Complex::with_val(prec, &ratio * &s));
            let step = Complex::with_val(prec, &ratio / &denom);
            if !step.real().is_finite() || !step.imag().is_finite() {
                continue;
            }
            z[k] -= &step;
            let size = Float::with_val(prec, step.abs_ref());
            let scale = Float::with_val(prec, z[k].abs_ref()) + 1u32;
            if size > Float::with_val(prec, &tol * &scale) {
                converged = false;
            }
        }
        if converged {
            return Ok(z);
        }
    }
    if strict {
        Err(Error::Tracking("root refinement did not converge".into()))
    } else {
        Ok(z)
    }
}

/// Roots of p(x) - z.
pub fn fiber(p: &RatPoly, z: &Complex, prec: u32) -> Result<Vec<Complex>> {
    roots(&CPoly::shifted(p, z, prec), true)
}

/// Newton polish of a simple root of p(x) - z.
pub fn polish(poly: &CPoly, z: &Complex, x: &Complex, max_iter: usize) -> Option<(Complex, usize)> {
    let prec = poly.prec;
    let tol = Float::with_val(prec, Float::i_exp(1, -(prec as i32) + 8));
    let mut x = Complex::with_val(prec, x);
    for it in 0..max_iter {
        let (mut v, d) = poly.eval_d(&x);
        v -= z;
        if d.is_zero() {
            return None;
        }
        let step = Complex::with_val(prec, &v / &d);
        x -= &step;
        let size = Float::with_val(prec, step.abs_ref());
        let scale = Float::with_val(prec, x.abs_ref()) + 1u32;
        if size <= Float::with_val(prec, &tol * &scale) {
            return Some((x, it + 1));
        }
    }
    None
}

fn min_separation(xs: &[Complex]) -> Vec<f64> {
    let n = xs.len();
    let c: Vec<Complex64> = xs.iter().map(to_c64).collect();
    (0..n)
        .map(|i| {
            (0..n).filter(|&j| j != i).map(|j| (c[i] - c[j]).norm()).fold(f64::INFINITY, f64::min)
        })
        .collect()
}

/// Continuation of the full fiber of P along polygonal paths in the z-plane.
#[derive(Clone, Debug)]
pub struct Tracker {
    poly: CPoly,
    prec: u32,
    max_step: f64,
    collision_tol: f64,
    scale: f64,
}

impl Tracker {
    pub fn new(p: &RatPoly, cfg: &Config, scale: f64) -> Self {
        Tracker {
            poly: CPoly::from_rat(p, cfg.precision_bits),
            prec: cfg.precision_bits,
            max_step: cfg.track_step,
            collision_tol: cfg.collision_tol,
            scale: scale.max(1.0),
        }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn poly(&self) -> &CPoly {
        &self.poly
    }

    /// Tracks `start` (a fiber over path[0]) along the polyline; fiber order is preserved.
    pub fn track(&self, path: &[Complex], start: &[Complex]) -> Result<Vec<Complex>> {
        let mut cur: Vec<Complex> = start.to_vec();
        for w in path.windows(2) {
            cur = self.track_segment(&w[0], &w[1], cur)?;
        }
        Ok(cur)
    }

    fn track_segment(&self, a: &Complex, b: &Complex, start: Vec<Complex>) -> Result<Vec<Complex>> {
        let prec = self.prec;
        let delta = Complex::with_val(prec, b - a);
        let mut cur = start;
        let mut s = 0.0f64;
        let mut h = self.max_step;
        let min_step = (2.0f64).powi(-44);
        while s < 1.0 {
            let s_new = (s + h).min(1.0);
            let z = if s_new == 1.0 {
                Complex::with_val(prec, b)
            } else {
                Complex::with_val(prec, a + Complex::with_val(prec, &delta * Float::with_val(prec, s_new)))
            };
            match self.try_step(&cur, &z) {
                Some((next, iters)) => {
                    cur = next;
                    s = s_new;
                    if iters <= 5 {
                        h = (h * 2.0).min(self.max_step);
                    }
                }
                None => {
                    h /= 2.0;
                    if h < min_step {
                        return Err(Error::Collision { at: format!("{}", to_c64(&z)), step: h });
                    }
                }
            }
        }
        Ok(cur)
    }

    fn try_step(&self, cur: &[Complex], z: &Complex) -> Option<(Vec<Complex>, usize)> {
        let sep = min_separation(cur);
        let mut next = Vec::with_capacity(cur.len());
        let mut worst = 0;
        for (x, s) in cur.iter().zip(&sep) {
            let (y, it) = polish(&self.poly, z, x, 12)?;
            if dist(&y, x) > 0.3 * s {
                return None;
            }
            worst = worst.max(it);
            next.push(y);
        }
        let new_sep = min_separation(&next);
        let floor = 10.0 * self.collision_tol * self.scale;
        if new_sep.iter().any(|&d| d < floor) {
            return None;
        }
        Some((next, worst))
    }
}

/// Points of a polyline approximating a circle, counterclockwise, starting at angle `phase`.
pub fn circle_points(prec: u32, center: &Complex, radius: &Float, segments: usize, phase: &Float) -> Vec<Complex> {
    let two_pi = Float::with_val(prec, pi(prec) * 2u32);
    (0..=segments)
        .map(|k| {
            let theta = Float::with_val(prec, &two_pi * Float::with_val(prec, k as f64 / segments as f64)) + phase;
            let mut p = unit(prec, &theta);
            p *= radius;
            p += center;
            p
        })
        .collect()
}

/// Principal square root, kept here so the branch convention lives in one place.
pub fn sqrt_principal(z: &Complex) -> Complex {
    Complex::with_val(z.prec(), z.sqrt_ref())
}

pub fn pow_f(x: &Float, e: i32) -> Float {
    Float::with_val(x.prec(), x.pow(e))
}

pub fn assign_zero(z: &mut Complex) {
    z.assign((0, 0));
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::chebyshev;

    #[test]
    fn fiber_of_chebyshev() {
        let t6 = chebyshev(6).unwrap();
        let z = cx(128, 0.3, 0.0);
        let xs = fiber(&t6, &z, 128).unwrap();
        assert_eq!(xs.len(), 6);
        for x in &xs {
            let v = Complex::with_val(128, t6.eval_complex(x) - &z);
            assert!(abs_f64(&v) < 1e-30);
        }
    }

    #[test]
    fn tracking_around_a_branch_point() {
        // x^2 = z around 0 swaps the two roots
        let p = RatPoly::from_ints(&[0, 0, 1]);
        let cfg = Config::default();
        let tr = Tracker::new(&p, &cfg, 1.0);
        let center = cx(128, 0.0, 0.0);
        let path = circle_points(128, &center, &Float::with_val(128, 1), 16, &Float::new(128));
        let start = vec![cx(128, 1.0, 0.0), cx(128, -1.0, 0.0)];
        let end = tr.track(&path, &start).unwrap();
        assert!(dist(&end[0], &start[1]) < 1e-30);
        assert!(dist(&end[1], &start[0]) < 1e-30);
    }
}
