//! Numeric monodromy of P(x) = z: critical values, petal loops around each of
//! them from a real base point, and the normalized labeling of the fiber.

mod lattice;
mod perm;

use std::cmp::Ordering;

use rayon::prelude::*;
use rug::{Complex, Float};
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::numeric::{self, abs_f64, circle_points, complex_strings, cx, dist, to_c64, CPoly, Tracker};
use crate::poly::RatPoly;

pub use lattice::{divisor_lattice, DivisorLattice};
pub use perm::{
    closure, factorial, group_order, is_full_symmetric, is_transitive, path_product, Permutation,
    MAX_GROUP_DEGREE,
};

/// A critical point of P with its multiplicity as a root of P'.
#[derive(Clone, Debug)]
pub struct CriticalPoint {
    pub point: Complex,
    pub multiplicity: usize,
    pub value: Complex,
}

/// Critical points of P, refined at the working precision.
pub fn critical_points(p: &RatPoly, prec: u32) -> Result<Vec<CriticalPoint>> {
    let n = degree_of(p)?;
    if n < 2 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for (factor, mult) in p.derivative().square_free_decomposition() {
        for r in numeric::roots(&CPoly::from_rat(&factor, prec), true)? {
            let value = p.eval_complex(&r);
            out.push(CriticalPoint { point: r, multiplicity: mult, value });
        }
    }
    Ok(out)
}

fn degree_of(p: &RatPoly) -> Result<usize> {
    match p.deg() {
        Some(n) if n >= 1 => Ok(n),
        _ => Err(Error::InvalidInput("expected a nonconstant polynomial".into())),
    }
}

fn cmp_complex(a: &Complex, b: &Complex) -> Ordering {
    a.real()
        .partial_cmp(b.real())
        .unwrap_or(Ordering::Equal)
        .then(a.imag().partial_cmp(b.imag()).unwrap_or(Ordering::Equal))
}

/// Distinct critical values, sorted by real then imaginary part.
/// Values whose imaginary part is below the clustering tolerance are made exactly real.
pub fn critical_values(p: &RatPoly, prec: u32) -> Result<Vec<Complex>> {
    let points = critical_points(p, prec)?;
    cluster_values(points.into_iter().map(|c| c.value).collect(), prec)
}

fn cluster_tol(prec: u32) -> f64 {
    (2.0f64).powf(-(prec as f64) / 2.0)
}

fn cluster_values(values: Vec<Complex>, prec: u32) -> Result<Vec<Complex>> {
    let tol = cluster_tol(prec);
    let mut distinct: Vec<Complex> = Vec::new();
    for mut v in values {
        let scale = 1.0 + abs_f64(&v);
        if v.imag().clone().abs().to_f64() < tol * scale {
            v.mut_imag().assign_zero();
        }
        let mut merged = false;
        for d in &distinct {
            let gap = dist(d, &v);
            if gap < tol * scale {
                merged = true;
                break;
            }
            if gap < 1e6 * tol * scale {
                return Err(Error::Consistency(format!(
                    "critical values {} and {} cannot be separated at {prec} bits",
                    to_c64(d),
                    to_c64(&v)
                )));
            }
        }
        if !merged {
            distinct.push(v);
        }
    }
    distinct.sort_by(cmp_complex);
    Ok(distinct)
}

trait AssignZero {
    fn assign_zero(&mut self);
}

impl AssignZero for Float {
    fn assign_zero(&mut self) {
        *self = Float::new(self.prec());
    }
}

/// Monodromy representation with the normalized fiber labeling:
/// the loop around infinity acts as i -> i+1 and label 1 is the root of
/// largest real part (largest imaginary part on ties) over the base point.
#[derive(Clone, Debug)]
pub struct MonodromyRep {
    pub polynomial: RatPoly,
    pub precision_bits: u32,
    pub base_point: Complex,
    pub critical_values: Vec<Complex>,
    /// One generator per critical value, in the same order.
    pub generators: Vec<Permutation>,
    pub infinity: Permutation,
    /// Order in which the petals compose to the loop around infinity.
    pub petal_order: Vec<usize>,
    /// Labeled fiber over the base point: fiber[i] carries label i+1.
    pub fiber: Vec<Complex>,
}

impl MonodromyRep {
    pub fn degree(&self) -> usize {
        self.fiber.len()
    }

    pub fn group_order(&self) -> Result<u128> {
        group_order(&self.generators, self.degree())
    }

    pub fn is_full_symmetric(&self) -> Result<bool> {
        is_full_symmetric(&self.generators, self.degree())
    }

    pub fn geometry(&self) -> LoopGeometry {
        LoopGeometry::new(&self.base_point, &self.critical_values, self.precision_bits)
    }

    /// Product of the petals in `petal_order`; equals `infinity` by construction.
    pub fn petal_product(&self) -> Permutation {
        let perms: Vec<&Permutation> = self.petal_order.iter().map(|&i| &self.generators[i]).collect();
        path_product(&perms, self.degree())
    }

    pub fn to_json(&self) -> MonodromyJson {
        MonodromyJson {
            degree: self.degree(),
            polynomial: self.polynomial.clone(),
            precision_bits: self.precision_bits,
            base_point: complex_strings(&self.base_point),
            critical_values: self.critical_values.iter().map(complex_strings).collect(),
            generators: self.generators.clone(),
            infinity: self.infinity.clone(),
            petal_order: self.petal_order.iter().map(|i| i + 1).collect(),
            fiber: self.fiber.iter().map(complex_strings).collect(),
        }
    }

    pub fn from_json(j: &MonodromyJson) -> Result<Self> {
        let prec = j.precision_bits;
        let parse_all = |v: &[[String; 2]]| -> Result<Vec<Complex>> {
            v.iter().map(|c| numeric::parse_complex(c, prec)).collect()
        };
        let rep = MonodromyRep {
            polynomial: j.polynomial.clone(),
            precision_bits: prec,
            base_point: numeric::parse_complex(&j.base_point, prec)?,
            critical_values: parse_all(&j.critical_values)?,
            generators: j.generators.clone(),
            infinity: j.infinity.clone(),
            petal_order: j.petal_order.iter().map(|i| i.saturating_sub(1)).collect(),
            fiber: parse_all(&j.fiber)?,
        };
        let n = j.degree;
        if rep.fiber.len() != n
            || rep.generators.len() != rep.critical_values.len()
            || rep.generators.iter().any(|g| g.degree() != n)
            || rep.infinity != Permutation::shift(n)
            || rep.polynomial.deg() != Some(n)
        {
            return Err(Error::InvalidInput("inconsistent monodromy representation".into()));
        }
        Ok(rep)
    }
}

/// Interchange form of a monodromy representation.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonodromyJson {
    pub degree: usize,
    pub polynomial: RatPoly,
    pub precision_bits: u32,
    pub base_point: [String; 2],
    pub critical_values: Vec<[String; 2]>,
    pub generators: Vec<Permutation>,
    pub infinity: Permutation,
    pub petal_order: Vec<usize>,
    pub fiber: Vec<[String; 2]>,
}

/// Loops and approach paths in the z-plane, all based at the base point.
#[derive(Clone, Debug)]
pub struct LoopGeometry {
    prec: u32,
    base: Complex,
    values: Vec<Complex>,
    radii: Vec<f64>,
}

impl LoopGeometry {
    pub fn new(base: &Complex, values: &[Complex], prec: u32) -> Self {
        let radii = values
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let mut r = dist(c, base);
                for (j, d) in values.iter().enumerate() {
                    if j != i {
                        r = r.min(dist(c, d));
                    }
                }
                0.4 * r
            })
            .collect();
        LoopGeometry { prec, base: base.clone(), values: values.to_vec(), radii }
    }

    /// Stand-off radius around critical value `i`.
    pub fn radius(&self, i: usize) -> f64 {
        self.radii[i]
    }

    fn c(&self, re: f64, im: f64) -> Complex {
        cx(self.prec, re, im)
    }

    /// Polyline from the base point to the stand-off circle of value `i`,
    /// detouring around values that lie (nearly) on the way.
    pub fn approach(&self, i: usize) -> Vec<Complex> {
        let prec = self.prec;
        let target = &self.values[i];
        let to_base = Complex::with_val(prec, &self.base - target);
        let len_tb = abs_f64(&to_base);
        let mut end = Complex::with_val(prec, &to_base / Float::with_val(prec, len_tb));
        end *= Float::with_val(prec, self.radii[i]);
        end += target;
        let seg = Complex::with_val(prec, &end - &self.base);
        let seg_len = abs_f64(&seg);
        let u = to_c64(&seg) / seg_len;
        let a = to_c64(&self.base);
        let mut detours: Vec<(f64, f64, f64)> = Vec::new(); // (along, half width, signed height)
        for (j, cj) in self.values.iter().enumerate() {
            if j == i {
                continue;
            }
            let rel = (to_c64(cj) - a) * u.conj();
            let (along, offset) = (rel.re, rel.im);
            let r = 0.5 * self.radii[j];
            if along <= 0.0 || along >= seg_len || offset.abs() >= r {
                continue;
            }
            // pass on the side away from c_j; exactly collinear values are passed on the right
            let side = if offset.abs() < 1e-12 * (1.0 + seg_len) || offset > 0.0 { -1.0 } else { 1.0 };
            detours.push((along, r, side * (offset.abs() + r)));
        }
        detours.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap_or(Ordering::Equal));
        let mut path = vec![self.base.clone()];
        let point = |along: f64, height: f64| {
            let q = a + u * num_complex::Complex64::new(along, height);
            self.c(q.re, q.im)
        };
        for (along, r, h) in detours {
            path.push(point(along - r, 0.0));
            path.push(point(along - r, h));
            path.push(point(along + r, h));
            path.push(point(along + r, 0.0));
        }
        path.push(end);
        path
    }

    /// Counterclockwise petal loop around value `i`.
    pub fn petal(&self, i: usize) -> Vec<Complex> {
        let prec = self.prec;
        let approach = self.approach(i);
        let end = approach.last().expect("nonempty").clone();
        let rel = Complex::with_val(prec, &end - &self.values[i]);
        let phase = Float::with_val(prec, rel.arg_ref());
        let circle =
            circle_points(prec, &self.values[i], &Float::with_val(prec, self.radii[i]), 16, &phase);
        let mut path = approach.clone();
        path.extend(circle.into_iter().skip(1));
        path.extend(approach.into_iter().rev().skip(1));
        path
    }

    /// Counterclockwise loop enclosing every critical value.
    pub fn infinity_loop(&self) -> Vec<Complex> {
        let prec = self.prec;
        let far = Complex::with_val(prec, &self.base * 2u32);
        let radius = Float::with_val(prec, far.real());
        let center = Complex::new(prec);
        let mut path = vec![self.base.clone()];
        path.extend(circle_points(prec, &center, &radius, 64, &Float::new(prec)));
        path.push(self.base.clone());
        path
    }

    /// Indices of the values sorted by the direction of their approach paths, so that
    /// traversing the petals in this order is homotopic to the loop around infinity.
    pub fn petal_order(&self) -> Vec<usize> {
        let a = to_c64(&self.base);
        let mut idx: Vec<usize> = (0..self.values.len()).collect();
        let key = |i: usize| {
            let d = to_c64(&self.values[i]) - a;
            let mut ang = d.arg();
            if ang < 0.0 {
                ang += 2.0 * std::f64::consts::PI;
            }
            (ang, d.norm())
        };
        idx.sort_by(|&i, &j| {
            let (ai, ri) = key(i);
            let (aj, rj) = key(j);
            let collinear = (ai - aj).abs() < 1e-12;
            if collinear {
                // the farther value is reached by a path turned slightly clockwise
                rj.partial_cmp(&ri).unwrap_or(Ordering::Equal)
            } else {
                ai.partial_cmp(&aj).unwrap_or(Ordering::Equal)
            }
        });
        idx
    }
}

fn base_point(values: &[Complex], prec: u32) -> Complex {
    let m = values.iter().map(abs_f64).fold(0.0, f64::max);
    cx(prec, 2.0 * (1.0 + m), 0.0)
}

/// Permutation induced by a closed path: start[i] ends at start[perm(i)].
fn loop_permutation(start: &[Complex], end: &[Complex]) -> Result<Permutation> {
    let n = start.len();
    let mut images = Vec::with_capacity(n);
    for e in end {
        let (best, d) = start
            .iter()
            .enumerate()
            .map(|(j, s)| (j, dist(e, s)))
            .min_by(|x, y| x.1.partial_cmp(&y.1).unwrap_or(Ordering::Equal))
            .expect("nonempty fiber");
        if d > 1e-20 * (1.0 + abs_f64(e)) {
            return Err(Error::Tracking(format!("loop endpoint is {d:e} away from the fiber")));
        }
        images.push(best);
    }
    Permutation::from_images(images)
        .map_err(|_| Error::Tracking("tracked loop does not permute the fiber".into()))
}

/// Labels for a raw fiber given the infinity permutation on raw indices.
fn normalized_labels(fiber: &[Complex], infinity: &Permutation) -> Result<Vec<usize>> {
    let n = fiber.len();
    if infinity.cycle_type() != vec![n] {
        return Err(Error::Consistency(format!("loop around infinity is not an {n}-cycle: {infinity:?}")));
    }
    let tie = 1e-20;
    let mut first = 0;
    for i in 1..n {
        let (a, b) = (&fiber[i], &fiber[first]);
        let dr = Float::with_val(64, a.real() - b.real()).to_f64();
        let scale = 1.0 + abs_f64(a);
        let better = if dr.abs() <= tie * scale { a.imag() > b.imag() } else { dr > 0.0 };
        if better {
            first = i;
        }
    }
    let mut label = vec![0; n];
    let mut cur = first;
    for k in 0..n {
        label[cur] = k;
        cur = infinity.apply(cur);
    }
    Ok(label)
}

fn relabel(g: &Permutation, label: &[usize]) -> Permutation {
    let n = label.len();
    let mut images = vec![0; n];
    for raw in 0..n {
        images[label[raw]] = label[g.apply(raw)];
    }
    Permutation::from_images(images).expect("relabeling preserves bijectivity")
}

/// Monodromy of P with the normalized labeling.
pub fn monodromy(p: &RatPoly, cfg: &Config) -> Result<MonodromyRep> {
    cfg.validate()?;
    let n = degree_of(p)?;
    if n < 2 {
        return Err(Error::InvalidInput("monodromy needs degree at least 2".into()));
    }
    let prec = cfg.precision_bits;
    let values = critical_values(p, prec)?;
    let base = base_point(&values, prec);
    let geometry = LoopGeometry::new(&base, &values, prec);
    let raw_fiber = numeric::fiber(p, &base, prec)?;
    let tracker = Tracker::new(p, cfg, abs_f64(&base));

    let mut loops: Vec<Vec<Complex>> = (0..values.len()).map(|i| geometry.petal(i)).collect();
    loops.push(geometry.infinity_loop());
    let perms: Vec<Permutation> = loops
        .par_iter()
        .map(|path| {
            let end = tracker.track(path, &raw_fiber)?;
            loop_permutation(&raw_fiber, &end)
        })
        .collect::<Result<Vec<_>>>()?;
    let (raw_inf, raw_gens) = perms.split_last().expect("infinity loop present");

    let label = normalized_labels(&raw_fiber, raw_inf)?;
    let generators: Vec<Permutation> = raw_gens.iter().map(|g| relabel(g, &label)).collect();
    let infinity = relabel(raw_inf, &label);
    debug_assert_eq!(infinity, Permutation::shift(n));
    let mut fiber = vec![Complex::new(prec); n];
    for (raw, x) in raw_fiber.into_iter().enumerate() {
        fiber[label[raw]] = x;
    }
    let rep = MonodromyRep {
        polynomial: p.clone(),
        precision_bits: prec,
        base_point: base,
        critical_values: values,
        generators,
        infinity,
        petal_order: geometry.petal_order(),
        fiber,
    };
    if rep.petal_product() != rep.infinity {
        return Err(Error::Consistency(format!(
            "ordered product of petals {:?} differs from the loop around infinity",
            rep.petal_product()
        )));
    }
    if !is_transitive(&rep.generators, n) {
        return Err(Error::Consistency("monodromy group is not transitive".into()));
    }
    Ok(rep)
}

/// Labeled fiber transported from the base point along `path` (which starts there).
pub fn transport(rep: &MonodromyRep, path: &[Complex], cfg: &Config) -> Result<Vec<Complex>> {
    let tracker = Tracker::new(&rep.polynomial, cfg, abs_f64(&rep.base_point));
    tracker.track(path, &rep.fiber)
}
