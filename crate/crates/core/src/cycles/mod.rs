//! Zero-cycles of P(x) = z: cycle vectors, the walk of real intervals through
//! the fiber, vanishing-cycle combinations and the constellation of P.

mod constellation;

use std::cmp::Ordering;
use std::fmt;

use rug::{Complex, Float, Rational};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::monodromy::{critical_points, transport, MonodromyRep};
use crate::numeric::{abs_f64, cx, dist, float_string, parse_float, polish, CPoly};
use crate::poly::{parse_rational, RatPoly};

pub use constellation::{build_constellation, Constellation, MarkedVertex};

/// Coefficients of a zero-cycle Σ v_i x_i in the normalized labeling.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct CycleVector(Vec<Rational>);

impl CycleVector {
    pub fn new(entries: Vec<Rational>) -> Self {
        CycleVector(entries)
    }

    pub fn from_ints(entries: &[i64]) -> Self {
        CycleVector(entries.iter().map(|&x| Rational::from(x)).collect())
    }

    pub fn zero(n: usize) -> Self {
        CycleVector(vec![Rational::new(); n])
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> Rational {
        self.0.iter().sum()
    }

    /// Σ v_i = 0.
    pub fn is_reduced(&self) -> bool {
        self.sum() == 0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| *x == 0)
    }

    pub fn scaled(&self, c: &Rational) -> CycleVector {
        CycleVector(self.0.iter().map(|x| Rational::from(x * c)).collect())
    }

    /// Whether self = c · other for some rational c (zero vectors are proportional to anything).
    pub fn is_proportional_to(&self, other: &CycleVector) -> bool {
        if self.len() != other.len() {
            return false;
        }
        let Some(k) = other.0.iter().position(|x| *x != 0) else { return self.is_zero() };
        let c = Rational::from(&self.0[k] / &other.0[k]);
        *self == other.scaled(&c)
    }

    fn add_at(&mut self, i: usize, c: &Rational) {
        self.0[i] += c;
    }
}

impl fmt::Debug for CycleVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", items.join(", "))
    }
}

impl Serialize for CycleVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for x in &self.0 {
            seq.serialize_element(&x.to_string())?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for CycleVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let items: Vec<String> = Vec::deserialize(d)?;
        items
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()
            .map(CycleVector)
            .map_err(de::Error::custom)
    }
}

/// One weighted real interval; endpoints are decimal or `p/q` strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Interval {
    pub a: String,
    pub b: String,
    #[serde(with = "crate::poly::rational_string")]
    pub weight: Rational,
}

/// Σ c_i ∫_{a_i}^{b_i}, the right-hand side of a polynomial moment problem.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntervalSystem {
    pub intervals: Vec<Interval>,
}

impl IntervalSystem {
    pub fn single(a: &str, b: &str) -> Self {
        IntervalSystem { intervals: vec![Interval { a: a.into(), b: b.into(), weight: Rational::from(1) }] }
    }
}

pub fn parse_real(s: &str, prec: u32) -> Result<Float> {
    if s.contains('/') {
        let r = parse_rational(s)?;
        return Ok(Float::with_val(prec, &r));
    }
    parse_float(s, prec)
}

/// Cycle of the real walk over one elementary interval of critical levels.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LevelCycle {
    pub lower: String,
    pub upper: String,
    pub cycle: CycleVector,
}

fn snap_tol(prec: u32) -> f64 {
    (2.0f64).powf(-(prec as f64) / 3.0)
}

fn cmp_float(a: &Float, b: &Float) -> Ordering {
    a.partial_cmp(b).unwrap_or(Ordering::Equal)
}

fn snap(value: Float, levels: &[Float], tol: f64) -> Float {
    for l in levels {
        let gap = Float::with_val(64, &value - l).abs().to_f64();
        if gap < tol * (1.0 + l.clone().abs().to_f64()) {
            return l.clone();
        }
    }
    value
}

/// Real root of p - level inside a monotone piece [lo, hi].
fn solve_on_piece(p: &RatPoly, lo: &Float, hi: &Float, level: &Float, prec: u32) -> Result<Float> {
    let f = |x: &Float| Float::with_val(prec, p.eval_float(x) - level);
    let (mut a, mut b) = (lo.clone(), hi.clone());
    let fa_neg = f(&a).is_sign_negative();
    for _ in 0..80 {
        let mid = Float::with_val(prec, &a + &b) / 2u32;
        if f(&mid).is_sign_negative() == fa_neg {
            a = mid;
        } else {
            b = mid;
        }
    }
    let guess = Complex::with_val(prec, (Float::with_val(prec, &a + &b) / 2u32, 0));
    let poly = CPoly::from_rat(p, prec);
    let z = Complex::with_val(prec, (level, 0));
    let (x, _) = polish(&poly, &z, &guess, 20)
        .ok_or_else(|| Error::Tracking("Newton polish of a real branch failed".into()))?;
    Ok(x.real().clone())
}

/// One vector per elementary interval (L_m, L_{m+1}) between consecutive levels, the levels
/// being the real critical values of P together with the images of all endpoints.
/// Over each elementary interval the walk contributes ±weight to every branch it crosses,
/// with sign + when P increases along the walk.
pub fn real_interval_to_coefficients(
    p: &RatPoly,
    system: &IntervalSystem,
    rep: &MonodromyRep,
    cfg: &Config,
) -> Result<Vec<LevelCycle>> {
    let n = rep.degree();
    if p != &rep.polynomial {
        return Err(Error::InvalidInput("representation belongs to a different polynomial".into()));
    }
    let prec = cfg.precision_bits.max(rep.precision_bits);
    let tol = snap_tol(prec);
    let crit = critical_points(p, prec)?;
    let real_crit: Vec<Float> = {
        let mut xs: Vec<Float> = crit
            .iter()
            .filter(|c| c.point.imag().clone().abs().to_f64() < tol * (1.0 + abs_f64(&c.point)))
            .map(|c| c.point.real().clone())
            .collect();
        xs.sort_by(cmp_float);
        xs
    };
    let mut levels: Vec<Float> = rep
        .critical_values
        .iter()
        .filter(|c| c.imag().is_zero())
        .map(|c| Float::with_val(prec, c.real()))
        .collect();
    levels.sort_by(cmp_float);
    let crit_levels = levels.clone();

    // (monotone pieces with their images), per interval
    struct Piece {
        lo: Float,
        hi: Float,
        z_start: Float,
        z_end: Float,
        weight: Rational,
    }
    let mut pieces: Vec<Piece> = Vec::new();
    for iv in &system.intervals {
        let a = parse_real(&iv.a, prec)?;
        let b = parse_real(&iv.b, prec)?;
        if iv.weight == 0 || a == b {
            continue;
        }
        let forward = a < b;
        let (lo, hi) = if forward { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
        let near = |x: &Float, y: &Float| Float::with_val(64, x - y).abs().to_f64() < tol * (1.0 + y.clone().abs().to_f64());
        let mut breaks: Vec<Float> = vec![lo.clone()];
        for c in &real_crit {
            if c > &lo && c < &hi && !near(c, &lo) && !near(c, &hi) {
                breaks.push(c.clone());
            }
        }
        breaks.push(hi.clone());
        let images: Vec<Float> =
            breaks.iter().map(|x| snap(p.eval_float(x), &crit_levels, tol)).collect();
        for img in [&images[0], images.last().expect("two breaks")] {
            if !levels.iter().any(|l| l == img) {
                levels.push(img.clone());
            }
        }
        for k in 0..breaks.len() - 1 {
            let (zs, ze) = if forward {
                (images[k].clone(), images[k + 1].clone())
            } else {
                (images[k + 1].clone(), images[k].clone())
            };
            pieces.push(Piece {
                lo: breaks[k].clone(),
                hi: breaks[k + 1].clone(),
                z_start: zs,
                z_end: ze,
                weight: iv.weight.clone(),
            });
        }
    }
    levels.sort_by(cmp_float);
    levels.dedup_by(|x, y| Float::with_val(64, &*x - &*y).abs().to_f64() < tol * (1.0 + y.clone().abs().to_f64()));
    for pc in pieces.iter_mut() {
        pc.z_start = snap(pc.z_start.clone(), &levels, tol);
        pc.z_end = snap(pc.z_end.clone(), &levels, tol);
    }

    let h = {
        let min_im = rep
            .critical_values
            .iter()
            .map(|c| c.imag().clone().abs().to_f64())
            .filter(|&y| y > 0.0)
            .fold(f64::INFINITY, f64::min);
        (0.5 * min_im).min(1.0)
    };
    let base = &rep.base_point;
    let lift = Complex::with_val(prec, base + cx(prec, 0.0, h));

    let mut out = Vec::new();
    for m in 0..levels.len().saturating_sub(1) {
        let (l0, l1) = (&levels[m], &levels[m + 1]);
        let mid = Float::with_val(prec, l0 + l1) / 2u32;
        let mut contributions: Vec<(Float, Rational)> = Vec::new();
        for pc in &pieces {
            let increasing = pc.z_end > pc.z_start;
            let (zmin, zmax) = if increasing { (&pc.z_start, &pc.z_end) } else { (&pc.z_end, &pc.z_start) };
            if zmin == zmax || !(zmin <= l0 && l1 <= zmax) {
                continue;
            }
            let x = solve_on_piece(p, &pc.lo, &pc.hi, &mid, prec)?;
            let w = if increasing { pc.weight.clone() } else { Rational::from(-&pc.weight) };
            contributions.push((x, w));
        }
        let mut cycle = CycleVector::zero(n);
        if !contributions.is_empty() {
            let target = Complex::with_val(prec, (&mid, 0));
            let path = vec![
                base.clone(),
                lift.clone(),
                Complex::with_val(prec, (&mid, h)),
                target,
            ];
            let fiber = transport(rep, &path, cfg)?;
            for (x, w) in contributions {
                let xc = Complex::with_val(prec, (&x, 0));
                let (label, d) = fiber
                    .iter()
                    .enumerate()
                    .map(|(i, y)| (i, dist(&xc, y)))
                    .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(Ordering::Equal))
                    .expect("nonempty fiber");
                if d > 1e-12 * (1.0 + abs_f64(&xc)) {
                    return Err(Error::Tracking(format!(
                        "real branch at {} not found in the transported fiber (gap {d:e})",
                        x.to_f64()
                    )));
                }
                cycle.add_at(label, &w);
            }
        }
        out.push(LevelCycle { lower: float_string(l0), upper: float_string(l1), cycle });
    }
    Ok(out)
}

/// Σ n_ij (x_i - x_j) over locally confluent roots, indices 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VanishingCycleCombo {
    pub n_local: usize,
    /// Triples (i, j, n_ij) with 1 ≤ i < j ≤ n_local.
    pub coefficients: Vec<(usize, usize, i64)>,
}

impl VanishingCycleCombo {
    pub fn validate(&self) -> Result<()> {
        for &(i, j, _) in &self.coefficients {
            if !(1 <= i && i < j && j <= self.n_local) {
                return Err(Error::InvalidInput(format!(
                    "vanishing pair ({i}, {j}) outside 1..={} or not increasing",
                    self.n_local
                )));
            }
        }
        Ok(())
    }

    /// Coefficient of the i-th local root (1-based) in Σ n_ij (e_i - e_j).
    pub fn local_weights(&self) -> Vec<i64> {
        let mut w = vec![0; self.n_local];
        for &(i, j, c) in &self.coefficients {
            w[i - 1] += c;
            w[j - 1] -= c;
        }
        w
    }
}

/// Global cycle vector of a vanishing combination, given the global labels
/// (1-based) of the local roots in their cyclic order.
pub fn vanishing_combo_to_cycle(combo: &VanishingCycleCombo, root_order: &[usize], n: usize) -> Result<CycleVector> {
    combo.validate()?;
    if root_order.len() != combo.n_local {
        return Err(Error::InvalidInput(format!(
            "root order lists {} roots, combination has {}",
            root_order.len(),
            combo.n_local
        )));
    }
    let mut seen = vec![false; n];
    for &g in root_order {
        if g == 0 || g > n || std::mem::replace(&mut seen[g - 1], true) {
            return Err(Error::InvalidInput(format!("bad or repeated global label {g}")));
        }
    }
    let mut v = CycleVector::zero(n);
    for (k, w) in combo.local_weights().into_iter().enumerate() {
        v.add_at(root_order[k] - 1, &Rational::from(w));
    }
    Ok(v)
}

/// A nonzero reduced cycle exists exactly when the fiber has two points.
pub fn nontrivial_cycle_exists(p: &RatPoly) -> Result<bool> {
    match p.deg() {
        Some(n) if n >= 1 => Ok(n >= 2),
        _ => Err(Error::InvalidInput("expected a nonconstant polynomial".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn proportionality() {
        let a = CycleVector::from_ints(&[0, -1, -1, 0, 1, 1]);
        let b = CycleVector::from_ints(&[0, 2, 2, 0, -2, -2]);
        assert!(a.is_proportional_to(&b));
        assert!(!a.is_proportional_to(&CycleVector::from_ints(&[1, 0, 0, 0, 0, -1])));
        assert!(a.is_reduced());
    }

    #[test]
    fn combos() {
        let combo = VanishingCycleCombo { n_local: 2, coefficients: vec![(1, 2, 1)] };
        let v = vanishing_combo_to_cycle(&combo, &[3, 1], 4).unwrap();
        assert_eq!(v, CycleVector::from_ints(&[-1, 0, 1, 0]));
        let bad = VanishingCycleCombo { n_local: 2, coefficients: vec![(2, 1, 1)] };
        assert!(vanishing_combo_to_cycle(&bad, &[1, 2], 4).is_err());
        assert!(vanishing_combo_to_cycle(&combo, &[1, 1], 4).is_err());
    }
}
