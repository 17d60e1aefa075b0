//! Exact solution spaces Z_{V_d}, Z_{U_d}, Z_δ of polynomials Q with
//! Σ v_i Q(x_i(z)) ≡ 0, together with independent verification oracles.

mod classify;
mod oracle;
mod puiseux;

use rug::Rational;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::cycles::{real_interval_to_coefficients, CycleVector, IntervalSystem, LevelCycle};
use crate::error::{Error, Result};
use crate::invariant::{decompose_v_delta, nonzero_pairings};
use crate::linalg::PolySpace;
use crate::monodromy::{DivisorLattice, MonodromyRep};
use crate::poly::{trace_poly, w_adic, RatPoly};

pub use classify::{classify, common_right_factor, pullback_outer, Case, ClassificationReport, Pullback};
pub use oracle::{verify_vanishing_numeric, FiberSamples, OracleReport};
pub use puiseux::{puiseux_expansion, puiseux_vanishes, PuiseuxExpansion};

/// How a basis element was obtained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum BasisTag {
    /// Zero trace along the relevant right factors.
    TraceKernel,
    /// A power of a right factor W.
    Pullback { factor_degree: usize, power: usize },
    /// Only found by the kernel computation.
    Mixed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisElement {
    pub poly: RatPoly,
    pub tag: BasisTag,
}

/// Basis of a solution space up to a degree bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionBasis {
    pub bound: usize,
    pub elements: Vec<BasisElement>,
}

impl SolutionBasis {
    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn polys(&self) -> Vec<RatPoly> {
        self.elements.iter().map(|e| e.poly.clone()).collect()
    }

    pub fn space(&self) -> PolySpace {
        PolySpace::span(&self.polys(), self.bound)
    }

    fn from_space(space: &PolySpace) -> Self {
        SolutionBasis {
            bound: space.bound(),
            elements: space.basis().iter().map(|p| BasisElement { poly: p.clone(), tag: BasisTag::Mixed }).collect(),
        }
    }
}

/// Constant traces of the W-adic digits of q; all zero iff q ∈ Z_{V_d} for W = W_d.
fn trace_conditions(q: &RatPoly, w: &RatPoly, bound: usize) -> Result<Vec<Rational>> {
    let m = w.deg().expect("nonconstant factor");
    let digits = w_adic(q, w)?;
    let mut out = vec![Rational::new(); bound / m + 1];
    for (j, digit) in digits.iter().enumerate() {
        let t = trace_poly(digit, w)?;
        if !t.is_constant() {
            return Err(Error::Consistency("trace of a W-adic digit is not constant".into()));
        }
        out[j] = t.constant_term();
    }
    Ok(out)
}

/// Removes from q its C[W]-parts along each factor in turn.
fn strip(q: &RatPoly, factors: &[&RatPoly]) -> Result<RatPoly> {
    let mut t = q.clone();
    for w in factors {
        let m = Rational::from(w.deg().expect("nonconstant factor") as u64);
        let s = trace_poly(&t, w)?.scale(&(Rational::from(1) / m));
        t = &t - &s.compose(w);
    }
    Ok(t)
}

fn monomial_conditions<F>(bound: usize, f: F) -> Result<Vec<Vec<Rational>>>
where
    F: Fn(&RatPoly) -> Result<Vec<Rational>>,
{
    // columns are monomials x^0..x^bound; rows are conditions
    let cols: Vec<Vec<Rational>> =
        (0..=bound).map(|k| f(&RatPoly::monomial(Rational::from(1), k))).collect::<Result<_>>()?;
    let rows = cols.first().map_or(0, Vec::len);
    Ok((0..rows).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect())
}

fn vd_conditions(lattice: &DivisorLattice, d: usize, bound: usize) -> Result<Vec<Vec<Rational>>> {
    let w = lattice.factor(d)?;
    monomial_conditions(bound, |q| trace_conditions(q, w, bound))
}

fn ud_conditions(lattice: &DivisorLattice, d: usize, bound: usize) -> Result<Vec<Vec<Rational>>> {
    let w = lattice.factor(d)?;
    let covered: Vec<usize> = lattice.covered_by(d);
    let factors: Vec<&RatPoly> = covered.iter().map(|&e| lattice.factor(e)).collect::<Result<_>>()?;
    monomial_conditions(bound, |q| trace_conditions(&strip(q, &factors)?, w, bound))
}

pub fn z_vd_space(lattice: &DivisorLattice, d: usize, bound: usize) -> Result<PolySpace> {
    Ok(PolySpace::from_conditions(&vd_conditions(lattice, d, bound)?, bound))
}

pub fn z_ud_space(lattice: &DivisorLattice, d: usize, bound: usize) -> Result<PolySpace> {
    Ok(PolySpace::from_conditions(&ud_conditions(lattice, d, bound)?, bound))
}

/// Z_δ as the common kernel over the components of V_δ.
pub fn z_delta_space(v: &CycleVector, lattice: &DivisorLattice, bound: usize) -> Result<PolySpace> {
    let dec = decompose_v_delta(v.entries(), lattice)?;
    if dec.components.is_empty() {
        return Ok(PolySpace::full(bound));
    }
    let mut cond = Vec::new();
    for &d in &dec.components {
        cond.extend(ud_conditions(lattice, d, bound)?);
    }
    Ok(PolySpace::from_conditions(&cond, bound))
}

fn pullback_candidates(w: &RatPoly, bound: usize) -> Vec<BasisElement> {
    let m = w.deg().expect("nonconstant");
    (0..=bound / m)
        .map(|j| BasisElement { poly: w.pow(j as u32), tag: BasisTag::Pullback { factor_degree: m, power: j } })
        .collect()
}

/// Reduces the tagged candidates to a basis of `target`, completing with kernel vectors.
fn tagged_basis(candidates: Vec<BasisElement>, target: &PolySpace) -> Result<SolutionBasis> {
    let bound = target.bound();
    let mut kept: Vec<BasisElement> = Vec::new();
    let mut span = PolySpace::zero(bound);
    for c in candidates {
        if c.poly.deg().is_some_and(|d| d > bound) || span.contains(&c.poly) {
            continue;
        }
        if !target.contains(&c.poly) {
            return Err(Error::Consistency(format!("candidate {} lies outside the kernel", c.poly)));
        }
        span = span.with(std::slice::from_ref(&c.poly));
        kept.push(c);
    }
    for p in target.basis() {
        if !span.contains(p) {
            span = span.with(std::slice::from_ref(p));
            kept.push(BasisElement { poly: p.clone(), tag: BasisTag::Mixed });
        }
    }
    Ok(SolutionBasis { bound, elements: kept })
}

pub fn z_vd_basis(lattice: &DivisorLattice, d: usize, bound: usize) -> Result<SolutionBasis> {
    let space = z_vd_space(lattice, d, bound)?;
    Ok(SolutionBasis {
        bound,
        elements: space
            .basis()
            .iter()
            .map(|p| BasisElement { poly: p.clone(), tag: BasisTag::TraceKernel })
            .collect(),
    })
}

/// Z_{U_d} = Z_{V_d} + Σ C[W_e] over the members e covered by d, cross-checked
/// against the kernel of the stripped trace conditions.
pub fn z_ud_basis(lattice: &DivisorLattice, d: usize, bound: usize) -> Result<SolutionBasis> {
    let target = z_ud_space(lattice, d, bound)?;
    let mut candidates = z_vd_basis(lattice, d, bound)?.elements;
    for e in lattice.covered_by(d) {
        candidates.extend(pullback_candidates(lattice.factor(e)?, bound));
    }
    tagged_basis(candidates, &target)
}

/// Members e with δ ⊥ V_e, i.e. every r with (n/e) | r pairs to zero.
pub fn orthogonal_members(v: &CycleVector, lattice: &DivisorLattice) -> Result<Vec<usize>> {
    let n = lattice.degree;
    let nonzero = nonzero_pairings(v.entries())?;
    Ok(lattice
        .members
        .iter()
        .copied()
        .filter(|&e| e != n && nonzero.iter().all(|r| r % (n / e) != 0))
        .collect())
}

pub fn z_delta_basis(v: &CycleVector, lattice: &DivisorLattice, bound: usize) -> Result<SolutionBasis> {
    if v.len() != lattice.degree {
        return Err(Error::InvalidInput(format!(
            "cycle has {} entries, polynomial has degree {}",
            v.len(),
            lattice.degree
        )));
    }
    let dec = decompose_v_delta(v.entries(), lattice)?;
    if dec.components.len() == 1 {
        return z_ud_basis(lattice, dec.components[0], bound);
    }
    let target = z_delta_space(v, lattice, bound)?;
    if dec.components.is_empty() {
        return Ok(SolutionBasis::from_space(&target));
    }
    // common trace kernel, then pullbacks along factors orthogonal to δ
    let mut cond = Vec::new();
    for &d in &dec.components {
        cond.extend(vd_conditions(lattice, d, bound)?);
    }
    let common = PolySpace::from_conditions(&cond, bound);
    let mut candidates: Vec<BasisElement> = common
        .basis()
        .iter()
        .map(|p| BasisElement { poly: p.clone(), tag: BasisTag::TraceKernel })
        .collect();
    for e in orthogonal_members(v, lattice)? {
        candidates.extend(pullback_candidates(lattice.factor(e)?, bound));
    }
    tagged_basis(candidates, &target)
}

/// Exact membership q ∈ Z_δ.
pub fn vanishes_exactly(v: &CycleVector, lattice: &DivisorLattice, q: &RatPoly) -> Result<bool> {
    let bound = q.deg().unwrap_or(0);
    Ok(z_delta_space(v, lattice, bound)?.contains(q))
}

/// Solutions of a weighted real moment problem: Q with ∫_δ Q constant for every level cycle.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MomentSolution {
    pub cycles: Vec<LevelCycle>,
    pub basis: SolutionBasis,
}

pub fn solve_moment_problem(
    p: &RatPoly,
    system: &IntervalSystem,
    bound: usize,
    rep: &MonodromyRep,
    lattice: &DivisorLattice,
    cfg: &Config,
) -> Result<MomentSolution> {
    let cycles = real_interval_to_coefficients(p, system, rep, cfg)?;
    let mut space = PolySpace::full(bound);
    let one = RatPoly::one();
    let mut single: Option<CycleVector> = None;
    let mut distinct = 0;
    for lc in &cycles {
        if lc.cycle.is_zero() {
            continue;
        }
        if single.as_ref().is_none_or(|s| !lc.cycle.is_proportional_to(s)) {
            distinct += 1;
            single = Some(lc.cycle.clone());
        }
        let z = z_delta_space(&lc.cycle, lattice, bound)?.with(std::slice::from_ref(&one));
        space = space.intersect(&z);
    }
    let basis = match (&single, distinct) {
        (Some(v), 1) if v.is_reduced() => z_delta_basis(v, lattice, bound)?,
        _ => SolutionBasis::from_space(&space),
    };
    if basis.space() != space {
        return Err(Error::Consistency("moment solution bases disagree".into()));
    }
    Ok(MomentSolution { cycles, basis })
}
