use rug::Rational;
use serde::{Deserialize, Serialize};

use super::{orthogonal_members, strip, z_delta_space, z_vd_space};
use crate::cycles::CycleVector;
use crate::error::{Error, Result};
use crate::invariant::decompose_v_delta;
use crate::monodromy::DivisorLattice;
use crate::poly::{right_factors, trace_poly, w_adic, RatPoly};

/// S with q = S ∘ w, if q ∈ C[w].
pub fn pullback_outer(q: &RatPoly, w: &RatPoly) -> Result<Option<RatPoly>> {
    let digits = w_adic(q, w)?;
    if digits.iter().any(|d| !d.is_constant()) {
        return Ok(None);
    }
    Ok(Some(RatPoly::new(digits.iter().map(RatPoly::constant_term).collect())))
}

/// Largest-degree right factor h of f with deg h ≥ 2 and g ∈ C[h].
pub fn common_right_factor(f: &RatPoly, g: &RatPoly) -> Result<Option<RatPoly>> {
    if f.deg().is_none_or(|d| d < 2) {
        return Err(Error::InvalidInput("common right factor needs deg f ≥ 2".into()));
    }
    let mut factors = right_factors(f)?;
    factors.retain(|w| w.deg().is_some_and(|d| d >= 2));
    factors.sort_by_key(|w| std::cmp::Reverse(w.deg()));
    for w in factors {
        if pullback_outer(g, &w)?.is_some() {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Case {
    /// Q ∈ C[P] and δ reduced.
    PolynomialInP,
    /// δ is a multiple of the whole fiber.
    ScalarFullFiber,
    /// Q = Σ S_i ∘ W_i.
    PullbackSum,
    /// Q = Σ S_i ∘ W_i with every pushed-forward cycle reduced.
    PullbackSumReduced,
    General,
    NonVanishing,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pullback {
    pub factor: RatPoly,
    pub outer: RatPoly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub case: Case,
    pub vanishes: bool,
    pub components: Vec<usize>,
    pub pullbacks: Vec<Pullback>,
    /// q − Σ S_i ∘ W_i; lies in Z_δ and has zero trace along every listed factor.
    pub remainder: RatPoly,
    /// Whether the remainder lies in Z_{V_d} for every component d.
    pub remainder_in_trace_kernel: bool,
}

fn is_indecomposable(lattice: &DivisorLattice) -> bool {
    lattice.members.len() <= 2
}

/// Residue classes r with (n/e) | r for some orthogonal e; the p4 hypothesis asks
/// that these are exactly the r with a zero pairing.
fn orthogonal_classes_match(v: &CycleVector, lattice: &DivisorLattice, orth: &[usize]) -> Result<bool> {
    let n = lattice.degree;
    let nonzero = crate::invariant::nonzero_pairings(v.entries())?;
    Ok((1..=n).all(|r| {
        let zero = !nonzero.contains(&r);
        let covered = orth.iter().any(|&e| r % (n / e) == 0);
        zero == covered
    }))
}

pub fn classify(v: &CycleVector, q: &RatPoly, lattice: &DivisorLattice) -> Result<ClassificationReport> {
    let n = lattice.degree;
    if v.len() != n {
        return Err(Error::InvalidInput("cycle length differs from deg P".into()));
    }
    let bound = q.deg().unwrap_or(0);
    let dec = decompose_v_delta(v.entries(), lattice)?;
    let target = z_delta_space(v, lattice, bound)?;
    let vanishes = target.contains(q);

    // greedy stripping along factors orthogonal to δ, largest factor first
    let orth = orthogonal_members(v, lattice)?;
    let mut rest = q.clone();
    let mut pullbacks = Vec::new();
    for &e in &orth {
        let w = lattice.factor(e)?;
        let m = Rational::from(w.deg().expect("nonconstant") as u64);
        let s = trace_poly(&rest, w)?.scale(&(Rational::from(1) / m));
        if s.is_zero() {
            continue;
        }
        rest = &rest - &s.compose(w);
        pullbacks.push(Pullback { factor: w.clone(), outer: s });
    }

    let mut in_kernel = true;
    for &d in &dec.components {
        in_kernel &= z_vd_space(lattice, d, bound)?.contains(&rest);
    }

    let case = if !vanishes {
        Case::NonVanishing
    } else if is_indecomposable(lattice) && !v.is_reduced() && v.is_proportional_to(&CycleVector::from_ints(&vec![1; n])) {
        Case::ScalarFullFiber
    } else if dec.components.iter().all(|&d| d != 1) && dec.components.len() + 1 == lattice.members.len() {
        Case::PolynomialInP
    } else if dec.components.contains(&n) {
        Case::PullbackSum
    } else if orthogonal_classes_match(v, lattice, &orth)? {
        Case::PullbackSumReduced
    } else {
        Case::General
    };

    if vanishes {
        let recomposed = pullbacks.iter().fold(rest.clone(), |acc, pb| &acc + &pb.outer.compose(&pb.factor));
        let factors: Vec<&RatPoly> = pullbacks.iter().map(|pb| &pb.factor).collect();
        if recomposed != *q || !target.contains(&rest) || strip(&rest, &factors)? != rest {
            return Err(Error::Consistency("classification certificate does not re-verify".into()));
        }
        if matches!(case, Case::PolynomialInP | Case::PullbackSum | Case::PullbackSumReduced) && !rest.is_zero() {
            return Err(Error::Consistency(format!("expected a pure pullback sum, remainder {rest}")));
        }
    }

    Ok(ClassificationReport {
        case,
        vanishes,
        components: dec.components,
        pullbacks,
        remainder: rest,
        remainder_in_trace_kernel: in_kernel,
    })
}
