use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{MonodromyRep, Permutation};
use crate::error::{Error, Result};
use crate::poly::{decompose_all, divisors, Decomposition, RatPoly};

/// Divisors d of n whose residue classes mod d are blocks of the monodromy group,
/// with the covering relation and a decomposition witnessing each member.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorLattice {
    pub degree: usize,
    pub members: Vec<usize>,
    /// Pairs (d, e): d covers e.
    pub covers: Vec<(usize, usize)>,
    /// Member d is witnessed by P = A ∘ W with deg A = d.
    pub witnesses: BTreeMap<usize, Decomposition>,
}

impl DivisorLattice {
    /// Lattice read off the decompositions of P alone.
    pub fn algebraic(p: &RatPoly) -> Result<Self> {
        let n = p.deg().filter(|&n| n >= 1).ok_or_else(|| {
            Error::InvalidInput("lattice needs a nonconstant polynomial".into())
        })?;
        let witnesses: BTreeMap<usize, Decomposition> =
            decompose_all(p)?.into_iter().map(|d| (d.outer_degree(), d)).collect();
        let members: Vec<usize> = witnesses.keys().copied().collect();
        Ok(DivisorLattice { degree: n, covers: covering_pairs(&members), members, witnesses })
    }

    pub fn contains(&self, d: usize) -> bool {
        self.members.contains(&d)
    }

    /// Members covered by d.
    pub fn covered_by(&self, d: usize) -> Vec<usize> {
        self.covers.iter().filter(|(a, _)| *a == d).map(|(_, b)| *b).collect()
    }

    /// Right factor W with deg W = n/d, i.e. P = A ∘ W with deg A = d.
    pub fn factor(&self, d: usize) -> Result<&RatPoly> {
        self.witnesses.get(&d).map(|w| &w.inner).ok_or(Error::NotInLattice(d))
    }

    pub fn witness(&self, d: usize) -> Result<&Decomposition> {
        self.witnesses.get(&d).ok_or(Error::NotInLattice(d))
    }

    /// Ψ_d: exponents r in 1..n with (n/d) | r and (n/e) ∤ r for every e covered by d.
    pub fn psi(&self, d: usize) -> Result<Vec<usize>> {
        if !self.contains(d) {
            return Err(Error::NotInLattice(d));
        }
        let n = self.degree;
        let covered = self.covered_by(d);
        Ok((1..=n)
            .filter(|r| r % (n / d) == 0 && covered.iter().all(|e| r % (n / e) != 0))
            .collect())
    }

    pub fn psi_table(&self) -> BTreeMap<usize, Vec<usize>> {
        self.members.iter().map(|&d| (d, self.psi(d).expect("member"))).collect()
    }
}

fn covering_pairs(members: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for &d in members {
        for &e in members {
            if e < d && d % e == 0 {
                let between = members.iter().any(|&l| l != d && l != e && d % l == 0 && l % e == 0);
                if !between {
                    out.push((d, e));
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// Whether the residue classes mod d are blocks of every generator.
pub fn residues_are_blocks(gens: &[Permutation], n: usize, d: usize) -> bool {
    gens.iter().all(|g| (0..n).all(|i| (g.apply(i) % d) == (g.apply((i + d) % n) % d)))
}

/// Lattice from the monodromy group, cross-checked against the decompositions of P.
pub fn divisor_lattice(rep: &MonodromyRep, p: &RatPoly) -> Result<DivisorLattice> {
    let n = rep.degree();
    let alg = DivisorLattice::algebraic(p)?;
    if alg.degree != n {
        return Err(Error::InvalidInput("polynomial degree differs from the representation".into()));
    }
    let members: Vec<usize> =
        divisors(n).into_iter().filter(|&d| residues_are_blocks(&rep.generators, n, d)).collect();
    if members != alg.members {
        return Err(Error::Consistency(format!(
            "block divisors {members:?} disagree with decomposition degrees {:?}",
            alg.members
        )));
    }
    Ok(alg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::chebyshev;

    #[test]
    fn chebyshev_six_psi() {
        let lat = DivisorLattice::algebraic(&chebyshev(6).unwrap()).unwrap();
        assert_eq!(lat.members, vec![1, 2, 3, 6]);
        assert_eq!(lat.covers, vec![(2, 1), (3, 1), (6, 2), (6, 3)]);
        let t = lat.psi_table();
        assert_eq!(t[&1], vec![6]);
        assert_eq!(t[&2], vec![3]);
        assert_eq!(t[&3], vec![2, 4]);
        assert_eq!(t[&6], vec![1, 5]);
        assert!(matches!(lat.psi(4), Err(Error::NotInLattice(4))));
    }
}
