//! Invariant subspaces of Q^n under the monodromy group and the decomposition
//! of the smallest invariant subspace containing a cycle.

use std::collections::BTreeMap;

use rug::Rational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{kernel, rank};
use crate::monodromy::DivisorLattice;
use crate::poly::{cyclotomic_divides, RatPoly};

/// Exact test of Σ_i v_i ε^{(i-1)k} = 0 for ε a primitive n-th root of unity.
pub fn pairing_is_zero(v: &[Rational], k: usize) -> Result<bool> {
    let n = v.len();
    if n == 0 {
        return Err(Error::InvalidInput("empty cycle vector".into()));
    }
    let mut coeffs = vec![Rational::new(); n];
    for (i, vi) in v.iter().enumerate() {
        coeffs[(i * (k % n)) % n] += vi;
    }
    Ok(cyclotomic_divides(n, &RatPoly::new(coeffs)))
}

/// Exponents r in 1..n with a nonzero pairing.
pub fn nonzero_pairings(v: &[Rational]) -> Result<Vec<usize>> {
    let n = v.len();
    let mut out = Vec::new();
    for r in 1..=n {
        if !pairing_is_zero(v, r)? {
            out.push(r);
        }
    }
    Ok(out)
}

/// V_δ = ⊕ U_d over the listed components.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceDecomposition {
    pub degree: usize,
    pub components: Vec<usize>,
    /// dim U_d for each component.
    pub dims: BTreeMap<usize, usize>,
    pub nonzero_exponents: Vec<usize>,
}

impl SubspaceDecomposition {
    pub fn dim(&self) -> usize {
        self.dims.values().sum()
    }
}

fn check_degree(v: &[Rational], lattice: &DivisorLattice) -> Result<()> {
    if v.len() != lattice.degree {
        return Err(Error::InvalidInput(format!(
            "cycle has {} entries but the polynomial has degree {}",
            v.len(),
            lattice.degree
        )));
    }
    Ok(())
}

pub fn decompose_v_delta(v: &[Rational], lattice: &DivisorLattice) -> Result<SubspaceDecomposition> {
    check_degree(v, lattice)?;
    let nonzero = nonzero_pairings(v)?;
    let mut components = Vec::new();
    let mut dims = BTreeMap::new();
    for &d in &lattice.members {
        let psi = lattice.psi(d)?;
        if psi.iter().any(|r| nonzero.contains(r)) {
            components.push(d);
            dims.insert(d, psi.len());
        }
    }
    Ok(SubspaceDecomposition { degree: lattice.degree, components, dims, nonzero_exponents: nonzero })
}

/// Rational basis of V_d: indicators of the residue classes mod d.
pub fn v_d_basis(d: usize, n: usize) -> Result<Vec<Vec<Rational>>> {
    if d == 0 || n % d != 0 {
        return Err(Error::InvalidInput(format!("{d} does not divide {n}")));
    }
    Ok((0..d)
        .map(|c| (0..n).map(|i| Rational::from(u32::from(i % d == c))).collect())
        .collect())
}

/// Rational basis of U_d = V_d ∩ (Σ_{e covered by d} V_e)^⊥.
pub fn u_d_basis(d: usize, lattice: &DivisorLattice) -> Result<Vec<Vec<Rational>>> {
    if !lattice.contains(d) {
        return Err(Error::NotInLattice(d));
    }
    let n = lattice.degree;
    let vd = v_d_basis(d, n)?;
    let mut conditions: Vec<Vec<Rational>> = Vec::new();
    for e in lattice.covered_by(d) {
        for ind in v_d_basis(e, n)? {
            // pairing of Σ a_c e_{c,d} with an indicator of a class mod e
            conditions.push(
                vd.iter()
                    .map(|b| b.iter().zip(&ind).map(|(x, y)| Rational::from(x * y)).sum())
                    .collect(),
            );
        }
    }
    Ok(kernel(&conditions, d)
        .into_iter()
        .map(|a| {
            (0..n)
                .map(|i| a.iter().zip(&vd).map(|(ac, b)| Rational::from(ac * &b[i])).sum())
                .collect()
        })
        .collect())
}

/// |Ψ_d| next to the exact dimension of U_d; they must agree.
pub fn u_d_dimension_table(lattice: &DivisorLattice) -> Result<BTreeMap<usize, usize>> {
    let mut table = BTreeMap::new();
    for &d in &lattice.members {
        let psi = lattice.psi(d)?.len();
        let basis = u_d_basis(d, lattice)?;
        let exact = rank(&basis, lattice.degree);
        if exact != psi {
            return Err(Error::Consistency(format!("dim U_{d} = {exact} but |Ψ_{d}| = {psi}")));
        }
        table.insert(d, psi);
    }
    Ok(table)
}

pub fn bilinear(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| Rational::from(x * y)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::chebyshev;

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| Rational::from(x)).collect()
    }

    #[test]
    fn chebyshev_examples() {
        let lat = DivisorLattice::algebraic(&chebyshev(6).unwrap()).unwrap();
        let d1 = decompose_v_delta(&v(&[0, -1, -1, 0, 1, 1]), &lat).unwrap();
        assert_eq!(d1.components, vec![6]);
        assert_eq!(d1.dim(), 2);
        let d2 = decompose_v_delta(&v(&[1, -1, 1, -1, 1, -1]), &lat).unwrap();
        assert_eq!(d2.components, vec![2]);
        assert_eq!(d2.dim(), 1);
        assert_eq!(u_d_dimension_table(&lat).unwrap(), BTreeMap::from([(1, 1), (2, 1), (3, 2), (6, 2)]));
    }

    #[test]
    fn alternating_vector_pairs_only_at_half() {
        let w = v(&[1, -1, 1, -1, 1, -1]);
        let nz: Vec<usize> = (1..=6).filter(|&k| !pairing_is_zero(&w, k).unwrap()).collect();
        assert_eq!(nz, vec![3]);
    }
}
