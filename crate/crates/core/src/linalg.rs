//! Exact linear algebra over Q and subspaces of polynomials of bounded degree.

use rug::Rational;

use crate::poly::RatPoly;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(rows: &mut Vec<Vec<Rational>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][col] != 0) else { continue };
        rows.swap(r, pr);
        let inv = Rational::from(1) / rows[r][col].clone();
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col] == 0 {
                continue;
            }
            let f = row[col].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if *p != 0 {
                    *v -= Rational::from(&f * p);
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank(rows: &[Vec<Rational>], ncols: usize) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, ncols).len()
}

/// Basis of {x : A x = 0}.
pub fn kernel(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::new(); ncols];
            v[f] = Rational::from(1);
            for (row, &pc) in m.iter().zip(&pivots) {
                v[pc] = Rational::from(-&row[f]);
            }
            v
        })
        .collect()
}

/// Subspace of polynomials of degree at most `bound`, kept in a canonical basis:
/// each element has a distinct leading degree, is monic, and has zero coefficient
/// at the leading degrees of the others. Elements are sorted by degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolySpace {
    bound: usize,
    basis: Vec<RatPoly>,
}

impl PolySpace {
    pub fn zero(bound: usize) -> Self {
        PolySpace { bound, basis: Vec::new() }
    }

    pub fn full(bound: usize) -> Self {
        PolySpace { bound, basis: (0..=bound).map(|k| RatPoly::monomial(Rational::from(1), k)).collect() }
    }

    /// Span of `polys`; elements above the bound are rejected by the caller.
    pub fn span(polys: &[RatPoly], bound: usize) -> Self {
        let n = bound + 1;
        let mut rows: Vec<Vec<Rational>> = polys
            .iter()
            .map(|p| {
                debug_assert!(p.deg().is_none_or(|d| d <= bound));
                (0..n).rev().map(|k| p.coeff(k)).collect()
            })
            .collect();
        rref(&mut rows, n);
        let mut basis: Vec<RatPoly> = rows
            .into_iter()
            .map(|row| RatPoly::new(row.into_iter().rev().collect()))
            .collect();
        basis.sort_by_key(|p| p.deg());
        PolySpace { bound, basis }
    }

    /// Space cut out by linear functionals given as coefficient rows of length bound + 1.
    pub fn from_conditions(conditions: &[Vec<Rational>], bound: usize) -> Self {
        let ker = kernel(conditions, bound + 1);
        let polys: Vec<RatPoly> = ker.into_iter().map(RatPoly::new).collect();
        PolySpace::span(&polys, bound)
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[RatPoly] {
        &self.basis
    }

    pub fn contains(&self, q: &RatPoly) -> bool {
        if q.deg().is_some_and(|d| d > self.bound) {
            return false;
        }
        let mut all = self.basis.clone();
        all.push(q.clone());
        PolySpace::span(&all, self.bound).dim() == self.dim()
    }

    pub fn contains_space(&self, other: &PolySpace) -> bool {
        let mut all = self.basis.clone();
        all.extend(other.basis.iter().cloned());
        PolySpace::span(&all, self.bound.max(other.bound)).dim() == self.dim()
    }

    /// Functionals vanishing exactly on this space.
    pub fn annihilator(&self) -> Vec<Vec<Rational>> {
        let rows: Vec<Vec<Rational>> = self.basis.iter().map(|p| p.to_vec(self.bound + 1)).collect();
        kernel(&rows, self.bound + 1)
    }

    pub fn intersect(&self, other: &PolySpace) -> PolySpace {
        assert_eq!(self.bound, other.bound);
        let mut cond = self.annihilator();
        cond.extend(other.annihilator());
        PolySpace::from_conditions(&cond, self.bound)
    }

    pub fn sum(&self, other: &PolySpace) -> PolySpace {
        let mut all = self.basis.clone();
        all.extend(other.basis.iter().cloned());
        PolySpace::span(&all, self.bound.max(other.bound))
    }

    pub fn with(&self, extra: &[RatPoly]) -> PolySpace {
        let mut all = self.basis.clone();
        all.extend(extra.iter().cloned());
        PolySpace::span(&all, self.bound)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from(n)
    }

    #[test]
    fn kernel_of_rank_one() {
        let rows = vec![vec![q(1), q(2), q(3)]];
        let k = kernel(&rows, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            let dot: Rational = rows[0].iter().zip(v).map(|(a, b)| Rational::from(a * b)).sum();
            assert_eq!(dot, 0);
        }
    }

    #[test]
    fn canonical_basis_is_unique() {
        let a = PolySpace::span(&[RatPoly::from_ints(&[1, 1]), RatPoly::from_ints(&[0, 0, 1])], 3);
        let b = PolySpace::span(
            &[RatPoly::from_ints(&[2, 2, 3]), RatPoly::from_ints(&[-1, -1, 1]), RatPoly::from_ints(&[0, 0, 5])],
            3,
        );
        assert_eq!(a, b);
        assert!(a.contains(&RatPoly::from_ints(&[3, 3, -7])));
        assert!(!a.contains(&RatPoly::x()));
    }

    #[test]
    fn intersection() {
        let a = PolySpace::span(&[RatPoly::from_ints(&[1]), RatPoly::from_ints(&[0, 1])], 2);
        let b = PolySpace::span(&[RatPoly::from_ints(&[0, 1]), RatPoly::from_ints(&[0, 0, 1])], 2);
        let c = a.intersect(&b);
        assert_eq!(c.basis(), &[RatPoly::x()]);
    }
}
