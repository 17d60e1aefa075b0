use rug::Rational;
use serde::{Deserialize, Serialize};

use super::{divisors, w_adic, RatPoly};
use crate::error::{Error, Result};

/// P = outer ∘ inner with the inner factor monic and vanishing at 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub outer: RatPoly,
    pub inner: RatPoly,
}

impl Decomposition {
    pub fn outer_degree(&self) -> usize {
        self.outer.deg().unwrap_or(0)
    }

    pub fn inner_degree(&self) -> usize {
        self.inner.deg().unwrap_or(0)
    }

    pub fn compose(&self) -> RatPoly {
        self.outer.compose(&self.inner)
    }
}

/// (S)^(1/d) as a power series with constant term 1, truncated to `len` terms.
fn series_root(s: &[Rational], d: usize, len: usize) -> Vec<Rational> {
    let alpha = Rational::from((1, d as u64));
    let mut r = vec![Rational::new(); len];
    if len == 0 {
        return r;
    }
    r[0] = Rational::from(1);
    for k in 1..len {
        let mut acc = Rational::new();
        for j in 1..=k {
            let sj = s.get(j).cloned().unwrap_or_default();
            if sj == 0 {
                continue;
            }
            let factor = Rational::from(&alpha + 1) * j as u64 - Rational::from(k as u64);
            acc += factor * sj * &r[k - j];
        }
        r[k] = acc / k as u64;
    }
    r
}

/// Candidate inner factor of degree `m` from the top coefficients of P.
fn candidate_inner(p: &RatPoly, m: usize) -> RatPoly {
    let n = p.deg().expect("nonconstant");
    let d = n / m;
    let monic = p.monic();
    let s: Vec<Rational> = (0..m).map(|j| monic.coeff(n - j)).collect();
    let r = series_root(&s, d, m);
    let mut coeffs = vec![Rational::new(); m + 1];
    for (j, rj) in r.into_iter().enumerate() {
        coeffs[m - j] = rj;
    }
    RatPoly::new(coeffs)
}

fn decompose_with_inner_degree(p: &RatPoly, m: usize) -> Option<Decomposition> {
    let inner = candidate_inner(p, m);
    let digits = w_adic(p, &inner).ok()?;
    if digits.iter().any(|q| !q.is_constant()) {
        return None;
    }
    let outer = RatPoly::new(digits.iter().map(|q| q.constant_term()).collect());
    let dec = Decomposition { outer, inner };
    (dec.compose() == *p).then_some(dec)
}

/// All decompositions P = A ∘ W with W monic, W(0) = 0, ordered by increasing deg W.
/// Over Q there is at most one such W for each degree.
pub fn decompose_all(p: &RatPoly) -> Result<Vec<Decomposition>> {
    let n = match p.deg() {
        Some(n) if n >= 1 => n,
        _ => return Err(Error::InvalidInput("decomposition needs a nonconstant polynomial".into())),
    };
    Ok(divisors(n).into_iter().filter_map(|m| decompose_with_inner_degree(p, m)).collect())
}

/// Inner factors of all decompositions.
pub fn right_factors(p: &RatPoly) -> Result<Vec<RatPoly>> {
    Ok(decompose_all(p)?.into_iter().map(|d| d.inner).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::chebyshev;

    #[test]
    fn chebyshev_six() {
        let t6 = chebyshev(6).unwrap();
        let decs = decompose_all(&t6).unwrap();
        let inner_degrees: Vec<usize> = decs.iter().map(|d| d.inner_degree()).collect();
        assert_eq!(inner_degrees, vec![1, 2, 3, 6]);
        assert_eq!(decs[1].inner, RatPoly::from_ints(&[0, 0, 1]));
        assert_eq!(decs[2].inner, RatPoly::from_ints(&[0, -3, 0, 4]).monic());
        for d in &decs {
            assert_eq!(d.compose(), t6);
        }
    }

    #[test]
    fn indecomposable_quartic() {
        let p = RatPoly::from_ints(&[0, 1, 0, 1, 1]);
        let decs = decompose_all(&p).unwrap();
        assert_eq!(decs.len(), 2);
    }

    #[test]
    fn constant_rejected() {
        assert!(decompose_all(&RatPoly::from_ints(&[3])).is_err());
    }
}
