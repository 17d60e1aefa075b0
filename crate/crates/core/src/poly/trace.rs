use rug::Rational;

use super::RatPoly;
use crate::error::{Error, Result};

/// Σ_i q(x_i(z)) over the n roots of w(x) = z, as a polynomial in z.
/// Computed with Newton's identities over Q[z].
pub fn trace_poly(q: &RatPoly, w: &RatPoly) -> Result<RatPoly> {
    let m = match w.deg() {
        Some(m) if m >= 1 => m,
        _ => return Err(Error::InvalidInput("trace needs a nonconstant polynomial".into())),
    };
    let lc = w.leading();
    let z = RatPoly::x();
    // coefficients of the monic polynomial (w(x) - z)/lc, as polynomials in z
    let mut c: Vec<RatPoly> = (0..m).map(|j| RatPoly::constant(w.coeff(j) / lc.clone())).collect();
    c[0] = &c[0] - &z.scale(&(Rational::from(1) / &lc));
    // elementary symmetric functions e_1..e_m
    let e: Vec<RatPoly> = (1..=m)
        .map(|j| if j % 2 == 0 { c[m - j].clone() } else { -&c[m - j] })
        .collect();
    let top = q.deg().unwrap_or(0);
    let mut power_sums: Vec<RatPoly> = vec![RatPoly::constant(Rational::from(m as u64))];
    for k in 1..=top {
        let mut acc = RatPoly::zero();
        for i in 1..=k.min(m) {
            let term = if i == k {
                e[i - 1].scale(&Rational::from(k as u64))
            } else {
                &e[i - 1] * &power_sums[k - i]
            };
            acc = if i % 2 == 1 { &acc + &term } else { &acc - &term };
        }
        power_sums.push(acc);
    }
    let mut total = RatPoly::zero();
    for (k, qk) in q.coeffs().iter().enumerate() {
        if *qk != 0 {
            total = &total + &power_sums[k].scale(qk);
        }
    }
    Ok(total)
}

/// Digits of q in base w: q = Σ_j q_j w^j with deg q_j < deg w.
pub fn w_adic(q: &RatPoly, w: &RatPoly) -> Result<Vec<RatPoly>> {
    match w.deg() {
        Some(m) if m >= 1 => {}
        _ => return Err(Error::InvalidInput("w-adic expansion needs a nonconstant base".into())),
    }
    let mut digits = Vec::new();
    let mut rest = q.clone();
    while !rest.is_zero() {
        let (quot, rem) = rest.div_rem(w)?;
        digits.push(rem);
        rest = quot;
    }
    Ok(digits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::chebyshev;

    #[test]
    fn power_sums_of_chebyshev_three() {
        let t3 = chebyshev(3).unwrap();
        assert_eq!(trace_poly(&RatPoly::x(), &t3).unwrap(), RatPoly::zero());
        assert_eq!(
            trace_poly(&RatPoly::from_ints(&[0, 0, 1]), &t3).unwrap(),
            RatPoly::constant(Rational::from((3, 2)))
        );
    }

    #[test]
    fn trace_of_composite_is_multiple() {
        let w = RatPoly::from_ints(&[0, 1, 0, 2]);
        let s = RatPoly::from_ints(&[1, -2, 3]);
        let t = trace_poly(&s.compose(&w), &w).unwrap();
        assert_eq!(t, s.scale(&Rational::from(3)));
    }

    #[test]
    fn digits() {
        let w = RatPoly::from_ints(&[0, 0, 1]);
        let d = w_adic(&w.pow(3), &w).unwrap();
        assert_eq!(d.len(), 4);
        assert!(d[..3].iter().all(|q| q.is_zero()));
        assert!(w_adic(&RatPoly::zero(), &w).unwrap().is_empty());
    }
}
