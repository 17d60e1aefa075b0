//! Exact Puiseux expansion of Σ v_i Q(x_i(z)) at infinity.
//!
//! With u^n = z / lc and w = 1/u the roots are x = u·Y(ε^{-k} w) for the unique power
//! series Y(w) = 1 + O(w) solving Y^n + Σ_{j<n} (a_j/lc) w^{n-j} Y^j = 1. Then
//! Q(x_i) = Σ_k s_k (ε^{i-1} u)^{-k} and the cycle integral vanishes iff every
//! nonzero s_k meets a zero pairing (v, w_k).

use std::collections::BTreeMap;

use rug::Rational;
use serde::{Deserialize, Serialize};

use crate::cycles::CycleVector;
use crate::error::{Error, Result};
use crate::invariant::pairing_is_zero;
use crate::poly::RatPoly;

type Series = Vec<Rational>;

fn mul(a: &[Rational], b: &[Rational], len: usize) -> Series {
    let mut out = vec![Rational::new(); len];
    for (i, ai) in a.iter().enumerate().take(len) {
        if *ai == 0 {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(len - i) {
            out[i + j] += Rational::from(ai * bj);
        }
    }
    out
}

fn inverse(a: &[Rational], len: usize) -> Series {
    let inv0 = Rational::from(1) / &a[0];
    let mut out = vec![Rational::new(); len];
    out[0] = inv0.clone();
    for k in 1..len {
        let mut acc = Rational::new();
        for j in 1..=k.min(a.len() - 1) {
            acc += Rational::from(&a[j] * &out[k - j]);
        }
        out[k] = -acc * &inv0;
    }
    out
}

fn powers(y: &[Rational], upto: usize, len: usize) -> Vec<Series> {
    let mut out = Vec::with_capacity(upto + 1);
    let mut cur = vec![Rational::new(); len];
    cur[0] = Rational::from(1);
    out.push(cur.clone());
    for _ in 0..upto {
        cur = mul(&cur, y, len);
        out.push(cur.clone());
    }
    out
}

/// Y(w) to `len` terms.
fn root_series(p: &RatPoly, len: usize) -> Series {
    let n = p.deg().expect("nonconstant");
    let lc = p.leading();
    let c: Vec<Rational> = (0..n).map(|j| Rational::from(&p.coeff(j) / &lc)).collect();
    let mut y = vec![Rational::new(); len];
    y[0] = Rational::from(1);
    loop {
        let pw = powers(&y, n, len);
        let mut g = pw[n].clone();
        g[0] -= 1;
        let mut dg: Series = pw[n - 1].iter().map(|t| Rational::from(t * n as u64)).collect();
        for (j, cj) in c.iter().enumerate() {
            if *cj == 0 {
                continue;
            }
            let shift = n - j;
            for m in shift..len {
                g[m] += Rational::from(cj * &pw[j][m - shift]);
                if j >= 1 {
                    dg[m] += Rational::from(cj * &pw[j - 1][m - shift]) * j as u64;
                }
            }
        }
        if g.iter().all(|t| *t == 0) {
            return y;
        }
        let corr = mul(&g, &inverse(&dg, len), len);
        for (yi, ci) in y.iter_mut().zip(corr) {
            *yi -= ci;
        }
    }
}

/// Coefficients s_k of u^{-k} in Q(u·Y(1/u)), for -deg Q ≤ k ≤ k_max.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PuiseuxExpansion {
    pub degree: usize,
    #[serde(with = "rational_map")]
    pub coefficients: BTreeMap<i64, Rational>,
}

mod rational_map {
    use std::collections::BTreeMap;

    use rug::Rational;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &BTreeMap<i64, Rational>, s: S) -> Result<S::Ok, S::Error> {
        let strings: BTreeMap<i64, String> = m.iter().map(|(k, v)| (*k, v.to_string())).collect();
        strings.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<i64, Rational>, D::Error> {
        let strings = BTreeMap::<i64, String>::deserialize(d)?;
        strings
            .into_iter()
            .map(|(k, v)| {
                crate::poly::parse_rational(&v).map(|r| (k, r)).map_err(serde::de::Error::custom)
            })
            .collect()
    }
}

pub fn puiseux_expansion(p: &RatPoly, q: &RatPoly, k_max: i64) -> Result<PuiseuxExpansion> {
    let n = p.deg().filter(|&n| n >= 1).ok_or_else(|| Error::InvalidInput("P must be nonconstant".into()))?;
    let dq = q.deg().unwrap_or(0);
    if k_max < -(dq as i64) {
        return Err(Error::InvalidInput("expansion order below -deg Q".into()));
    }
    let len = (k_max + dq as i64 + 1) as usize;
    let y = root_series(p, len);
    let pw = powers(&y, dq, len);
    let mut coefficients = BTreeMap::new();
    for k in -(dq as i64)..=k_max {
        let mut s = Rational::new();
        for (j, qj) in q.coeffs().iter().enumerate() {
            let m = k + j as i64;
            if m >= 0 {
                s += Rational::from(qj * &pw[j][m as usize]);
            }
        }
        coefficients.insert(k, s);
    }
    Ok(PuiseuxExpansion { degree: n, coefficients })
}

/// Truncated criterion: no nonzero s_k with a nonzero pairing, for k up to n(deg Q + 2).
pub fn puiseux_vanishes(p: &RatPoly, v: &CycleVector, q: &RatPoly) -> Result<bool> {
    let n = p.deg().unwrap_or(0);
    if v.len() != n {
        return Err(Error::InvalidInput("cycle length differs from deg P".into()));
    }
    let k_max = (n * (q.deg().unwrap_or(0) + 2)) as i64;
    let exp = puiseux_expansion(p, q, k_max)?;
    for (k, s) in &exp.coefficients {
        if *s != 0 && !pairing_is_zero(v.entries(), k.rem_euclid(n as i64) as usize)? {
            return Ok(false);
        }
    }
    Ok(true)
}
