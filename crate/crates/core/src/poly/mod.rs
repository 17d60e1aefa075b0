//! Exact univariate polynomials over Q.

mod decompose;
mod trace;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::{Complex, Float, Rational};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use decompose::{decompose_all, right_factors, Decomposition};
pub use trace::{trace_poly, w_adic};

/// Degree of a polynomial; the zero polynomial has degree minus infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(usize),
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// Dense polynomial with rational coefficients, lowest degree first.
/// The coefficient vector never has a trailing zero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RatPoly {
    coeffs: Vec<Rational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| *c == 0) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        RatPoly::new(coeffs.iter().map(|&c| Rational::from(c)).collect())
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        RatPoly::constant(Rational::from(1))
    }

    pub fn x() -> Self {
        RatPoly::from_ints(&[0, 1])
    }

    pub fn constant(c: Rational) -> Self {
        RatPoly::new(vec![c])
    }

    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut coeffs = vec![Rational::new(); k + 1];
        coeffs[k] = c;
        RatPoly::new(coeffs)
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::NegInfinity,
            n => Degree::Finite(n - 1),
        }
    }

    /// Degree as an option, `None` for the zero polynomial.
    pub fn deg(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(0)
    }

    pub fn scale(&self, c: &Rational) -> RatPoly {
        if *c == 0 {
            return RatPoly::zero();
        }
        RatPoly { coeffs: self.coeffs.iter().map(|a| Rational::from(a * c)).collect() }
    }

    pub fn monic(&self) -> RatPoly {
        if self.is_zero() {
            return RatPoly::zero();
        }
        let inv = Rational::from(1) / self.leading();
        self.scale(&inv)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn eval_float(&self, x: &Float) -> Float {
        let prec = x.prec();
        let mut acc = Float::new(prec);
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += Float::with_val(prec, c);
        }
        acc
    }

    pub fn eval_complex(&self, x: &Complex) -> Complex {
        let prec = x.prec();
        let mut acc = Complex::new(prec);
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += Float::with_val(prec.0, c);
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64())
    }

    pub fn eval_c64(&self, x: num_complex::Complex64) -> num_complex::Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(num_complex::Complex64::new(0.0, 0.0), |acc, c| acc * x + c.to_f64())
    }

    pub fn derivative(&self) -> RatPoly {
        RatPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| Rational::from(c * i as u64))
                .collect(),
        )
    }

    /// Antiderivative vanishing at 0.
    pub fn antiderivative(&self) -> RatPoly {
        let mut coeffs = vec![Rational::new()];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs.push(Rational::from(c / (i as u64 + 1)));
        }
        RatPoly::new(coeffs)
    }

    pub fn pow(&self, k: u32) -> RatPoly {
        let mut result = RatPoly::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// `self ∘ inner`, evaluated by Horner's scheme.
    pub fn compose(&self, inner: &RatPoly) -> RatPoly {
        let mut acc = RatPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &RatPoly::constant(c.clone());
        }
        acc
    }

    pub fn div_rem(&self, divisor: &RatPoly) -> Result<(RatPoly, RatPoly)> {
        let dd = divisor.deg().ok_or(Error::DivisionByZero)?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((RatPoly::zero(), self.clone()));
        }
        let lead_inv = Rational::from(1) / divisor.leading();
        let mut quot = vec![Rational::new(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = Rational::from(&rem[k + dd] * &lead_inv);
            if c != 0 {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= Rational::from(&c * dc);
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((RatPoly::new(quot), RatPoly::new(rem)))
    }

    /// Exact division; fails when the remainder is nonzero.
    pub fn div_exact(&self, divisor: &RatPoly) -> Result<RatPoly> {
        let (q, r) = self.div_rem(divisor)?;
        if !r.is_zero() {
            return Err(Error::Consistency(format!("{divisor} does not divide {self}")));
        }
        Ok(q)
    }

    /// Monic greatest common divisor (zero when both are zero).
    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Product of the distinct irreducible factors, made monic.
    pub fn square_free_part(&self) -> RatPoly {
        if self.is_constant() {
            return RatPoly::one();
        }
        let g = self.gcd(&self.derivative());
        self.div_exact(&g).expect("gcd divides").monic()
    }

    /// Yun's square-free decomposition: pairs (a_i, i) with self = lc · Π a_i^i.
    pub fn square_free_decomposition(&self) -> Vec<(RatPoly, usize)> {
        let mut out = Vec::new();
        if self.is_constant() {
            return out;
        }
        let d = self.derivative();
        let a0 = self.gcd(&d);
        let mut b = self.div_exact(&a0).expect("gcd divides");
        let mut c = d.div_exact(&a0).expect("gcd divides");
        let mut i = 1;
        loop {
            let dd = &c - &b.derivative();
            if b.is_constant() {
                break;
            }
            let a = b.gcd(&dd);
            if !a.is_constant() {
                out.push((a.monic(), i));
            }
            b = b.div_exact(&a).expect("gcd divides");
            c = dd.div_exact(&a).expect("gcd divides");
            i += 1;
        }
        out
    }

    /// Polynomial with the constant term removed.
    pub fn without_constant(&self) -> RatPoly {
        let mut c = self.coeffs.clone();
        if let Some(first) = c.first_mut() {
            *first = Rational::new();
        }
        RatPoly::new(c)
    }

    /// Coefficient strings `"num/den"` in little-endian order.
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }

    pub fn from_strings<S: AsRef<str>>(items: &[S]) -> Result<RatPoly> {
        items.iter().map(|s| parse_rational(s.as_ref())).collect::<Result<Vec<_>>>().map(RatPoly::new)
    }

    /// Integer coefficient vector padded to `len`, as used by linear algebra.
    pub fn to_vec(&self, len: usize) -> Vec<Rational> {
        (0..len).map(|i| self.coeff(i)).collect()
    }
}

/// Parses `"n"` or `"n/d"` with an optional sign.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let valid = {
        let body = t.strip_prefix('-').unwrap_or(t);
        let mut parts = body.splitn(2, '/');
        let num = parts.next().unwrap_or("");
        let den = parts.next();
        !num.is_empty()
            && num.bytes().all(|b| b.is_ascii_digit())
            && den.is_none_or(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
    };
    if !valid {
        return Err(Error::InvalidInput(format!("malformed rational coefficient {s:?}")));
    }
    let r: std::result::Result<Rational, _> = t.parse();
    match r {
        Ok(r) => Ok(r),
        Err(_) => Err(Error::InvalidInput(format!("malformed rational coefficient {s:?}"))),
    }
}

/// Chebyshev polynomial of the first kind, T_n(cos θ) = cos(nθ).
pub fn chebyshev(n: i64) -> Result<RatPoly> {
    if n < 0 {
        return Err(Error::InvalidInput(format!("Chebyshev index must be non-negative, got {n}")));
    }
    let two_x = RatPoly::from_ints(&[0, 2]);
    let mut prev = RatPoly::one();
    let mut cur = RatPoly::x();
    if n == 0 {
        return Ok(prev);
    }
    for _ in 1..n {
        let next = &(&two_x * &cur) - &prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Cyclotomic polynomial Φ_n.
pub fn cyclotomic(n: usize) -> RatPoly {
    assert!(n > 0);
    let mut num = RatPoly::monomial(Rational::from(1), n);
    num = &num - &RatPoly::one();
    for d in 1..n {
        if n % d == 0 {
            num = num.div_exact(&cyclotomic(d)).expect("cyclotomic factor");
        }
    }
    num
}

/// Whether Φ_n divides `u`.
pub fn cyclotomic_divides(n: usize, u: &RatPoly) -> bool {
    if u.is_zero() {
        return true;
    }
    let (_, r) = u.div_rem(&cyclotomic(n)).expect("Φ_n is nonzero");
    r.is_zero()
}

pub fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n % d == 0).collect()
}

fn add_coeffs(a: &[Rational], b: &[Rational], sign: i32) -> RatPoly {
    let len = a.len().max(b.len());
    let mut out = Vec::with_capacity(len);
    for i in 0..len {
        let x = a.get(i).cloned().unwrap_or_default();
        let y = b.get(i).cloned().unwrap_or_default();
        out.push(if sign > 0 { x + y } else { x - y });
    }
    RatPoly::new(out)
}

impl Add for &RatPoly {
    type Output = RatPoly;
    fn add(self, rhs: &RatPoly) -> RatPoly {
        add_coeffs(&self.coeffs, &rhs.coeffs, 1)
    }
}

impl Sub for &RatPoly {
    type Output = RatPoly;
    fn sub(self, rhs: &RatPoly) -> RatPoly {
        add_coeffs(&self.coeffs, &rhs.coeffs, -1)
    }
}

impl Mul for &RatPoly {
    type Output = RatPoly;
    fn mul(self, rhs: &RatPoly) -> RatPoly {
        if self.is_zero() || rhs.is_zero() {
            return RatPoly::zero();
        }
        let mut out = vec![Rational::new(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += Rational::from(a * b);
            }
        }
        RatPoly::new(out)
    }
}

impl Neg for &RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        RatPoly { coeffs: self.coeffs.iter().map(|c| Rational::from(-c)).collect() }
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr for RatPoly {
            type Output = RatPoly;
            fn $m(self, rhs: RatPoly) -> RatPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&RatPoly> for RatPoly {
            type Output = RatPoly;
            fn $m(self, rhs: &RatPoly) -> RatPoly {
                (&self).$m(rhs)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl Neg for RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        -&self
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if *c == 0 {
                continue;
            }
            let neg = *c < 0;
            let abs = Rational::from(c.abs_ref());
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            if i == 0 {
                write!(f, "{abs}")?;
            } else if *abs.denom() != 1 {
                write!(f, "({abs})")?;
            } else if abs != 1 {
                write!(f, "{abs}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatPoly({self})")
    }
}

impl Serialize for RatPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(&c.to_string())?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for RatPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let items: Vec<String> = Vec::deserialize(deserializer)?;
        RatPoly::from_strings(&items).map_err(de::Error::custom)
    }
}

/// Serde helper for a single rational written as a string.
pub mod rational_string {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_of_zero_is_minus_infinity() {
        assert_eq!(RatPoly::zero().degree(), Degree::NegInfinity);
        assert!(Degree::NegInfinity < Degree::Finite(0));
        assert_eq!(RatPoly::from_ints(&[1, 0, 0]).degree(), Degree::Finite(0));
    }

    #[test]
    fn chebyshev_small() {
        assert_eq!(chebyshev(2).unwrap(), RatPoly::from_ints(&[-1, 0, 2]));
        assert_eq!(chebyshev(3).unwrap(), RatPoly::from_ints(&[0, -3, 0, 4]));
        assert_eq!(chebyshev(6).unwrap(), RatPoly::from_ints(&[-1, 0, 18, 0, -48, 0, 32]));
        assert!(chebyshev(-1).is_err());
    }

    #[test]
    fn rational_parsing_is_strict() {
        assert_eq!(parse_rational("-3/4").unwrap(), Rational::from((-3, 4)));
        assert_eq!(parse_rational("7").unwrap(), Rational::from(7));
        for bad in ["", "1.5", "a/b", "1/", "/2", "--1", "1/-2"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn display() {
        assert_eq!(chebyshev(2).unwrap().to_string(), "2x^2 - 1");
        assert_eq!(RatPoly::from_ints(&[0, -1]).to_string(), "-x");
        let p = RatPoly::from_strings(&["1/2", "0", "-3/4"]).unwrap();
        assert_eq!(p.to_string(), "-(3/4)x^2 + 1/2");
    }

    #[test]
    fn cyclotomic_table() {
        assert_eq!(cyclotomic(1), RatPoly::from_ints(&[-1, 1]));
        assert_eq!(cyclotomic(6), RatPoly::from_ints(&[1, -1, 1]));
        assert_eq!(cyclotomic(12), RatPoly::from_ints(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn square_free() {
        let p = RatPoly::from_ints(&[0, 0, 0, 1]);
        assert_eq!(p.square_free_part(), RatPoly::x());
        let q = &RatPoly::from_ints(&[-1, 1]).pow(2) * &RatPoly::from_ints(&[2, 1]);
        assert_eq!(q.square_free_part(), RatPoly::from_ints(&[-2, 1, 1]));
        let dec = q.square_free_decomposition();
        assert_eq!(dec, vec![(RatPoly::from_ints(&[2, 1]), 1), (RatPoly::from_ints(&[-1, 1]), 2)]);
    }
}
