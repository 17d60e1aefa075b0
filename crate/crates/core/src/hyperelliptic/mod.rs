//! Polynomial 1-forms on the curves y² - f(x) = t, their reduction to k(x) y dx,
//! numeric integrals over ovals and vanishing cycles, and the vanishing criteria.

mod criteria;
mod quadrature;

use std::collections::BTreeMap;

use rug::Rational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::RatPoly;

pub use criteria::{
    check_exth, oval_values, remark_fixture, vanishing_criterion, Evidence, ExthReport, Main3Cycle, Main3Route,
    RemarkReport, VanishingVerdict,
};
pub use quadrature::{
    cauchy_j, cauchy_j_derivatives, circle_integral, form_integral, integral_i, integral_i_contour,
    integral_i_derivative, main4_limit_check, moments, morse_orders, Main4Report, Main4Sample,
    OvalFamily, RationalForm,
};

/// Bivariate polynomial keyed by (x-power, y-power).
pub type Bivariate = BTreeMap<(usize, usize), Rational>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub px: usize,
    pub py: usize,
    #[serde(with = "crate::poly::rational_string")]
    pub coeff: Rational,
}

fn to_terms(b: &Bivariate) -> Vec<Term> {
    b.iter().map(|(&(px, py), c)| Term { px, py, coeff: c.clone() }).collect()
}

fn from_terms(terms: &[Term]) -> Bivariate {
    let mut out = Bivariate::new();
    for t in terms {
        add(&mut out, t.px, t.py, &t.coeff);
    }
    out
}

fn add(b: &mut Bivariate, px: usize, py: usize, c: &Rational) {
    if *c == 0 {
        return;
    }
    let e = b.entry((px, py)).or_default();
    *e += c;
    if *e == 0 {
        b.remove(&(px, py));
    }
}

/// ω = P dx + Q dy.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OneForm {
    #[serde(default)]
    pub dx: Vec<Term>,
    #[serde(default)]
    pub dy: Vec<Term>,
}

impl OneForm {
    /// k(x) y dx.
    pub fn k_y_dx(k: &RatPoly) -> Self {
        OneForm {
            dx: k.coeffs().iter().enumerate().filter(|(_, c)| **c != 0).map(|(i, c)| Term { px: i, py: 1, coeff: c.clone() }).collect(),
            dy: Vec::new(),
        }
    }

    pub fn p(&self) -> Bivariate {
        from_terms(&self.dx)
    }

    pub fn q(&self) -> Bivariate {
        from_terms(&self.dy)
    }
}

/// ω = k(x) y dx + dA + B d(y² - f).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducedForm {
    pub k: RatPoly,
    pub a: Vec<Term>,
    pub b: Vec<Term>,
}

fn mul_x_poly(b: &mut Bivariate, c: &Rational, shift: usize, py: usize, poly: &RatPoly) {
    for (i, pc) in poly.coeffs().iter().enumerate() {
        add(b, i + shift, py, &Rational::from(c * pc));
    }
}

/// Rewrites ω to k(x) y dx + dA + B d(y² - f). dy-terms are integrated by parts; a dx-term
/// x^i y^j with j ≥ 2 drops to y-degree j - 2 through
/// x^i y^j dx = [d(x^{i+1} y^j) - (j/2) x^{i+1} y^{j-2} (dF + f' dx)] / (i+1), F = y² - f.
pub fn reduce_form(omega: &OneForm, f: &RatPoly) -> Result<ReducedForm> {
    let fp = f.derivative();
    let mut p = omega.p();
    let mut a = Bivariate::new();
    let mut b = Bivariate::new();
    for ((i, j), c) in omega.q() {
        let jj = Rational::from(j as u64 + 1);
        add(&mut a, i, j + 1, &Rational::from(&c / &jj));
        if i > 0 {
            add(&mut p, i - 1, j + 1, &(-Rational::from(&c * i as u64) / &jj));
        }
    }
    let mut k = vec![Rational::new(); 1];
    while let Some(&(i, j)) = p.keys().next_back() {
        let c = p.remove(&(i, j)).expect("present");
        match j {
            0 => add(&mut a, i + 1, 0, &(c / (i as u64 + 1))),
            1 => {
                if k.len() <= i {
                    k.resize(i + 1, Rational::new());
                }
                k[i] += c;
            }
            _ => {
                let scale = Rational::from(&c / (i as u64 + 1));
                let half_j = Rational::from((j as u64, 2u64));
                add(&mut a, i + 1, j, &scale);
                add(&mut b, i + 1, j - 2, &(-Rational::from(&scale * &half_j)));
                mul_x_poly(&mut p, &(-Rational::from(&scale * &half_j)), i + 1, j - 2, &fp);
            }
        }
    }
    let reduced = ReducedForm { k: RatPoly::new(k), a: to_terms(&a), b: to_terms(&b) };
    if !verify_reduction(omega, f, &reduced) {
        return Err(Error::Consistency("form reduction does not re-expand to the input".into()));
    }
    Ok(reduced)
}

/// Checks ω = k y dx + dA + B d(y² - f) coefficient by coefficient.
pub fn verify_reduction(omega: &OneForm, f: &RatPoly, r: &ReducedForm) -> bool {
    let fp = f.derivative();
    let mut dx = Bivariate::new();
    let mut dy = Bivariate::new();
    for (i, c) in r.k.coeffs().iter().enumerate() {
        add(&mut dx, i, 1, c);
    }
    for t in &r.a {
        if t.px > 0 {
            add(&mut dx, t.px - 1, t.py, &Rational::from(&t.coeff * t.px as u64));
        }
        if t.py > 0 {
            add(&mut dy, t.px, t.py - 1, &Rational::from(&t.coeff * t.py as u64));
        }
    }
    for t in &r.b {
        add(&mut dy, t.px, t.py + 1, &Rational::from(&t.coeff * 2u32));
        mul_x_poly(&mut dx, &(-t.coeff.clone()), t.px, t.py, &fp);
    }
    dx == omega.p() && dy == omega.q()
}
