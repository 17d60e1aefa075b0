mod common;

use abelian_core::monodromy::{critical_values, divisor_lattice, monodromy, DivisorLattice, Permutation};
use abelian_core::numeric::{cx, dist};
use abelian_core::poly::{decompose_all, RatPoly};
use abelian_core::Config;
use common::{generic_quintic, quartic, t6};

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 { a } else { gcd(b, a % b) }
}

fn fixtures() -> Vec<RatPoly> {
    vec![
        t6(),
        RatPoly::monomial(rug::Rational::from(1), 6),
        generic_quintic(),
        RatPoly::from_ints(&[1, -2, 0, 3, -1, 0, 1]),
        quartic(),
    ]
}

#[test]
fn chebyshev_six() {
    let rep = monodromy(&t6(), &Config::default()).unwrap();
    assert_eq!(rep.infinity, Permutation::shift(6));
    assert_eq!(rep.group_order().unwrap(), 12);
    let lat = divisor_lattice(&rep, &t6()).unwrap();
    assert_eq!(lat.members, vec![1, 2, 3, 6]);
    assert_eq!(lat.covered_by(6), vec![2, 3]);
}

#[test]
fn power_is_cyclic() {
    let p = RatPoly::monomial(rug::Rational::from(1), 6);
    let rep = monodromy(&p, &Config::default()).unwrap();
    assert_eq!(rep.generators.len(), 1);
    assert_eq!(rep.group_order().unwrap(), 6);
    assert_eq!(rep.generators[0].cycle_type(), vec![6]);
}

#[test]
fn generic_quintic_is_full_symmetric() {
    let rep = monodromy(&generic_quintic(), &Config::default()).unwrap();
    assert_eq!(rep.group_order().unwrap(), 120);
    assert!(rep.is_full_symmetric().unwrap());
}

#[test]
fn petal_product_is_infinity_and_runs_repeat() {
    let cfg = Config::default();
    for p in fixtures() {
        let a = monodromy(&p, &cfg).unwrap();
        let b = monodromy(&p, &cfg).unwrap();
        assert_eq!(a.petal_product(), a.infinity);
        assert_eq!(a.generators, b.generators);
        assert_eq!(a.to_json().fiber, b.to_json().fiber);
    }
}

#[test]
fn precision_and_step_do_not_change_permutations() {
    let cfg = Config::default();
    let fine = Config { precision_bits: 256, track_step: cfg.track_step / 2.0, ..cfg.clone() };
    for p in fixtures() {
        let a = monodromy(&p, &cfg).unwrap();
        let b = monodromy(&p, &fine).unwrap();
        assert_eq!(a.generators, b.generators, "{p}");
    }
}

#[test]
fn blocks_match_decompositions() {
    let cfg = Config::default();
    for p in fixtures() {
        let rep = monodromy(&p, &cfg).unwrap();
        let lat = divisor_lattice(&rep, &p).unwrap();
        let n = p.deg().unwrap();
        let mut algebraic: Vec<usize> = decompose_all(&p).unwrap().iter().map(|d| n / d.inner_degree()).collect();
        algebraic.sort();
        assert_eq!(lat.members, algebraic, "{p}");
        assert_eq!(lat, DivisorLattice::algebraic(&p).unwrap());
        for &a in &lat.members {
            for &b in &lat.members {
                assert!(lat.contains(gcd(a, b)));
                assert!(lat.contains(a * b / gcd(a, b)));
            }
        }
        let total: usize = lat.psi_table().values().map(Vec::len).sum();
        assert_eq!(total, n);
    }
}

#[test]
fn critical_values_to_high_accuracy() {
    let v = critical_values(&t6(), 128).unwrap();
    assert!(dist(&v[0], &cx(128, -1.0, 0.0)) < 1e-30 && dist(&v[1], &cx(128, 1.0, 0.0)) < 1e-30);
    let v = critical_values(&quartic(), 128).unwrap();
    assert_eq!(v.len(), 2);
    assert!(dist(&v[0], &cx(128, 0.0, 0.0)) < 1e-30 && dist(&v[1], &cx(128, 1.0, 0.0)) < 1e-30);
}

#[test]
fn degree_one_is_rejected() {
    assert!(monodromy(&RatPoly::from_ints(&[1, 2]), &Config::default()).is_err());
}
