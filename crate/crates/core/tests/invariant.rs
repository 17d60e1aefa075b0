mod common;

use abelian_core::invariant::{
    bilinear, decompose_v_delta, nonzero_pairings, pairing_is_zero, u_d_basis, u_d_dimension_table, v_d_basis,
};
use abelian_core::monodromy::DivisorLattice;
use abelian_core::poly::{chebyshev, RatPoly};
use proptest::prelude::*;
use rug::Rational;

fn lattices() -> Vec<DivisorLattice> {
    let x = |k| RatPoly::monomial(Rational::from(1), k);
    [
        chebyshev(6).unwrap(),
        chebyshev(12).unwrap(),
        x(6),
        x(8),
        x(12),
        RatPoly::from_ints(&[1, -2, 0, 3, -1, 0, 1]),
        RatPoly::from_ints(&[0, 1, 1]).compose(&x(3)).compose(&RatPoly::from_ints(&[0, 1, 0, 1])),
    ]
    .iter()
    .map(|p| DivisorLattice::algebraic(p).unwrap())
    .collect()
}

fn rational_vec(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| Rational::from(x)).collect()
}

#[test]
fn chebyshev_six_fixtures() {
    let lat = DivisorLattice::algebraic(&chebyshev(6).unwrap()).unwrap();
    let dec = decompose_v_delta(&rational_vec(&[0, -1, -1, 0, 1, 1]), &lat).unwrap();
    assert_eq!(dec.components, vec![6]);
    let dec = decompose_v_delta(&rational_vec(&[1, -1, 1, -1, 1, -1]), &lat).unwrap();
    assert_eq!(dec.components, vec![2]);
    assert_eq!(dec.nonzero_exponents, vec![3]);
    let dec = decompose_v_delta(&rational_vec(&[1, 1, 1, 1, 1, 1]), &lat).unwrap();
    assert_eq!(dec.components, vec![1]);
}

#[test]
fn psi_sets_partition_the_exponents() {
    for lat in lattices() {
        let n = lat.degree;
        let mut all: Vec<usize> = lat.psi_table().into_values().flatten().collect();
        all.sort();
        assert_eq!(all, (1..=n).collect::<Vec<_>>());
        let dims = u_d_dimension_table(&lat).unwrap();
        assert_eq!(dims.values().sum::<usize>(), n);
    }
}

#[test]
fn u_spaces_are_mutually_orthogonal() {
    for lat in lattices() {
        for &d in &lat.members {
            for &e in lat.members.iter().filter(|&&e| e != d) {
                for a in u_d_basis(d, &lat).unwrap() {
                    for b in u_d_basis(e, &lat).unwrap() {
                        assert_eq!(bilinear(&a, &b), 0, "U_{d} vs U_{e}");
                    }
                }
            }
        }
    }
}

#[test]
fn translates_pair_alike() {
    for lat in lattices() {
        let n = lat.degree;
        for &d in &lat.members {
            let basis = v_d_basis(d, n).unwrap();
            for k in 1..=n {
                let first = pairing_is_zero(&basis[0], k).unwrap();
                for e in &basis[1..] {
                    assert_eq!(pairing_is_zero(e, k).unwrap(), first);
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn conjugate_exponents_share_zero_sets(v in prop::collection::vec(-4i64..=4, 2..=12)) {
        let v = rational_vec(&v);
        let n = v.len();
        for k in 1..n {
            prop_assert_eq!(pairing_is_zero(&v, k).unwrap(), pairing_is_zero(&v, n - k).unwrap());
        }
    }

    #[test]
    fn cycles_miss_the_other_components(idx in 0usize..7, seed in any::<u64>()) {
        let lat = &lattices()[idx];
        let v = common::random_reduced_cycle(lat.degree, seed);
        let dec = decompose_v_delta(v.entries(), lat).unwrap();
        let nonzero = nonzero_pairings(v.entries()).unwrap();
        prop_assert_eq!(&dec.nonzero_exponents, &nonzero);
        for &d in lat.members.iter().filter(|d| !dec.components.contains(d)) {
            for u in u_d_basis(d, lat).unwrap() {
                prop_assert_eq!(bilinear(v.entries(), &u), 0);
            }
        }
        // reduced cycles never reach U_1 = span of the all-ones vector
        prop_assert!(!dec.components.contains(&1));
    }
}
