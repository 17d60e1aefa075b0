mod common;

use abelian_core::cycles::{
    build_constellation, nontrivial_cycle_exists, real_interval_to_coefficients, vanishing_combo_to_cycle, CycleVector,
    Interval, IntervalSystem, VanishingCycleCombo,
};
use abelian_core::monodromy::monodromy;
use abelian_core::poly::RatPoly;
use abelian_core::Config;
use common::{generic_quintic, quartic, t6};
use proptest::prelude::*;
use rug::Rational;

const HALF_SQRT3: &str = "0.86602540378443864676372317075293618347140262690519031402790348972596650845440001854057309";

fn weighted(parts: &[(&str, &str, i64)]) -> IntervalSystem {
    IntervalSystem {
        intervals: parts
            .iter()
            .map(|&(a, b, w)| Interval { a: a.into(), b: b.into(), weight: Rational::from(w) })
            .collect(),
    }
}

#[test]
fn chebyshev_single_segment() {
    let cfg = Config::default();
    let rep = monodromy(&t6(), &cfg).unwrap();
    let system = IntervalSystem::single(&format!("-{HALF_SQRT3}"), HALF_SQRT3);
    let cycles = real_interval_to_coefficients(&t6(), &system, &rep, &cfg).unwrap();
    let want = CycleVector::from_ints(&[0, -1, -1, 0, 1, 1]);
    let nonzero: Vec<_> = cycles.iter().filter(|c| !c.cycle.is_zero()).collect();
    assert!(!nonzero.is_empty());
    for lc in nonzero {
        assert!(lc.cycle.is_reduced());
        assert!(lc.cycle.is_proportional_to(&want), "{:?}", lc.cycle);
    }
}

#[test]
fn chebyshev_weighted_segments() {
    let cfg = Config::default();
    let rep = monodromy(&t6(), &cfg).unwrap();
    let system = weighted(&[("-1", "-1/2", 1), ("-1/2", "1/2", -1), ("1/2", "1", 1)]);
    let cycles = real_interval_to_coefficients(&t6(), &system, &rep, &cfg).unwrap();
    let want = CycleVector::from_ints(&[1, -1, 1, -1, 1, -1]);
    let nonzero: Vec<_> = cycles.iter().filter(|c| !c.cycle.is_zero()).collect();
    assert!(!nonzero.is_empty());
    for lc in nonzero {
        assert!(lc.cycle.is_reduced());
        assert!(lc.cycle.is_proportional_to(&want), "{:?}", lc.cycle);
    }
}

#[test]
fn symmetric_oval_of_the_quartic() {
    // x from -a to a at level 1/2 passes the maximum f(0) = 1
    let cfg = Config::default();
    let f = quartic();
    let rep = monodromy(&f, &cfg).unwrap();
    let a = "0.76536686473017954345691996806191001841598367151930962315695297695519306624770546"; // √(2 - √2)
    let cycles = real_interval_to_coefficients(&f, &IntervalSystem::single(&format!("-{a}"), a), &rep, &cfg).unwrap();
    let nonzero: Vec<_> = cycles.iter().filter(|c| !c.cycle.is_zero()).collect();
    assert_eq!(nonzero.len(), 1);
    let v = &nonzero[0].cycle;
    assert!(v.is_reduced());
    assert_eq!(v.entries().iter().filter(|e| **e != 0).count(), 2);
}

#[test]
fn constellations_are_trees() {
    let cfg = Config::default();
    for p in [t6(), generic_quintic(), RatPoly::from_ints(&[0, 0, 0, 1]), quartic()] {
        let rep = monodromy(&p, &cfg).unwrap();
        let c = build_constellation(&rep, &cfg).unwrap();
        let n = p.deg().unwrap();
        assert_eq!(c.stars.len(), n);
        for verts in &c.vertices {
            assert_eq!(verts.iter().map(|v| v.multiplicity).sum::<usize>(), n);
        }
        assert!(c.is_connected());
        assert_eq!(c.edge_count() + 1, c.vertex_count(), "{p}");
        assert_eq!(c.face_count(), 1);
    }
}

#[test]
fn chebyshev_constellation_is_a_chain() {
    let cfg = Config::default();
    let rep = monodromy(&t6(), &cfg).unwrap();
    let c = build_constellation(&rep, &cfg).unwrap();
    let degrees = c.vertex_degrees();
    assert_eq!(c.vertex_count(), 13);
    assert!(c.is_connected());
    assert!(degrees.iter().all(|&d| d <= 2));
    assert_eq!(degrees.iter().filter(|&&d| d == 1).count(), 2);
    // the stars themselves all have degree 2: one ray per critical value
    assert!(degrees[..6].iter().all(|&d| d == 2));
}

#[test]
fn cube_stars_share_one_vertex() {
    let cfg = Config::default();
    let rep = monodromy(&RatPoly::from_ints(&[0, 0, 0, 1]), &cfg).unwrap();
    let c = build_constellation(&rep, &cfg).unwrap();
    assert_eq!(c.vertices.len(), 1);
    assert_eq!(c.vertices[0].len(), 1);
    assert_eq!(c.vertices[0][0].multiplicity, 3);
}

#[test]
fn nontrivial_cycles() {
    assert!(!nontrivial_cycle_exists(&RatPoly::from_ints(&[1, 1])).unwrap());
    assert!(nontrivial_cycle_exists(&t6()).unwrap());
    assert!(nontrivial_cycle_exists(&RatPoly::from_ints(&[3])).is_err());
}

#[test]
fn combo_validation() {
    assert!(VanishingCycleCombo { n_local: 3, coefficients: vec![(2, 1, 1)] }.validate().is_err());
    assert!(VanishingCycleCombo { n_local: 3, coefficients: vec![(1, 4, 1)] }.validate().is_err());
    let ok = VanishingCycleCombo { n_local: 3, coefficients: vec![(1, 3, 2)] };
    assert!(vanishing_combo_to_cycle(&ok, &[1, 1, 2], 4).is_err());
    assert!(vanishing_combo_to_cycle(&ok, &[1, 2], 4).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn vanishing_basis_relations(m in 3usize..=6, seed in any::<u64>()) {
        let n = m + 2;
        let order: Vec<usize> = {
            let mut o: Vec<usize> = (1..=n).collect();
            let s = (seed % n as u64) as usize;
            o.rotate_left(s);
            o.truncate(m);
            o
        };
        let single = |i: usize, j: usize, c: i64| {
            vanishing_combo_to_cycle(&VanishingCycleCombo { n_local: m, coefficients: vec![(i, j, c)] }, &order, n).unwrap()
        };
        let add = |a: &CycleVector, b: &CycleVector| {
            CycleVector::new(a.entries().iter().zip(b.entries()).map(|(x, y)| Rational::from(x + y)).collect())
        };
        for i in 1..=m {
            for j in i + 1..=m {
                prop_assert!(single(i, j, 1).is_reduced());
                for k in j + 1..=m {
                    prop_assert_eq!(add(&single(i, j, 1), &single(j, k, 1)), single(i, k, 1));
                }
            }
        }
        // γ_12 + γ_23 + … + γ_{m-1,m} + γ_{m,1} = 0 with γ_{m,1} = -γ_{1,m}
        let chain: Vec<(usize, usize, i64)> = (1..m).map(|i| (i, i + 1, 1)).chain([(1, m, -1)]).collect();
        let total = vanishing_combo_to_cycle(&VanishingCycleCombo { n_local: m, coefficients: chain }, &order, n).unwrap();
        prop_assert!(total.is_zero());
    }
}
