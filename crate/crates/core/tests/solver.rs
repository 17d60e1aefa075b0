mod common;

use abelian_core::cycles::{CycleVector, IntervalSystem, Interval};
use abelian_core::monodromy::{divisor_lattice, monodromy, DivisorLattice, MonodromyRep};
use abelian_core::poly::{chebyshev, RatPoly};
use abelian_core::solver::{
    classify, puiseux_vanishes, solve_moment_problem, vanishes_exactly, verify_vanishing_numeric, z_delta_basis,
    z_delta_space, z_ud_space, BasisTag, Case, FiberSamples,
};
use abelian_core::Config;
use common::{generic_quintic, random_poly, random_reduced_cycle, t6};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rug::Rational;

fn setup(p: &RatPoly) -> (MonodromyRep, DivisorLattice) {
    let rep = monodromy(p, &Config::default()).unwrap();
    let lat = divisor_lattice(&rep, p).unwrap();
    (rep, lat)
}

fn fixtures() -> Vec<(RatPoly, CycleVector)> {
    let x6 = RatPoly::monomial(Rational::from(1), 6);
    vec![
        (t6(), CycleVector::from_ints(&[0, -1, -1, 0, 1, 1])),
        (t6(), CycleVector::from_ints(&[1, -1, 1, -1, 1, -1])),
        (x6, random_reduced_cycle(6, 11)),
        (generic_quintic(), random_reduced_cycle(5, 12)),
    ]
}

#[test]
fn oracle_and_puiseux_agree_with_the_exact_spaces() {
    let cfg = Config::default();
    let bound = 8;
    for (p, v) in fixtures() {
        let (rep, lat) = setup(&p);
        let basis = z_delta_basis(&v, &lat, bound).unwrap();
        let space = basis.space();
        assert_eq!(space, z_delta_space(&v, &lat, bound).unwrap());
        let samples = FiberSamples::new(&rep, &cfg).unwrap();
        for e in &basis.elements {
            assert!(samples.residual(&v, &e.poly).unwrap() < 2f64.powi(-32), "{p}: {}", e.poly);
            assert!(puiseux_vanishes(&p, &v, &e.poly).unwrap());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut rejected = 0;
        while rejected < 50 {
            let q = random_poly(&mut rng, bound);
            if space.contains(&q) {
                continue;
            }
            rejected += 1;
            assert!(samples.residual(&v, &q).unwrap() > 2f64.powi(-12), "{p}: {q}");
            assert!(!puiseux_vanishes(&p, &v, &q).unwrap());
        }
    }
}

#[test]
fn bases_grow_with_the_bound() {
    for (p, v) in fixtures() {
        let (_, lat) = setup(&p);
        let mut prev = z_delta_space(&v, &lat, 2).unwrap();
        for bound in 3..=10 {
            let cur = z_delta_space(&v, &lat, bound).unwrap();
            assert!(cur.contains_space(&prev));
            prev = cur;
        }
    }
}

#[test]
fn chebyshev_single_segment_space() {
    let (_, lat) = setup(&t6());
    let v = CycleVector::from_ints(&[0, -1, -1, 0, 1, 1]);
    let t2 = chebyshev(2).unwrap();
    let t3 = chebyshev(3).unwrap();
    let gens = vec![RatPoly::one(), t2.clone(), t2.pow(2), t2.pow(3), t3.clone(), t3.pow(2)];
    let want = abelian_core::linalg::PolySpace::span(&gens, 6);
    let got = z_delta_basis(&v, &lat, 6).unwrap();
    assert_eq!(got.space(), want);
    assert_eq!(got.dim(), 5);
    assert_eq!(z_ud_space(&lat, 6, 6).unwrap(), want);
    assert!(got.elements.iter().any(|e| matches!(e.tag, BasisTag::Pullback { .. })));
}

#[test]
fn pullback_sums_vanish_numerically() {
    let cfg = Config::default();
    let (rep, lat) = setup(&t6());
    let v = CycleVector::from_ints(&[0, -1, -1, 0, 1, 1]);
    let q = &RatPoly::from_ints(&[2, -1, 3]).compose(&chebyshev(3).unwrap())
        + &RatPoly::from_ints(&[0, 5, 0, -2]).compose(&chebyshev(2).unwrap());
    assert!(vanishes_exactly(&v, &lat, &q).unwrap());
    let report = verify_vanishing_numeric(&v, &q, &rep, &cfg).unwrap();
    assert!(report.vanishes, "{report:?}");
    let c = classify(&v, &q, &lat).unwrap();
    assert_eq!(c.case, Case::PullbackSum);
    assert!(c.remainder.is_zero());
}

#[test]
fn certificates_reverify() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (p, v) in fixtures() {
        let (_, lat) = setup(&p);
        let basis = z_delta_basis(&v, &lat, 9).unwrap();
        for _ in 0..5 {
            let mut q = RatPoly::zero();
            for e in &basis.elements {
                let c = Rational::from(rand::Rng::gen_range(&mut rng, -5i64..=5));
                q = &q + &e.poly.scale(&c);
            }
            let report = classify(&v, &q, &lat).unwrap();
            assert!(report.vanishes);
            let recomposed = report.pullbacks.iter().fold(report.remainder.clone(), |acc, pb| &acc + &pb.outer.compose(&pb.factor));
            assert_eq!(recomposed, q);
            assert!(report.remainder_in_trace_kernel);
        }
        let off = random_poly(&mut rng, 9);
        if !basis.space().contains(&off) {
            assert_eq!(classify(&v, &off, &lat).unwrap().case, Case::NonVanishing);
        }
    }
}

#[test]
fn full_fiber_and_polynomial_cases() {
    let p = RatPoly::from_ints(&[0, 1, 0, 1]);
    let (_, lat) = setup(&p);
    let ones = CycleVector::from_ints(&[2, 2, 2]);
    // Σ x_i² = -2 on x³ + x = z
    let q = RatPoly::new(vec![Rational::from((2, 3)), Rational::new(), Rational::from(1)]);
    let report = classify(&ones, &q, &lat).unwrap();
    assert_eq!(report.case, Case::ScalarFullFiber);
    let (_, lat) = setup(&t6());
    let v = CycleVector::from_ints(&[1, -1, 0, 0, 0, 0]);
    let q = RatPoly::from_ints(&[1, 2]).compose(&t6());
    assert_eq!(classify(&v, &q, &lat).unwrap().case, Case::PolynomialInP);
}

#[test]
fn weighted_moment_problem() {
    let cfg = Config::default();
    let (rep, lat) = setup(&t6());
    let system = IntervalSystem {
        intervals: [("-1", "-1/2", -1), ("-1/2", "1/2", 1), ("1/2", "1", -1)]
            .iter()
            .map(|&(a, b, w)| Interval { a: a.into(), b: b.into(), weight: Rational::from(-w) })
            .collect(),
    };
    let sol = solve_moment_problem(&t6(), &system, 6, &rep, &lat, &cfg).unwrap();
    let w = RatPoly::from_ints(&[0, -3, 0, 4]).scale(&Rational::from((1, 4)));
    let half = RatPoly::new(vec![Rational::from((-1, 2)), Rational::new(), Rational::from(1)]);
    let gens = vec![RatPoly::one(), t6(), RatPoly::x(), half.clone(), &RatPoly::x() * &w, &half * &w];
    assert_eq!(sol.basis.space(), abelian_core::linalg::PolySpace::span(&gens, 6));
    let kernel: Vec<&RatPoly> =
        sol.basis.elements.iter().filter(|e| e.tag == BasisTag::TraceKernel).map(|e| &e.poly).collect();
    assert!(kernel.contains(&&RatPoly::x()) && kernel.contains(&&half));
}

#[test]
fn puiseux_handles_non_monic_leading_coefficients() {
    let p = RatPoly::new(vec![Rational::from(1), Rational::from(-1), Rational::new(), Rational::from((3, 2))]);
    let (rep, lat) = setup(&p);
    let cfg = Config::default();
    let v = random_reduced_cycle(3, 4);
    let samples = FiberSamples::new(&rep, &cfg).unwrap();
    for e in z_delta_basis(&v, &lat, 7).unwrap().elements {
        assert!(puiseux_vanishes(&p, &v, &e.poly).unwrap());
        assert!(samples.residual(&v, &e.poly).unwrap() < 1e-20);
    }
    assert!(!puiseux_vanishes(&p, &v, &RatPoly::x()).unwrap());
}
