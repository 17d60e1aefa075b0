#![allow(dead_code)]

use abelian_core::cycles::CycleVector;
use abelian_core::poly::RatPoly;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Rational;

pub fn t6() -> RatPoly {
    abelian_core::poly::chebyshev(6).unwrap()
}

/// (x²/2 - 1)².
pub fn quartic() -> RatPoly {
    RatPoly::new(vec![Rational::from(-1), Rational::new(), Rational::from((1, 2))]).pow(2)
}

/// Monic quintic with small integer coefficients drawn from a fixed seed.
pub fn generic_quintic() -> RatPoly {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut c: Vec<i64> = (0..5).map(|_| rng.gen_range(-4..=4)).collect();
    c.push(1);
    RatPoly::from_ints(&c)
}

pub fn random_reduced_cycle(n: usize, seed: u64) -> CycleVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut v: Vec<i64> = (0..n - 1).map(|_| rng.gen_range(-3..=3)).collect();
        let s: i64 = v.iter().sum();
        v.push(-s);
        if v.iter().any(|&x| x != 0) {
            return CycleVector::from_ints(&v);
        }
    }
}

pub fn random_poly(rng: &mut ChaCha8Rng, bound: usize) -> RatPoly {
    RatPoly::new((0..=bound).map(|_| Rational::from((rng.gen_range(-9i64..=9), rng.gen_range(1u64..=4)))).collect())
}
