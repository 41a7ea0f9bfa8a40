//! Seeded random inputs for the invariant sweeps.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geom::{GapVector, IntervalFamily};
use crate::rational::Rational;

pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// `k / denom` with `k` uniform in `0..=denom`.
pub fn unit_rational(rng: &mut impl Rng, denom: u64) -> Rational {
    Rational::new(BigInt::from(rng.random_range(0..=denom)), BigInt::from(denom))
}

/// Uniform-ish point of `[0,1]^m` on a random grid. Small denominators show up
/// often enough to hit boundary cases.
pub fn unit_cube_point(rng: &mut impl Rng, m: usize) -> GapVector {
    let denom = *[2u64, 3, 6, 12, 1 << 20, 999_983].get(rng.random_range(0..6)).unwrap();
    GapVector::new((0..m).map(|_| unit_rational(rng, denom)).collect()).expect("odd m")
}

/// Non-negative vector with entries up to `scale`, each on its own grid.
pub fn orthant_point(rng: &mut impl Rng, m: usize, scale: u64) -> GapVector {
    GapVector::new(
        (0..m)
            .map(|_| {
                let denom = rng.random_range(1..=1000u64);
                Rational::new(
                    BigInt::from(rng.random_range(0..=scale * denom)),
                    BigInt::from(denom),
                )
            })
            .collect(),
    )
    .expect("odd m")
}

/// Necklace with entries drawn from a fine grid, so ties are rare.
pub fn fine_necklace(rng: &mut impl Rng, m: usize) -> GapVector {
    let denom = 1_000_000u64;
    GapVector::new(
        (0..m)
            .map(|_| Rational::new(BigInt::from(rng.random_range(0..=10 * denom)), BigInt::from(denom)))
            .collect(),
    )
    .expect("odd m")
}

/// Interval family with `n` intervals, non-negative lengths and gaps, some degenerate.
pub fn interval_family(rng: &mut impl Rng, n: usize) -> IntervalFamily {
    let m = 2 * n - 1;
    let denom = rng.random_range(1..=12u64);
    let mut endpoints = vec![Rational::from_integer(0.into())];
    let mut at = endpoints[0].clone();
    for _ in 0..m {
        let step = if rng.random_bool(0.1) {
            Rational::from_integer(0.into())
        } else {
            Rational::new(BigInt::from(rng.random_range(0..=3 * denom)), BigInt::from(denom))
        };
        at += step;
        endpoints.push(at.clone());
    }
    IntervalFamily::new(endpoints).expect("weakly increasing from 0")
}

/// Point near the unit cube, sometimes slightly outside it.
pub fn near_cube_point(rng: &mut impl Rng, m: usize) -> GapVector {
    let denom = 8u64;
    GapVector::new(
        (0..m)
            .map(|_| {
                Rational::new(BigInt::from(rng.random_range(-2..=10i64)), BigInt::from(denom))
            })
            .collect(),
    )
    .expect("odd m")
}
