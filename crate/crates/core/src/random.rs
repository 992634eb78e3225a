//! Seeded generators for exact random points.

use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::exact::{Matrix, Rational};
use crate::imm::MatTuple;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Integer in `[-bound, bound]`.
pub fn int_in<R: Rng>(rng: &mut R, bound: i64) -> Rational {
    Rational::from_integer(BigInt::from(rng.gen_range(-bound..=bound)))
}

/// Rational `a/b` with `|a| <= bound` and `1 <= b <= den_bound`.
pub fn rational_in<R: Rng>(rng: &mut R, bound: i64, den_bound: i64) -> Rational {
    let num = rng.gen_range(-bound..=bound);
    let den = rng.gen_range(1..=den_bound);
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn matrix<R: Rng>(rng: &mut R, size: usize, bound: i64, den_bound: i64) -> Matrix<Rational> {
    Matrix::from_fn(size, size, &Rational::default(), |_, _| rational_in(rng, bound, den_bound))
}

pub fn point<R: Rng>(rng: &mut R, n: usize, q: usize, bound: i64, den_bound: i64) -> MatTuple<Rational> {
    let blocks = (0..n).map(|_| matrix(rng, q, bound, den_bound)).collect();
    MatTuple::new(blocks).expect("generated blocks are square and uniform")
}
