//! Exact scalars and dense linear algebra.
//!
//! Two scalar rings are supported: [`Rational`] (big rationals, always in
//! lowest terms) and [`QuotientScalar`], an element of `Q[t]/(t^n + q - 1)`.
//! The modulus is usually reducible over `Q` (for instance `t^3 + 1`), so the
//! quotient ring has zero divisors. Rank is therefore only computed over the
//! rationals; determinants over the quotient ring are computed division-free.

mod linalg;
mod matrix;
mod quotient;
mod rational;
mod upoly;

pub use linalg::{
    det_division_free, det_rational, exact_rank, inverse_rational, nullity,
};
pub use matrix::Matrix;
pub use quotient::{Modulus, QuotientScalar};
pub use rational::{frac, int, parse_rational, rational_to_string, Rational};
pub use upoly::UPoly;

use std::fmt::{Debug, Display};

/// Element of a commutative ring with unit.
///
/// Constants are produced from an existing element (`zero_like`, `one_like`)
/// because quotient-ring elements carry their modulus.
pub trait Scalar: Clone + PartialEq + Debug + Display + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_int_like(&self, value: i64) -> Self;
    fn is_zero(&self) -> bool;

    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negate(&self) -> Self;

    /// Exact division by a unit.
    fn checked_div(&self, divisor: &Self) -> crate::Result<Self>;

    fn is_one(&self) -> bool {
        *self == self.one_like()
    }

    fn pow(&self, mut exp: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.times(&base);
            }
            base = base.times(&base);
            exp >>= 1;
        }
        acc
    }
}
