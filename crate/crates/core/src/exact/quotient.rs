use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::upoly::{write_poly, UPoly};
use super::{Rational, Scalar};
use crate::{Error, Result};

/// Parameters of the modulus `t^n + (q - 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Modulus {
    pub n: usize,
    pub q: u64,
}

impl Modulus {
    pub fn new(n: usize, q: u64) -> Result<Self> {
        if n == 0 || q < 2 {
            return Err(Error::InvalidArgument(format!(
                "quotient ring needs n >= 1 and q >= 2 (got n={n}, q={q})"
            )));
        }
        Ok(Modulus { n, q })
    }

    /// `t^n + (q - 1)` as a polynomial.
    pub fn polynomial(&self) -> UPoly {
        let mut coeffs = vec![Rational::zero(); self.n + 1];
        coeffs[0] = Rational::from_integer(BigInt::from(self.q - 1));
        coeffs[self.n] = Rational::one();
        UPoly::new(coeffs)
    }

    fn tail(&self) -> Rational {
        // t^n = -(q - 1)
        -Rational::from_integer(BigInt::from(self.q - 1))
    }
}

/// Element of `Q[t]/(t^n + q - 1)`, stored as its `n` coefficients in ascending
/// degree. Elements of different moduli never mix; doing so panics.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuotientScalar {
    modulus: Modulus,
    coeffs: Vec<Rational>,
}

impl QuotientScalar {
    /// Reduces an arbitrary coefficient vector modulo `t^n + q - 1`.
    pub fn from_coeffs(modulus: Modulus, coeffs: Vec<Rational>) -> Self {
        let n = modulus.n;
        let tail = modulus.tail();
        let mut out = vec![Rational::zero(); n];
        // t^d = t^(d mod n) * (-(q-1))^(d / n)
        let mut factor = Rational::one();
        for (chunk_index, chunk) in coeffs.chunks(n).enumerate() {
            if chunk_index > 0 {
                factor *= &tail;
            }
            for (k, c) in chunk.iter().enumerate() {
                if !Zero::is_zero(c) {
                    out[k] += c * &factor;
                }
            }
        }
        QuotientScalar { modulus, coeffs: out }
    }

    pub fn from_rational(modulus: Modulus, value: Rational) -> Self {
        Self::from_coeffs(modulus, vec![value])
    }

    pub fn zero(modulus: Modulus) -> Self {
        Self::from_coeffs(modulus, Vec::new())
    }

    pub fn one(modulus: Modulus) -> Self {
        Self::from_rational(modulus, Rational::one())
    }

    /// The class of `t`, a root of `t^n + q - 1`.
    pub fn omega(modulus: Modulus) -> Self {
        Self::from_coeffs(modulus, vec![Rational::zero(), Rational::one()])
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// The reduced representative as a polynomial of degree `< n`.
    pub fn representative(&self) -> UPoly {
        UPoly::new(self.coeffs.clone())
    }

    fn check(&self, other: &Self) {
        assert_eq!(
            self.modulus, other.modulus,
            "quotient scalars over different moduli"
        );
    }

    /// Inverse when `gcd(rep, t^n + q - 1) = 1`, found by extended Euclid.
    pub fn unit_inverse(&self) -> Option<Self> {
        self.inverse_or_witness().ok()
    }

    pub fn is_unit(&self) -> bool {
        self.unit_inverse().is_some()
    }

    fn inverse_or_witness(&self) -> std::result::Result<Self, UPoly> {
        let (g, s, _) = self.representative().ext_gcd(&self.modulus.polynomial());
        if g.degree() == Some(0) {
            Ok(Self::from_coeffs(self.modulus, s.coeffs().to_vec()))
        } else {
            Err(g)
        }
    }
}

impl Scalar for QuotientScalar {
    fn zero_like(&self) -> Self {
        Self::zero(self.modulus)
    }

    fn one_like(&self) -> Self {
        Self::one(self.modulus)
    }

    fn from_int_like(&self, value: i64) -> Self {
        Self::from_rational(self.modulus, Rational::from_integer(BigInt::from(value)))
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn plus(&self, other: &Self) -> Self {
        self.check(other);
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        QuotientScalar { modulus: self.modulus, coeffs }
    }

    fn minus(&self, other: &Self) -> Self {
        self.check(other);
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        QuotientScalar { modulus: self.modulus, coeffs }
    }

    fn times(&self, other: &Self) -> Self {
        self.check(other);
        let n = self.modulus.n;
        let tail = self.modulus.tail();
        let mut out = vec![Rational::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if Zero::is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if Zero::is_zero(b) {
                    continue;
                }
                let prod = a * b;
                if i + j < n {
                    out[i + j] += prod;
                } else {
                    out[i + j - n] += prod * &tail;
                }
            }
        }
        QuotientScalar { modulus: self.modulus, coeffs: out }
    }

    fn negate(&self) -> Self {
        QuotientScalar {
            modulus: self.modulus,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    fn checked_div(&self, divisor: &Self) -> Result<Self> {
        self.check(divisor);
        match divisor.inverse_or_witness() {
            Ok(inv) => Ok(self.times(&inv)),
            Err(g) => Err(Error::NotAUnit { witness: g.to_string() }),
        }
    }
}

impl fmt::Display for QuotientScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, &self.coeffs, "w")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{frac, int};

    fn ring(n: usize, q: u64) -> Modulus {
        Modulus::new(n, q).unwrap()
    }

    fn elt(m: Modulus, cs: &[i64]) -> QuotientScalar {
        QuotientScalar::from_coeffs(m, cs.iter().map(|&c| int(c)).collect())
    }

    #[test]
    fn omega_times_omega_pow_n_minus_one() {
        for (n, q) in [(1, 2), (2, 2), (3, 3), (5, 4)] {
            let m = ring(n, q);
            let w = QuotientScalar::omega(m);
            let prod = w.times(&w.pow(n as u64 - 1));
            assert_eq!(prod, QuotientScalar::from_rational(m, -int(q as i64 - 1)));
        }
    }

    #[test]
    fn zero_divisors_exist_for_reducible_modulus() {
        // (t + 1)(t^2 - t + 1) = t^3 + 1 = 0 in Q[t]/(t^3 + 1)
        let m = ring(3, 2);
        let prod = elt(m, &[1, 1]).times(&elt(m, &[1, -1, 1]));
        assert!(prod.is_zero());
    }

    #[test]
    fn omega_is_a_unit_with_expected_inverse() {
        let m = ring(4, 3);
        let w = QuotientScalar::omega(m);
        let inv = w.unit_inverse().unwrap();
        // -w^(n-1) / (q-1)
        let expected = w.pow(3).negate().times(&QuotientScalar::from_rational(m, frac(1, 2)));
        assert_eq!(inv, expected);
        assert!(w.times(&inv).is_one());
    }

    #[test]
    fn t_plus_one_is_not_a_unit_mod_t_cubed_plus_one() {
        let m = ring(3, 2);
        let s = elt(m, &[1, 1]);
        assert!(!s.is_unit());
        match QuotientScalar::one(m).checked_div(&s) {
            Err(Error::NotAUnit { witness }) => assert_eq!(witness, "1 + t"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(!QuotientScalar::zero(m).is_unit());
    }

    #[test]
    fn reduction_of_long_input() {
        // t^7 in Q[t]/(t^3 + 2): t^7 = t * (t^3)^2 = 4t
        let m = ring(3, 3);
        let mut cs = vec![int(0); 8];
        cs[7] = int(1);
        assert_eq!(QuotientScalar::from_coeffs(m, cs), elt(m, &[0, 4]));
    }

    #[test]
    fn display_uses_w() {
        let m = ring(3, 3);
        assert_eq!(elt(m, &[-2, 0, 1]).to_string(), "-2 + w^2");
    }
}
