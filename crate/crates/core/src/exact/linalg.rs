use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{Matrix, Rational, Scalar};
use crate::{Error, Result};

/// Scales each row by the lcm of its denominators so that elimination runs
/// over the integers. Row scaling by nonzero constants preserves rank.
fn integer_rows(m: &Matrix<Rational>) -> Vec<Vec<BigInt>> {
    (0..m.rows())
        .map(|i| {
            let row = m.row(i);
            let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
        })
        .collect()
}

/// Rank over `Q` by fraction-free (Bareiss) elimination. Every intermediate
/// entry is a minor of the integer-scaled input, so all divisions are exact.
pub fn exact_rank(m: &Matrix<Rational>) -> usize {
    let mut a = integer_rows(m);
    let (rows, cols) = (m.rows(), m.cols());
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pivot);
        let (top, bottom) = a.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        let p = &pivot_row[col];
        for row in bottom.iter_mut() {
            let factor = std::mem::take(&mut row[col]);
            for j in col + 1..cols {
                let value = p * &row[j] - &factor * &pivot_row[j];
                debug_assert!((&value % &prev).is_zero());
                row[j] = value / &prev;
            }
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    rank
}

/// `cols - rank`: the dimension of the right nullspace.
pub fn nullity(m: &Matrix<Rational>) -> usize {
    m.cols() - exact_rank(m)
}

/// Determinant over `Q` by Bareiss elimination.
pub fn det_rational(m: &Matrix<Rational>) -> Result<Rational> {
    if !m.is_square() {
        return Err(Error::Shape(format!("determinant of a {}x{} matrix", m.rows(), m.cols())));
    }
    let size = m.rows();
    let mut a = integer_rows(m);
    let scale = (0..size).fold(BigInt::one(), |acc, i| {
        acc * m.row(i).iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()))
    });
    let mut prev = BigInt::one();
    let mut sign = BigInt::one();
    for k in 0..size {
        let Some(pivot) = (k..size).find(|&r| !a[r][k].is_zero()) else {
            return Ok(Rational::zero());
        };
        if pivot != k {
            a.swap(k, pivot);
            sign = -sign;
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let value = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                a[i][j] = value / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let det = if size == 0 { BigInt::one() } else { prev };
    Ok(Rational::new(sign * det, scale))
}

/// Gauss-Jordan inverse over `Q`; `None` when singular.
pub fn inverse_rational(m: &Matrix<Rational>) -> Option<Matrix<Rational>> {
    if !m.is_square() {
        return None;
    }
    let size = m.rows();
    let mut a = m.to_rows();
    let mut inv = Matrix::identity(size, &Rational::zero()).to_rows();
    for col in 0..size {
        let pivot = (col..size).find(|&r| !Zero::is_zero(&a[r][col]))?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].recip();
        for j in 0..size {
            a[col][j] *= &p;
            inv[col][j] *= &p;
        }
        for i in 0..size {
            if i == col || Zero::is_zero(&a[i][col]) {
                continue;
            }
            let factor = a[i][col].clone();
            for j in 0..size {
                let da = &factor * &a[col][j];
                let di = &factor * &inv[col][j];
                a[i][j] -= da;
                inv[i][j] -= di;
            }
        }
    }
    Matrix::from_rows_like(inv, &Rational::zero()).ok()
}

/// Determinant over any commutative ring without dividing, by Berkowitz's
/// recurrence on the characteristic polynomials of the leading principal
/// submatrices. Safe over rings with zero divisors.
pub fn det_division_free<T: Scalar>(m: &Matrix<T>) -> Result<T> {
    if !m.is_square() {
        return Err(Error::Shape(format!("determinant of a {}x{} matrix", m.rows(), m.cols())));
    }
    let size = m.rows();
    let zero = m.zero_element().clone();
    let one = zero.one_like();
    if size == 0 {
        return Ok(one);
    }
    // Coefficients of det(lambda*I - A_k), highest degree first.
    let mut charpoly = vec![one.clone(), m.get(0, 0).negate()];
    for k in 1..size {
        // A_k is the leading k x k block, R the row A[k][..k], C the column A[..k][k].
        let r: Vec<T> = (0..k).map(|j| m.get(k, j).clone()).collect();
        let mut v: Vec<T> = (0..k).map(|i| m.get(i, k).clone()).collect();
        let mut toeplitz = Vec::with_capacity(k + 2);
        toeplitz.push(one.clone());
        toeplitz.push(m.get(k, k).negate());
        for _ in 0..k {
            // -R * A_k^i * C
            let dot = r.iter().zip(&v).fold(zero.clone(), |acc, (a, b)| acc.plus(&a.times(b)));
            toeplitz.push(dot.negate());
            v = (0..k)
                .map(|i| (0..k).fold(zero.clone(), |acc, j| acc.plus(&m.get(i, j).times(&v[j]))))
                .collect();
        }
        let next: Vec<T> = (0..k + 2)
            .map(|i| {
                (0..=i.min(k)).fold(zero.clone(), |acc, j| acc.plus(&toeplitz[i - j].times(&charpoly[j])))
            })
            .collect();
        charpoly = next;
    }
    let constant = charpoly[size].clone();
    Ok(if size.is_multiple_of(2) { constant } else { constant.negate() })
}
